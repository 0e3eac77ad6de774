#include "remotetrack/error_chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace remotetrack::analytics {

ErrorChain build_error_chain(const SourceModel& source, double p_sample, double p_s) {
  auto check = [](double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
  };
  check(p_sample, "p_sample");
  check(p_s, "p_s");

  const int n = source.n_states();
  const double nd = n;
  const double p = source.p_change();
  const double q = source.p_stay();

  // Sample taken and lost / sample taken and decoded.
  const double h0 = p_sample * (1.0 - p_s);
  const double h1 = p_sample * p_s;
  // Probability of a jump to one particular state while X_hat stays put,
  // and of staying while X_hat stays put.
  const double jump_kept = p * h0 + p * (1.0 - p_sample);
  const double stay_kept = q * h0 + q * (1.0 - p_sample);

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);

  m(0, 0) = q + (nd - 1.0) * p * h1;
  for (int i = 1; i < n; ++i) m(i, 0) = p + q * h1 + (nd - 2.0) * p * h1;
  for (int j = 1; j < n; ++j) m(0, j) = 2.0 * (1.0 - j / nd) * jump_kept;

  for (int i = 1; i < n; ++i) {
    // 1 <= i <= (N-1)/2 and N/2 <= i <= N-1, compared in integers.
    if (2 * i <= n - 1) {
      m(i, i) = (nd - 2.0 * i) / (nd - i) * jump_kept + stay_kept;
    } else if (2 * i >= n) {
      m(i, i) = stay_kept;
    }
  }

  for (int j = 2; j < n; ++j) m(1, j) = (2.0 * nd - 2.0 * j - 1.0) / (nd - 1.0) * jump_kept;
  for (int i = 2; i < n; ++i) m(i, 1) = (2.0 * nd - 2.0 * i - 1.0) / (nd - i) * jump_kept;

  // Upper block, i >= 2 and j > i.
  for (int i = 2; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (n <= j) continue;
      if (j + 1 <= n && n <= i + j - 1) {
        m(i, j) = (nd - j) / (nd - i) * jump_kept;
      } else if (n >= i + j) {
        m(i, j) = (2.0 * nd - i - 2.0 * j) / (nd - i) * jump_kept;
      }
    }
  }

  // Lower block, j >= 2 and i > j.
  for (int j = 2; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      if (n <= i) continue;
      if (i + 1 <= n && n <= i + j - 1) {
        m(i, j) = jump_kept;
      } else if (n >= i + j) {
        m(i, j) = (2.0 * nd - j - 2.0 * i) / (nd - i) * jump_kept;
      }
    }
  }

  return ErrorChain{std::move(m), source, p_sample, p_s};
}

}  // namespace remotetrack::analytics
