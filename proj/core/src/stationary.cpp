#include "remotetrack/stationary.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace remotetrack::analytics {

namespace {

void require_square_stochastic(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw std::invalid_argument("transition matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (std::abs(p.row(i).sum() - 1.0) > 1e-9 || p.row(i).minCoeff() < -1e-15) {
      throw std::invalid_argument("row " + std::to_string(i) + " is not a probability vector");
    }
  }
}

}  // namespace

double stationary_residual(const Eigen::MatrixXd& transition, const Eigen::VectorXd& pi) {
  return (transition.transpose() * pi - pi).cwiseAbs().maxCoeff();
}

int closed_class_count(const Eigen::MatrixXd& transition) {
  const auto n = static_cast<int>(transition.rows());
  // Transitive closure; N stays small (<= a few dozen) for every caller.
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (int j = 0; j < n; ++j) {
      if (transition(i, j) > 0.0) reach[i][j] = 1;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = 1;
      }
    }
  }
  // A state is recurrent iff everything it reaches reaches it back; count
  // classes by their smallest member.
  int classes = 0;
  for (int i = 0; i < n; ++i) {
    bool closed = true;
    bool smallest = true;
    for (int j = 0; j < n && closed; ++j) {
      if (reach[i][j] && !reach[j][i]) closed = false;
      if (j < i && reach[i][j] && reach[j][i]) smallest = false;
    }
    if (closed && smallest) ++classes;
  }
  return classes;
}

StationaryDistribution stationary_power_iteration(const Eigen::MatrixXd& transition,
                                                  double tolerance, long max_iterations) {
  require_square_stochastic(transition);
  const auto n = transition.rows();
  const Eigen::MatrixXd lazy_t =
      0.5 * (transition.transpose() + Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (long it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = lazy_t * pi;
    next /= next.sum();
    const double step = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
    if (step < tolerance) break;
  }
  return {pi, stationary_residual(transition, pi)};
}

StationaryDistribution stationary(const Eigen::MatrixXd& transition) {
  require_square_stochastic(transition);
  if (const int classes = closed_class_count(transition); classes != 1) {
    throw ReducibleChainError("chain has " + std::to_string(classes) +
                              " closed classes; stationary distribution is not unique");
  }
  const auto n = transition.rows();
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd a = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (lu.isInvertible()) {
    Eigen::VectorXd pi = lu.solve(b);
    // Clamp round-off negatives on transient states.
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    const double residual = stationary_residual(transition, pi);
    if (residual < 1e-12) return {pi, residual};
  }
  return stationary_power_iteration(transition);
}

StationaryDistribution stationary(const ErrorChain& chain) { return stationary(chain.matrix); }

}  // namespace remotetrack::analytics
