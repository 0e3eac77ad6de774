#pragma once

#include <Eigen/Dense>

#include "remotetrack/process_model.hpp"

namespace remotetrack::analytics {

/// Transition matrix of the reconstruction error E_t = |X_t - X_hat_t|
/// under randomized stationary sampling. Row i is the law of E_{t+1} given
/// E_t = i, averaged over the stationary (X_t, X_hat_t) pairs at distance i.
struct ErrorChain {
  Eigen::MatrixXd matrix;
  SourceModel source;
  double p_sample;
  double p_s;

  int n_states() const { return source.n_states(); }
  double operator()(int i, int j) const { return matrix(i, j); }
};

/// Closed-form error chain for a general N-state symmetric source.
/// Throws std::invalid_argument if a probability lies outside [0, 1].
ErrorChain build_error_chain(const SourceModel& source, double p_sample, double p_s);

}  // namespace remotetrack::analytics
