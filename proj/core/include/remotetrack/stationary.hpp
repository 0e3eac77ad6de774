#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "remotetrack/error_chain.hpp"

namespace remotetrack::analytics {

struct StationaryDistribution {
  Eigen::VectorXd pi;
  /// max_j |(pi P - pi)_j| for the matrix it was computed from.
  double residual = 0.0;
};

/// Thrown when a chain has more than one closed class, so no unique
/// stationary distribution exists.
class ReducibleChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves pi P = pi, sum(pi) = 1 by replacing one balance equation with the
/// normalisation row. Falls back to power iteration when the system is
/// singular to working precision.
StationaryDistribution stationary(const Eigen::MatrixXd& transition);
StationaryDistribution stationary(const ErrorChain& chain);

/// Power iteration on the lazy chain (P + I) / 2, which shares the
/// stationary law of P but is aperiodic.
StationaryDistribution stationary_power_iteration(const Eigen::MatrixXd& transition,
                                                  double tolerance = 1e-13,
                                                  long max_iterations = 10'000'000);

/// Number of closed communicating classes of the directed graph P_ij > 0.
int closed_class_count(const Eigen::MatrixXd& transition);

double stationary_residual(const Eigen::MatrixXd& transition, const Eigen::VectorXd& pi);

}  // namespace remotetrack::analytics
