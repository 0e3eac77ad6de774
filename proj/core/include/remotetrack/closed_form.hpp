#pragma once

#include <Eigen/Dense>

#include <optional>

#include "remotetrack/error_chain.hpp"
#include "remotetrack/policies.hpp"
#include "remotetrack/process_model.hpp"

namespace remotetrack::analytics {

/// Time-averaged reconstruction error of randomized stationary sampling.
/// Dedicated expressions for N = 2 and N = 3; larger N goes through the
/// stationary solve of the error chain.
double p_error_rs(const SourceModel& source, double p_sample, double p_s);

/// Change-aware or semantics-aware reconstruction error. Empty outside
/// N in {2, 3}, where no closed form is known. Throws std::invalid_argument
/// for any other policy kind.
std::optional<double> p_error_policy(PolicyKind policy, const SourceModel& source, double p_s);

/// P_E - P_E^2: the indicator 1(E_t != 0) is Bernoulli(P_E).
double variance(double p_error);

/// Two-state lumping (synced / erroneous) of the error process.
struct ConsecutiveChain {
  double p_0e = 0.0;
  double p_ee = 0.0;
};

/// Exact for randomized stationary sampling because P_{i,0} does not depend
/// on i >= 1.
ConsecutiveChain consecutive_from_chain(const ErrorChain& chain);

/// Stationary probability of having been in error for exactly run_length
/// consecutive slots (run_length = 0 is the synced state). Throws
/// std::domain_error when p_ee = 1.
double consecutive_stationary(const ConsecutiveChain& cc, int run_length);

/// Mean current run length, sum_x x pi_x. Throws std::domain_error when
/// p_ee = 1.
double avg_consecutive_error(const ConsecutiveChain& cc);

/// sum_{x=1..n} kappa^x pi_x.
double memory_cost(const ConsecutiveChain& cc, double kappa, int horizon);

/// Stationary law of (X_t, X_hat_t).
struct JointStationary {
  Eigen::MatrixXd pi;
  PolicyKind policy;

  /// Row-major sum over i != j, the same order actuation_cost uses.
  double off_diagonal_mass() const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < pi.rows(); ++i) {
      for (Eigen::Index j = 0; j < pi.cols(); ++j) {
        if (i != j) total += pi(i, j);
      }
    }
    return total;
  }
};

/// Closed forms for N in {2, 3} and the RS, CA and SA policies; empty for
/// other N. p_sample is read for RS only. Throws std::invalid_argument for
/// the uniform policy and std::domain_error when the law is not unique
/// (frozen source that is never corrected).
std::optional<JointStationary> joint_stationary(PolicyKind policy, const SourceModel& source,
                                                double p_sample, double p_s);

/// sum_{i != j} C_ij pi_ij. Works on closed-form laws and on simulated
/// occupancy alike.
double actuation_cost(const Eigen::MatrixXd& joint, const CostMatrix& costs);
double actuation_cost(const JointStationary& joint, const CostMatrix& costs);

struct PolicyFeasibility {
  bool semantics_aware = false;
  bool change_aware = false;
  bool uniform = false;
};

struct OptimizationResult {
  double p_star = 0.0;
  double p_error_star = 0.0;
  double eta = 0.0;
  int period_d = 0;
  PolicyFeasibility feasibility;
};

/// Minimises the N = 2 RS reconstruction error subject to a sampling rate of
/// at most eta. The objective decreases in p_sample, so the optimum sits on
/// the budget. Uniform feasibility is judged for the given period.
OptimizationResult optimize_rs(const SourceModel& source, double p_s, double eta,
                               int uniform_period_d = 5);

/// Smallest p_sample at which RS beats change-aware sampling (N = 3).
double rs_vs_ca_threshold(const SourceModel& source, double p_s);

/// Ordering predicate: RS reconstruction error is below change-aware's.
bool rs_beats_change_aware(const SourceModel& source, double p_sample, double p_s);

/// Every closed-form metric available for one operating point. Unset fields
/// have no closed form for this (policy, N).
struct AnalyticMetrics {
  std::optional<double> p_error;
  std::optional<double> variance;
  std::optional<double> avg_consecutive_error;
  std::optional<double> cost_memory_error;
  std::optional<double> cost_actuation_error;
  std::optional<double> sampling_rate;
};

AnalyticMetrics evaluate_closed_form(const PolicyConfig& policy, const SourceModel& source,
                                     const ChannelModel& channel, double kappa, int memory_horizon,
                                     const CostMatrix& costs);

}  // namespace remotetrack::analytics
