#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "remotetrack/policies.hpp"
#include "remotetrack/process_model.hpp"

namespace remotetrack {

struct SimulationConfig {
  SimulationConfig(SourceModel source_model, ChannelModel channel_model, PolicyConfig policy_config)
      : source(source_model), channel(channel_model), policy(policy_config) {}

  SourceModel source;
  ChannelModel channel;
  PolicyConfig policy;
  std::uint64_t horizon_slots = 1'000'000;
  std::uint64_t seed = 1;
  double memory_kappa = 2.0;
  int memory_horizon_n = 10;
  /// Must match source.n_states(); empty means unit off-diagonal costs.
  std::optional<CostMatrix> cost_matrix;
  /// Slots simulated from the synced start X_0 = X_hat_0 = 0 before measuring.
  std::uint64_t burn_in_slots = 1000;

  /// Throws std::invalid_argument (or std::overflow_error) on a bad config.
  void validate() const;
};

/// Empirical time averages over the measured window.
struct MetricsReport {
  double p_error = 0.0;
  double variance = 0.0;
  double avg_consecutive_error = 0.0;
  double cost_memory_error = 0.0;
  double cost_actuation_error = 0.0;
  double sampling_rate = 0.0;
  /// Fraction of transmissions decoded; NaN when nothing was sent.
  double success_rate = 0.0;

  /// Completed (and the final, possibly truncated) erroneous-run lengths,
  /// counted in measured slots only.
  std::map<std::uint64_t, std::uint64_t> consecutive_histogram;
  /// Empirical frequency of (X_t, X_hat_t); sums to 1.
  Eigen::MatrixXd joint_occupancy;
  /// Counts of E_t = i followed by E_{t+1} = j inside the measured window.
  Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> error_transitions;

  std::uint64_t measured_slots = 0;
  std::uint64_t error_slots = 0;
  std::uint64_t samples = 0;
  std::uint64_t deliveries = 0;

  bool operator==(const MetricsReport& other) const;
};

MetricsReport run(const SimulationConfig& config);

/// Conditional frequencies of the error process; rows never visited are
/// reported as unknown rather than imputed.
struct ErrorChainEstimate {
  Eigen::MatrixXd probabilities;
  std::vector<std::uint64_t> row_visits;

  bool row_known(int i) const { return row_visits[static_cast<std::size_t>(i)] > 0; }
};

ErrorChainEstimate estimate_error_chain(const MetricsReport& report);
ErrorChainEstimate estimate_error_chain(const SimulationConfig& config);

/// Aggregated synced/erroneous transition frequencies. Either estimate is
/// empty when its conditioning state was never visited.
struct ConsecutiveEstimate {
  std::optional<double> p_0e;
  std::optional<double> p_ee;
  std::uint64_t synced_visits = 0;
  std::uint64_t error_visits = 0;
};

ConsecutiveEstimate estimate_consecutive_params(const MetricsReport& report);
ConsecutiveEstimate estimate_consecutive_params(const SimulationConfig& config);

}  // namespace remotetrack
