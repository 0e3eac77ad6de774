#include "remotetrack/simulator.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace remotetrack {

namespace {

// 53 random mantissa bits; portable and stable across standard libraries,
// unlike std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void SimulationConfig::validate() const {
  policy.validate();
  if (horizon_slots < 1) throw std::invalid_argument("horizon_slots must be >= 1");
  if (horizon_slots > std::numeric_limits<std::uint64_t>::max() - burn_in_slots) {
    throw std::overflow_error("horizon_slots + burn_in_slots overflows the slot counter");
  }
  if (!(memory_kappa > 0.0) || !std::isfinite(memory_kappa)) {
    throw std::invalid_argument("memory_kappa must be positive");
  }
  if (memory_horizon_n < 1) throw std::invalid_argument("memory_horizon_n must be >= 1");
  if (cost_matrix && cost_matrix->n_states() != source.n_states()) {
    throw std::invalid_argument("cost matrix is " + std::to_string(cost_matrix->n_states()) +
                                "x" + std::to_string(cost_matrix->n_states()) + " but source has " +
                                std::to_string(source.n_states()) + " states");
  }
}

bool MetricsReport::operator==(const MetricsReport& other) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  return same(p_error, other.p_error) && same(variance, other.variance) &&
         same(avg_consecutive_error, other.avg_consecutive_error) &&
         same(cost_memory_error, other.cost_memory_error) &&
         same(cost_actuation_error, other.cost_actuation_error) &&
         same(sampling_rate, other.sampling_rate) && same(success_rate, other.success_rate) &&
         consecutive_histogram == other.consecutive_histogram &&
         joint_occupancy == other.joint_occupancy &&
         error_transitions == other.error_transitions && measured_slots == other.measured_slots &&
         error_slots == other.error_slots && samples == other.samples &&
         deliveries == other.deliveries;
}

MetricsReport run(const SimulationConfig& config) {
  config.validate();

  const int n = config.source.n_states();
  const CostMatrix costs = config.cost_matrix.value_or(CostMatrix::unit(n));

  // C_M(x) = kappa^x for 1 <= x <= n, zero beyond the memory horizon.
  std::vector<double> memory_weight(static_cast<std::size_t>(config.memory_horizon_n) + 1, 0.0);
  for (int x = 1; x <= config.memory_horizon_n; ++x) {
    memory_weight[static_cast<std::size_t>(x)] = std::pow(config.memory_kappa, x);
  }

  MetricsReport report;
  report.joint_occupancy = Eigen::MatrixXd::Zero(n, n);
  report.error_transitions.setZero(n, n);
  Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> joint_counts;
  joint_counts.setZero(n, n);

  std::mt19937_64 rng(config.seed);

  SystemState state;
  std::uint64_t run_length = 0;           // true length of the current erroneous run
  std::uint64_t measured_run_length = 0;  // part of it inside the measured window
  double run_length_sum = 0.0;
  double memory_sum = 0.0;
  double actuation_sum = 0.0;
  std::uint64_t error_sq_sum = 0;

  const std::uint64_t total = config.burn_in_slots + config.horizon_slots;
  for (std::uint64_t slot = 1; slot <= total; ++slot) {
    // Draw order per slot: source, policy, channel.
    const double u_source = unit_draw(rng);
    const double u_policy = unit_draw(rng);
    const double u_channel = unit_draw(rng);

    const int next_x = source_step(config.source, state.x, u_source);
    const PolicyContext ctx{state.x, next_x, state.x_hat, slot, true};
    const bool measuring = slot > config.burn_in_slots;
    const int prev_error = state.error();

    if (decide_sample(config.policy, ctx, u_policy) == SamplingDecision::sample) {
      if (measuring) ++report.samples;
      if (channel_outcome(config.channel, u_channel) == ChannelOutcome::success) {
        state.x_hat = next_x;
        if (measuring) ++report.deliveries;
      }
    }
    state.x = next_x;
    state.slot = slot;

    const int error = state.error();
    if (error != 0) {
      ++run_length;
    } else {
      if (measured_run_length > 0) ++report.consecutive_histogram[measured_run_length];
      run_length = 0;
      measured_run_length = 0;
    }

    if (!measuring) continue;

    ++report.measured_slots;
    ++joint_counts(state.x, state.x_hat);
    actuation_sum += costs(state.x, state.x_hat);
    // The first measured slot has no measured predecessor.
    if (slot > config.burn_in_slots + 1) ++report.error_transitions(prev_error, error);
    if (error != 0) {
      ++report.error_slots;
      ++error_sq_sum;  // indicator squared
      ++measured_run_length;
      run_length_sum += static_cast<double>(run_length);
      if (run_length <= static_cast<std::uint64_t>(config.memory_horizon_n)) {
        memory_sum += memory_weight[static_cast<std::size_t>(run_length)];
      }
    }
  }
  if (measured_run_length > 0) ++report.consecutive_histogram[measured_run_length];

  const auto t = static_cast<double>(report.measured_slots);
  report.p_error = static_cast<double>(report.error_slots) / t;
  report.variance = static_cast<double>(error_sq_sum) / t - report.p_error * report.p_error;
  report.avg_consecutive_error = run_length_sum / t;
  report.cost_memory_error = memory_sum / t;
  report.cost_actuation_error = actuation_sum / t;
  report.sampling_rate = static_cast<double>(report.samples) / t;
  report.success_rate = report.samples > 0 ? static_cast<double>(report.deliveries) /
                                                 static_cast<double>(report.samples)
                                           : std::numeric_limits<double>::quiet_NaN();
  report.joint_occupancy = joint_counts.cast<double>() / t;
  return report;
}

ErrorChainEstimate estimate_error_chain(const MetricsReport& report) {
  const auto n = report.error_transitions.rows();
  ErrorChainEstimate est;
  est.probabilities = Eigen::MatrixXd::Zero(n, n);
  est.row_visits.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::uint64_t visits = report.error_transitions.row(i).sum();
    est.row_visits[static_cast<std::size_t>(i)] = visits;
    if (visits == 0) {
      est.probabilities.row(i).setConstant(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      est.probabilities(i, j) = static_cast<double>(report.error_transitions(i, j)) /
                                static_cast<double>(visits);
    }
  }
  return est;
}

ErrorChainEstimate estimate_error_chain(const SimulationConfig& config) {
  return estimate_error_chain(run(config));
}

ConsecutiveEstimate estimate_consecutive_params(const MetricsReport& report) {
  const auto& c = report.error_transitions;
  const auto n = c.rows();
  std::uint64_t s_to_s = c(0, 0);
  std::uint64_t s_total = c.row(0).sum();
  std::uint64_t e_to_s = 0;
  std::uint64_t e_total = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    e_to_s += c(i, 0);
    e_total += c.row(i).sum();
  }
  ConsecutiveEstimate est;
  est.synced_visits = s_total;
  est.error_visits = e_total;
  if (s_total > 0) {
    est.p_0e = 1.0 - static_cast<double>(s_to_s) / static_cast<double>(s_total);
  }
  if (e_total > 0) {
    est.p_ee = 1.0 - static_cast<double>(e_to_s) / static_cast<double>(e_total);
  }
  return est;
}

ConsecutiveEstimate estimate_consecutive_params(const SimulationConfig& config) {
  return estimate_consecutive_params(run(config));
}

}  // namespace remotetrack
