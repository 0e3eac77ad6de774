#include "remotetrack/process_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace remotetrack {

namespace {

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

SourceModel::SourceModel(int n_states, double p_change) : n_states_(n_states), p_change_(p_change) {
  if (n_states < 2) {
    throw std::invalid_argument("source needs at least 2 states, got " + std::to_string(n_states));
  }
  const double others = static_cast<double>(n_states - 1);
  // Allow a few ulps of slack so that p = 1/(N-1) written as a decimal is accepted.
  if (!std::isfinite(p_change) || p_change < 0.0 || p_change * others > 1.0 + 1e-12) {
    throw std::invalid_argument("p_change must lie in [0, 1/(N-1)], got " + std::to_string(p_change));
  }
  p_stay_ = 1.0 - others * p_change;
  if (p_stay_ < 0.0) p_stay_ = 0.0;
}

ChannelModel ChannelModel::direct(double p_s) {
  if (!is_probability(p_s)) {
    throw std::invalid_argument("p_s must lie in [0, 1], got " + std::to_string(p_s));
  }
  return ChannelModel(ChannelMode::direct, p_s, PhysicalLink{});
}

ChannelModel ChannelModel::physical(const PhysicalLink& link) {
  if (!(link.tx_power_w > 0.0) || !std::isfinite(link.tx_power_w)) {
    throw std::invalid_argument("transmit power must be positive");
  }
  if (!(link.noise_var_w > 0.0) || !std::isfinite(link.noise_var_w)) {
    throw std::invalid_argument("noise variance must be positive");
  }
  if (!(link.distance_m > 0.0) || !std::isfinite(link.distance_m)) {
    throw std::invalid_argument("distance must be positive");
  }
  if (!(link.pathloss_exp > 2.0) || !std::isfinite(link.pathloss_exp)) {
    throw std::invalid_argument("pathloss exponent must exceed 2");
  }
  if (!(link.snr_threshold >= 0.0) || !std::isfinite(link.snr_threshold)) {
    throw std::invalid_argument("SNR threshold must be nonnegative");
  }
  const double mean_rx = link.tx_power_w * std::pow(link.distance_m, -link.pathloss_exp);
  const double p_s = std::exp(-link.snr_threshold * link.noise_var_w / mean_rx);
  return ChannelModel(ChannelMode::physical, p_s, link);
}

CostMatrix::CostMatrix(int n_states)
    : n_states_(n_states),
      costs_(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_states), 0.0) {
  if (n_states < 1) throw std::invalid_argument("cost matrix needs at least one state");
}

CostMatrix::CostMatrix(int n_states, std::vector<double> row_major)
    : n_states_(n_states), costs_(std::move(row_major)) {
  if (n_states < 1) throw std::invalid_argument("cost matrix needs at least one state");
  const auto n = static_cast<std::size_t>(n_states);
  if (costs_.size() != n * n) {
    throw std::invalid_argument("cost matrix needs " + std::to_string(n * n) + " entries, got " +
                                std::to_string(costs_.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = costs_[i * n + j];
      if (!std::isfinite(c) || c < 0.0) {
        throw std::invalid_argument("cost matrix entries must be finite and nonnegative");
      }
      if (i == j && c != 0.0) {
        throw std::invalid_argument("cost matrix diagonal must be zero (entry " + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      }
    }
  }
}

CostMatrix CostMatrix::unit(int n_states) {
  const auto n = static_cast<std::size_t>(n_states);
  std::vector<double> costs(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) costs[i * n + i] = 0.0;
  return CostMatrix(n_states, std::move(costs));
}

double success_probability(const ChannelModel& channel) { return channel.success_probability(); }

int source_step(const SourceModel& model, int current, double random_draw) {
  const double q = model.p_stay();
  if (random_draw < q) return current;
  const double p = model.p_change();
  const int others = model.n_states() - 1;
  if (p <= 0.0) return current;
  auto bin = static_cast<int>((random_draw - q) / p);
  // Rounding at the right edge of [q, 1) can land one past the last bin.
  if (bin >= others) bin = others - 1;
  if (bin < 0) bin = 0;
  return bin < current ? bin : bin + 1;
}

ChannelOutcome channel_outcome(const ChannelModel& channel, double random_draw) {
  return random_draw < channel.success_probability() ? ChannelOutcome::success
                                                     : ChannelOutcome::failure;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }

}  // namespace remotetrack
