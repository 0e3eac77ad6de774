#include "remotetrack/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace remotetrack {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::uniform:
      return "uniform";
    case PolicyKind::change_aware:
      return "change_aware";
    case PolicyKind::semantics_aware:
      return "semantics_aware";
    case PolicyKind::randomized_stationary:
      return "randomized_stationary";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  if (name == "uniform") return PolicyKind::uniform;
  if (name == "change_aware" || name == "ca") return PolicyKind::change_aware;
  if (name == "semantics_aware" || name == "sa") return PolicyKind::semantics_aware;
  if (name == "randomized_stationary" || name == "rs") return PolicyKind::randomized_stationary;
  return std::nullopt;
}

PolicyConfig PolicyConfig::uniform(int period_d) {
  PolicyConfig c{PolicyKind::uniform, period_d, 1.0};
  c.validate();
  return c;
}

PolicyConfig PolicyConfig::change_aware() { return {PolicyKind::change_aware, 1, 1.0}; }

PolicyConfig PolicyConfig::semantics_aware() { return {PolicyKind::semantics_aware, 1, 1.0}; }

PolicyConfig PolicyConfig::randomized_stationary(double p_sample) {
  PolicyConfig c{PolicyKind::randomized_stationary, 1, p_sample};
  c.validate();
  return c;
}

void PolicyConfig::validate() const {
  if (kind == PolicyKind::uniform && period_d < 1) {
    throw std::invalid_argument("uniform policy needs period_d >= 1");
  }
  if (kind == PolicyKind::randomized_stationary &&
      !(std::isfinite(p_sample) && p_sample >= 0.0 && p_sample <= 1.0)) {
    throw std::invalid_argument("p_sample must lie in [0, 1]");
  }
}

SamplingDecision decide_sample(const PolicyConfig& config, const PolicyContext& ctx,
                               double random_draw) {
  bool sample = false;
  switch (config.kind) {
    case PolicyKind::uniform:
      // Sampling instants t_k = k*d, k >= 1.
      sample = ctx.slot > 0 && ctx.slot % static_cast<std::uint64_t>(config.period_d) == 0;
      break;
    case PolicyKind::change_aware:
      sample = ctx.next_x != ctx.prev_x;
      break;
    case PolicyKind::semantics_aware:
      if (!ctx.feedback_available) {
        throw std::logic_error("semantics-aware sampling requires ACK/NACK feedback");
      }
      // Synced: x_hat == prev_x, so both branches reduce to next_x != x_hat.
      sample = ctx.prev_x == ctx.x_hat ? ctx.next_x != ctx.prev_x : ctx.next_x != ctx.x_hat;
      break;
    case PolicyKind::randomized_stationary:
      sample = random_draw < config.p_sample;
      break;
  }
  return sample ? SamplingDecision::sample : SamplingDecision::idle;
}

std::optional<double> sampling_rate(const PolicyConfig& config, const SourceModel& source,
                                    const ChannelModel& channel) {
  const double p = source.p_change();
  switch (config.kind) {
    case PolicyKind::randomized_stationary:
      return config.p_sample;
    case PolicyKind::uniform:
      return 1.0 / static_cast<double>(config.period_d);
    case PolicyKind::change_aware:
      return static_cast<double>(source.n_states() - 1) * p;
    case PolicyKind::semantics_aware: {
      if (source.n_states() != 2) return std::nullopt;
      const double p_s = channel.success_probability();
      const double denom = 2.0 * p + p_s - 2.0 * p * p_s;
      if (denom <= 0.0) return 0.0;  // p = 0: never leaves sync, never samples
      return p / denom;
    }
  }
  return std::nullopt;
}

}  // namespace remotetrack
