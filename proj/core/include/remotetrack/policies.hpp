#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "remotetrack/process_model.hpp"

namespace remotetrack {

enum class PolicyKind { uniform, change_aware, semantics_aware, randomized_stationary };

std::string_view to_string(PolicyKind kind);
/// Accepts the canonical names plus the short forms uniform/ca/sa/rs.
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

/// Only semantics-aware sampling needs the ACK/NACK feedback path.
constexpr bool needs_feedback(PolicyKind kind) { return kind == PolicyKind::semantics_aware; }

struct PolicyConfig {
  PolicyKind kind = PolicyKind::randomized_stationary;
  int period_d = 1;        // uniform only
  double p_sample = 1.0;   // randomized stationary only

  static PolicyConfig uniform(int period_d);
  static PolicyConfig change_aware();
  static PolicyConfig semantics_aware();
  static PolicyConfig randomized_stationary(double p_sample);

  /// Throws std::invalid_argument on a bad period or sampling probability.
  void validate() const;

  bool operator==(const PolicyConfig&) const = default;
};

/// Everything a policy may look at when deciding whether to sample X_{t+1}.
struct PolicyContext {
  int prev_x = 0;
  int next_x = 0;
  int x_hat = 0;
  std::uint64_t slot = 0;  // index of the slot being entered, t + 1
  bool feedback_available = true;
};

enum class SamplingDecision { idle, sample };

/// A sample is transmitted in the slot it is taken. Throws std::logic_error
/// for semantics-aware sampling without feedback.
SamplingDecision decide_sample(const PolicyConfig& config, const PolicyContext& ctx,
                               double random_draw);

/// Long-run fraction of slots in which the policy samples. Empty when no
/// closed form is known for the (policy, N) pair; simulate instead.
std::optional<double> sampling_rate(const PolicyConfig& config, const SourceModel& source,
                                    const ChannelModel& channel);

}  // namespace remotetrack
