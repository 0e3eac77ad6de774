#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace remotetrack {

/// N-state symmetric Markov source: stay with probability q, jump to each
/// other state with probability p, q + (N-1)p = 1.
class SourceModel {
 public:
  /// Builds the source from the per-target jump probability; q is derived.
  /// Throws std::invalid_argument unless N >= 2 and 0 <= p <= 1/(N-1).
  SourceModel(int n_states, double p_change);

  int n_states() const { return n_states_; }
  double p_change() const { return p_change_; }
  double p_stay() const { return p_stay_; }

  bool operator==(const SourceModel&) const = default;

 private:
  int n_states_;
  double p_change_;
  double p_stay_;
};

/// Link budget for the Rayleigh-fading, pathloss-attenuated channel. All
/// quantities linear (watts, metres, linear SNR).
struct PhysicalLink {
  double tx_power_w = 1e-3;
  double noise_var_w = 1e-13;
  double distance_m = 30.0;
  double pathloss_exp = 4.0;
  double snr_threshold = 1.0;

  bool operator==(const PhysicalLink&) const = default;
};

enum class ChannelMode { direct, physical };

/// Per-slot erasure channel. In physical mode the decoding probability is
/// exp(-gamma * sigma^2 / (P_tx * r^-beta)), computed once on construction.
class ChannelModel {
 public:
  static ChannelModel direct(double p_s);
  static ChannelModel physical(const PhysicalLink& link);

  ChannelMode mode() const { return mode_; }
  double success_probability() const { return p_s_; }
  /// Only meaningful in physical mode.
  const PhysicalLink& link() const { return link_; }

  bool operator==(const ChannelModel&) const = default;

 private:
  ChannelModel(ChannelMode mode, double p_s, PhysicalLink link)
      : mode_(mode), p_s_(p_s), link_(link) {}

  ChannelMode mode_;
  double p_s_;
  PhysicalLink link_;
};

struct SystemState {
  int x = 0;
  int x_hat = 0;
  std::uint64_t slot = 0;

  int error() const { return std::abs(x - x_hat); }
  bool synced() const { return x == x_hat; }
};

/// Cost C(i, j) of actuating on reconstruction j while the source is in i.
/// Diagonal is identically zero.
class CostMatrix {
 public:
  /// All-zero costs.
  explicit CostMatrix(int n_states);
  /// Row-major N*N entries. Throws if the diagonal is nonzero or any entry
  /// is negative.
  CostMatrix(int n_states, std::vector<double> row_major);

  /// C(i, j) = 1 for i != j, which makes the actuation cost equal P_E.
  static CostMatrix unit(int n_states);

  int n_states() const { return n_states_; }
  double operator()(int i, int j) const { return costs_[index(i, j)]; }
  const std::vector<double>& row_major() const { return costs_; }

  bool operator==(const CostMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_states_) +
           static_cast<std::size_t>(j);
  }

  int n_states_;
  std::vector<double> costs_;
};

enum class ChannelOutcome { success, failure };

double success_probability(const ChannelModel& channel);

/// Advances the source one slot. The unit interval is partitioned as
/// [0, q) -> stay, then consecutive width-p bins for the other states in
/// ascending index order.
int source_step(const SourceModel& model, int current, double random_draw);

/// Success iff random_draw < p_s. A failed sample is discarded.
ChannelOutcome channel_outcome(const ChannelModel& channel, double random_draw);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

}  // namespace remotetrack
