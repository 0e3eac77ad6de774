#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "remotetrack/config.hpp"
#include "remotetrack/csv.hpp"
#include "remotetrack/process_model.hpp"

namespace remotetrack {

inline constexpr const char* kClosedForm = "closed-form";
inline constexpr const char* kSimulated = "simulated";

/// A grid point violating a module precondition; the message names it.
class GridPointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Worker count for sweeps: REMOTE_TRACK_THREADS when set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
int worker_threads();

/// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must
/// write only to their own slot; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task, int threads);

/// Closed-form metrics per grid point. Throws GridPointError on an invalid
/// point.
ResultTable analyze_grid(const ExperimentSpec& spec);
/// spec.replications simulated rows per grid point. Throws GridPointError.
ResultTable simulate_grid(const ExperimentSpec& spec);
/// Like simulate_grid, but invalid points yield flagged rows instead of
/// failing: always K x R rows.
ResultTable sweep_grid(const ExperimentSpec& spec);
/// optimize_rs per (n_states, p, channel, eta). Throws GridPointError.
ResultTable optimize_grid(const ExperimentSpec& spec);

/// Reconstruction error of the four policies for N = 3, p_sample = 0.7,
/// uniform period 5, p in {0.1, 0.3}, p_s in {0.922, 0.445}.
ResultTable reproduce_table1(std::uint64_t horizon, std::uint64_t seed);

/// Constrained optimum for N = 2, p_s = 0.5, eta = 0.5 and
/// p in {0.1, 0.3, 0.5, 0.7, 0.9}, against the other policies.
ResultTable reproduce_table2(std::uint64_t horizon, std::uint64_t seed);

struct Fig3Options {
  std::vector<double> p_values{0.1, 0.3};
  std::vector<double> gamma_db{0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
  double kappa = 2.0;
  int memory_n = 10;
  double p_sample = 0.7;
  int period_d = 5;
  int replications = 3;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  /// Link budget; distance is replaced by calibrated_distance() so that the
  /// decoding probability at 0 dB equals p_s_at_0db.
  PhysicalLink link{1e-3, 1e-13, 30.0, 4.0, 1.0};
  double p_s_at_0db = 0.922;
  int n_states = 3;
};

/// Distance at which a linear threshold `snr_threshold` is met with
/// probability p_s under the other link parameters.
double calibrated_distance(const PhysicalLink& link, double p_s, double snr_threshold = 1.0);

/// Cost of memory error versus SNR threshold for every policy and p value.
ResultTable reproduce_fig3(const Fig3Options& options);

}  // namespace remotetrack
