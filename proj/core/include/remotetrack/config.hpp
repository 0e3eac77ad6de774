#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "remotetrack/policies.hpp"
#include "remotetrack/process_model.hpp"

namespace remotetrack {

enum class ExperimentMode { analyze, simulate, optimize, sweep, reproduce };
enum class ExperimentTarget { table1, table2, fig3, custom };

/// Configuration problem, with the 1-based line it came from (0 when the
/// problem is not tied to a line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// An experiment description. Grid-valued fields are expanded as a cartesian
/// product; p_sample applies to randomized stationary points only and
/// period_d to uniform points only. Physical link quantities are linear.
struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::analyze;
  ExperimentTarget target = ExperimentTarget::custom;

  std::vector<int> n_states{3};
  std::vector<double> p;
  /// Direct-mode decoding probabilities; empty in physical mode.
  std::vector<double> p_s;
  /// Physical-mode SNR thresholds in dB; empty in direct mode.
  std::vector<double> gamma_db;
  std::optional<PhysicalLink> link;  // snr_threshold unused, taken from gamma_db

  std::vector<PolicyKind> policies{PolicyKind::randomized_stationary};
  std::vector<int> period_d{5};
  std::vector<double> p_sample{0.7};
  std::vector<double> eta{0.5};

  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  double kappa = 2.0;
  int memory_n = 10;
  /// Row-major, must be n*n for every n in the grid.
  std::optional<std::vector<double>> cost_matrix;

  int replications = 1;
  std::filesystem::path output;

  /// Throws ConfigError when a field-level constraint is violated.
  void validate() const;

  bool operator==(const ExperimentSpec&) const = default;
};

/// Flat `key = value` text, one per line, `#` starts a comment. Grid keys
/// take comma-separated lists. Throws ConfigError with the line number.
ExperimentSpec parse_config_text(std::string_view text);
/// Throws ConfigError if the file cannot be read.
ExperimentSpec parse_config(const std::filesystem::path& path);

/// Inverse of parse_config_text for the file-backed fields.
std::string to_config_text(const ExperimentSpec& spec);

/// One point of the expanded grid. Values are raw: a point may violate
/// module preconditions, which callers detect when building models.
struct GridPoint {
  int n_states = 3;
  double p = 0.0;
  std::optional<double> p_s;       // direct mode
  std::optional<double> gamma_db;  // physical mode
  PolicyConfig policy;
  double eta = 0.5;

  std::string describe() const;
};

/// Deterministic order: n_states, p, channel, policy, policy parameter, eta.
/// eta only multiplies points in optimize mode.
std::vector<GridPoint> expand_grid(const ExperimentSpec& spec);

/// Builds the channel of a grid point. Throws std::invalid_argument.
ChannelModel make_channel(const ExperimentSpec& spec, const GridPoint& point);

}  // namespace remotetrack
