#include "remotetrack/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "remotetrack/csv.hpp"

namespace remotetrack {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, int line, std::string_view key) {
  T value{};
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError(line, "type mismatch for '" + std::string(key) + "': cannot read '" +
                                std::string(text) + "' as " +
                                (std::is_floating_point_v<T> ? "a real number" : "an integer"));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ConfigError(line, "'" + std::string(key) + "' must be finite");
    }
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, int line, std::string_view key) {
  std::vector<T> out;
  for (auto item : split_list(text)) out.push_back(parse_number<T>(item, line, key));
  return out;
}

void require(bool ok, int line, const std::string& message) {
  if (!ok) throw ConfigError(line, message);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

double watts_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

}  // namespace

void ExperimentSpec::validate() const {
  require(!n_states.empty(), 0, "n_states grid is empty");
  for (int n : n_states) require(n >= 2, 0, "n_states must be >= 2");
  require(!p.empty(), 0, "p grid is empty");
  for (double v : p) require(in_unit(v), 0, "p must lie in [0, 1]");
  require(p_s.empty() != gamma_db.empty(), 0,
          "exactly one of p_s (direct mode) or gamma_db (physical mode) must be given");
  for (double v : p_s) require(in_unit(v), 0, "p_s must lie in [0, 1]");
  require(gamma_db.empty() || link.has_value(), 0, "gamma_db needs the physical link parameters");
  require(!policies.empty(), 0, "policy list is empty");
  for (int d : period_d) require(d >= 1, 0, "period_d must be >= 1");
  for (double v : p_sample) require(in_unit(v), 0, "p_sample must lie in [0, 1]");
  for (double v : eta) require(v > 0.0, 0, "eta must be > 0");
  require(horizon >= 1, 0, "horizon must be >= 1");
  require(kappa > 0.0, 0, "kappa must be > 0");
  require(memory_n >= 1, 0, "memory_n must be >= 1");
  require(replications >= 1, 0, "replications must be >= 1");
  if (cost_matrix) {
    for (int n : n_states) {
      require(cost_matrix->size() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0,
              "cost_matrix has " + std::to_string(cost_matrix->size()) + " entries but n_states = " +
                  std::to_string(n));
    }
  }
}

ExperimentSpec parse_config_text(std::string_view text) {
  ExperimentSpec spec;
  std::map<std::string, int, std::less<>> seen;
  std::optional<double> tx_dbm, noise_dbm, distance, pathloss;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    require(eq != std::string_view::npos, line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    require(!key.empty(), line_no, "missing key before '='");
    require(!value.empty(), line_no, "missing value for '" + key + "'");
    require(seen.find(key) == seen.end(), line_no, "duplicate key '" + key + "'");
    seen.emplace(key, line_no);

    if (key == "n_states") {
      spec.n_states = parse_list<int>(value, line_no, key);
      for (int n : spec.n_states) require(n >= 2, line_no, "n_states must be >= 2");
    } else if (key == "p") {
      spec.p = parse_list<double>(value, line_no, key);
      for (double v : spec.p) require(in_unit(v), line_no, "p must lie in [0, 1]");
    } else if (key == "p_s") {
      spec.p_s = parse_list<double>(value, line_no, key);
      for (double v : spec.p_s) require(in_unit(v), line_no, "p_s must lie in [0, 1]");
    } else if (key == "gamma_db") {
      spec.gamma_db = parse_list<double>(value, line_no, key);
    } else if (key == "tx_power_dbm") {
      tx_dbm = parse_number<double>(value, line_no, key);
    } else if (key == "noise_dbm") {
      noise_dbm = parse_number<double>(value, line_no, key);
    } else if (key == "distance_m") {
      distance = parse_number<double>(value, line_no, key);
      require(*distance > 0.0, line_no, "distance_m must be > 0");
    } else if (key == "pathloss_exp") {
      pathloss = parse_number<double>(value, line_no, key);
      require(*pathloss > 2.0, line_no, "pathloss_exp must be > 2");
    } else if (key == "policy") {
      spec.policies.clear();
      for (auto name : split_list(value)) {
        const auto kind = parse_policy_kind(name);
        require(kind.has_value(), line_no, "unknown policy '" + std::string(name) + "'");
        spec.policies.push_back(*kind);
      }
    } else if (key == "period_d") {
      spec.period_d = parse_list<int>(value, line_no, key);
      for (int d : spec.period_d) require(d >= 1, line_no, "period_d must be >= 1");
    } else if (key == "p_sample") {
      spec.p_sample = parse_list<double>(value, line_no, key);
      for (double v : spec.p_sample) require(in_unit(v), line_no, "p_sample must lie in [0, 1]");
    } else if (key == "horizon") {
      spec.horizon = parse_number<std::uint64_t>(value, line_no, key);
      require(spec.horizon >= 1, line_no, "horizon must be >= 1");
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(value, line_no, key);
    } else if (key == "kappa") {
      spec.kappa = parse_number<double>(value, line_no, key);
      require(spec.kappa > 0.0, line_no, "kappa must be > 0");
    } else if (key == "memory_n") {
      spec.memory_n = parse_number<int>(value, line_no, key);
      require(spec.memory_n >= 1, line_no, "memory_n must be >= 1");
    } else if (key == "eta") {
      spec.eta = parse_list<double>(value, line_no, key);
      for (double v : spec.eta) require(v > 0.0, line_no, "eta must be > 0");
    } else if (key == "cost_matrix") {
      auto costs = parse_list<double>(value, line_no, key);
      const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(costs.size()))));
      require(n * n == costs.size(), line_no, "cost_matrix must have N*N entries");
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double c = costs[i * n + j];
          require(c >= 0.0, line_no, "cost_matrix entries must be nonnegative");
          require(i != j || c == 0.0, line_no,
                  "cost_matrix diagonal entry (" + std::to_string(i) + "," + std::to_string(j) +
                      ") must be 0");
        }
      }
      spec.cost_matrix = std::move(costs);
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  auto line_of = [&seen](std::string_view key) {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  const bool any_link = tx_dbm || noise_dbm || distance || pathloss;
  if (!spec.p_s.empty() && (!spec.gamma_db.empty() || any_link)) {
    const int l = std::max({line_of("p_s"), line_of("gamma_db"), line_of("tx_power_dbm"),
                            line_of("noise_dbm"), line_of("distance_m"), line_of("pathloss_exp")});
    throw ConfigError(l, "ambiguous channel: p_s (direct mode) cannot be combined with "
                         "gamma_db or link parameters (physical mode)");
  }
  if (!spec.gamma_db.empty()) {
    std::string missing;
    if (!tx_dbm) missing += " tx_power_dbm";
    if (!noise_dbm) missing += " noise_dbm";
    if (!distance) missing += " distance_m";
    if (!pathloss) missing += " pathloss_exp";
    require(missing.empty(), line_of("gamma_db"), "physical mode is missing:" + missing);
    spec.link = PhysicalLink{dbm_to_watts(*tx_dbm), dbm_to_watts(*noise_dbm), *distance,
                             *pathloss, 1.0};
  } else if (any_link) {
    throw ConfigError(std::max({line_of("tx_power_dbm"), line_of("noise_dbm"),
                                line_of("distance_m"), line_of("pathloss_exp")}),
                      "link parameters given without gamma_db");
  }
  require(line_of("p") > 0, 0, "missing required key 'p'");
  require(!spec.p_s.empty() || !spec.gamma_db.empty(), 0,
          "missing channel: give p_s (direct mode) or gamma_db with link parameters");
  spec.validate();
  return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string to_config_text(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "n_states = " << join(spec.n_states) << '\n';
  out << "p = " << join(spec.p) << '\n';
  if (!spec.p_s.empty()) out << "p_s = " << join(spec.p_s) << '\n';
  if (!spec.gamma_db.empty()) {
    out << "gamma_db = " << join(spec.gamma_db) << '\n';
    if (spec.link) {
      out << "tx_power_dbm = " << format_double(watts_to_dbm(spec.link->tx_power_w)) << '\n';
      out << "noise_dbm = " << format_double(watts_to_dbm(spec.link->noise_var_w)) << '\n';
      out << "distance_m = " << format_double(spec.link->distance_m) << '\n';
      out << "pathloss_exp = " << format_double(spec.link->pathloss_exp) << '\n';
    }
  }
  out << "policy = ";
  for (std::size_t i = 0; i < spec.policies.size(); ++i) {
    out << (i ? ", " : "") << to_string(spec.policies[i]);
  }
  out << '\n';
  out << "period_d = " << join(spec.period_d) << '\n';
  out << "p_sample = " << join(spec.p_sample) << '\n';
  out << "horizon = " << spec.horizon << '\n';
  out << "seed = " << spec.seed << '\n';
  out << "kappa = " << format_double(spec.kappa) << '\n';
  out << "memory_n = " << spec.memory_n << '\n';
  out << "eta = " << join(spec.eta) << '\n';
  if (spec.cost_matrix) out << "cost_matrix = " << join(*spec.cost_matrix) << '\n';
  return out.str();
}

std::string GridPoint::describe() const {
  std::ostringstream out;
  out << "N=" << n_states << " p=" << format_double(p);
  if (p_s) out << " p_s=" << format_double(*p_s);
  if (gamma_db) out << " gamma_db=" << format_double(*gamma_db);
  out << " policy=" << to_string(policy.kind);
  if (policy.kind == PolicyKind::uniform) out << " d=" << policy.period_d;
  if (policy.kind == PolicyKind::randomized_stationary) {
    out << " p_sample=" << format_double(policy.p_sample);
  }
  return out.str();
}

std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  std::vector<GridPoint> points;
  const bool physical = !spec.gamma_db.empty();
  const auto& channel_axis = physical ? spec.gamma_db : spec.p_s;
  const std::vector<double> eta_axis =
      spec.mode == ExperimentMode::optimize ? spec.eta : std::vector<double>{spec.eta.front()};

  for (int n : spec.n_states) {
    for (double p : spec.p) {
      for (double c : channel_axis) {
        for (PolicyKind kind : spec.policies) {
          std::vector<PolicyConfig> configs;
          if (kind == PolicyKind::uniform) {
            for (int d : spec.period_d) configs.push_back({kind, d, 1.0});
          } else if (kind == PolicyKind::randomized_stationary) {
            for (double ps : spec.p_sample) configs.push_back({kind, 1, ps});
          } else {
            configs.push_back({kind, 1, 1.0});
          }
          for (const auto& policy : configs) {
            for (double eta : eta_axis) {
              GridPoint g;
              g.n_states = n;
              g.p = p;
              if (physical) {
                g.gamma_db = c;
              } else {
                g.p_s = c;
              }
              g.policy = policy;
              g.eta = eta;
              points.push_back(g);
            }
          }
        }
      }
    }
  }
  return points;
}

ChannelModel make_channel(const ExperimentSpec& spec, const GridPoint& point) {
  if (point.p_s) return ChannelModel::direct(*point.p_s);
  if (!point.gamma_db || !spec.link) {
    throw std::invalid_argument("grid point has no channel description");
  }
  PhysicalLink link = *spec.link;
  link.snr_threshold = db_to_linear(*point.gamma_db);
  return ChannelModel::physical(link);
}

}  // namespace remotetrack
