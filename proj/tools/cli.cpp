#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>

#include "remotetrack/config.hpp"
#include "remotetrack/experiments.hpp"

namespace remotetrack::cli {

namespace {

// Flags that override (or, without --config, define) an ExperimentSpec.
struct GridFlags {
  std::string config;
  std::vector<int> n_states;
  std::vector<double> p;
  std::vector<double> p_s;
  std::vector<double> gamma_db;
  std::optional<double> tx_power_dbm, noise_dbm, distance_m, pathloss_exp;
  std::vector<std::string> policies;
  std::vector<int> period_d;
  std::vector<double> p_sample;
  std::vector<double> eta;
  std::vector<double> cost_matrix;
  std::optional<double> kappa;
  std::optional<int> memory_n;
  std::optional<int> replications;
};

struct CommonFlags {
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> horizon;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("-o,--output", f.output, "CSV output path (default: <subcommand>.csv)");
  app->add_option("--seed", f.seed, "RNG seed");
  app->add_option("--horizon", f.horizon, "Measured slots per simulation")->check(CLI::PositiveNumber);
}

void add_grid(CLI::App* app, GridFlags& f) {
  app->add_option("-c,--config", f.config, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app->add_option("--n-states", f.n_states, "Source states N (list)")->delimiter(',');
  app->add_option("--p", f.p, "Per-target jump probability p (list)")->delimiter(',');
  app->add_option("--p-s", f.p_s, "Direct decoding probability (list)")->delimiter(',');
  app->add_option("--gamma-db", f.gamma_db, "SNR threshold in dB (list, physical mode)")
      ->delimiter(',');
  app->add_option("--tx-power-dbm", f.tx_power_dbm, "Transmit power [dBm]");
  app->add_option("--noise-dbm", f.noise_dbm, "Noise power [dBm]");
  app->add_option("--distance-m", f.distance_m, "Link distance [m]");
  app->add_option("--pathloss-exp", f.pathloss_exp, "Pathloss exponent (> 2)");
  app->add_option("--policy", f.policies,
                  "uniform, change_aware, semantics_aware, randomized_stationary (list)")
      ->delimiter(',');
  app->add_option("--period-d", f.period_d, "Uniform sampling period (list)")->delimiter(',');
  app->add_option("--p-sample", f.p_sample, "RS sampling probability (list)")->delimiter(',');
  app->add_option("--eta", f.eta, "Sampling budget (list)")->delimiter(',');
  app->add_option("--cost-matrix", f.cost_matrix, "Row-major N*N actuation costs")
      ->delimiter(',');
  app->add_option("--kappa", f.kappa, "Memory-error base kappa");
  app->add_option("--n,--memory-n", f.memory_n, "Memory-error horizon n");
  app->add_option("--replications", f.replications, "Simulation replications per grid point");
}

ExperimentSpec build_spec(const GridFlags& f, const CommonFlags& c, ExperimentMode mode) {
  ExperimentSpec spec;
  std::optional<double> tx, noise, dist, beta;
  if (!f.config.empty()) {
    spec = parse_config(f.config);
  } else {
    spec.p.clear();
  }
  spec.mode = mode;
  spec.target = ExperimentTarget::custom;

  if (!f.n_states.empty()) spec.n_states = f.n_states;
  if (!f.p.empty()) spec.p = f.p;
  if (!f.p_s.empty()) {
    spec.p_s = f.p_s;
    spec.gamma_db.clear();
    spec.link.reset();
  }
  if (!f.gamma_db.empty()) {
    if (!f.p_s.empty()) {
      throw ConfigError(0, "ambiguous channel: --p-s cannot be combined with --gamma-db");
    }
    spec.gamma_db = f.gamma_db;
    spec.p_s.clear();
  }
  const bool any_link = f.tx_power_dbm || f.noise_dbm || f.distance_m || f.pathloss_exp;
  if (any_link) {
    if (spec.gamma_db.empty()) throw ConfigError(0, "link parameters given without --gamma-db");
    PhysicalLink link = spec.link.value_or(PhysicalLink{});
    if (f.tx_power_dbm) link.tx_power_w = dbm_to_watts(*f.tx_power_dbm);
    if (f.noise_dbm) link.noise_var_w = dbm_to_watts(*f.noise_dbm);
    if (f.distance_m) link.distance_m = *f.distance_m;
    if (f.pathloss_exp) link.pathloss_exp = *f.pathloss_exp;
    spec.link = link;
  }
  if (!f.policies.empty()) {
    spec.policies.clear();
    for (const auto& name : f.policies) {
      const auto kind = parse_policy_kind(name);
      if (!kind) throw ConfigError(0, "unknown policy '" + name + "'");
      spec.policies.push_back(*kind);
    }
  }
  if (!f.period_d.empty()) spec.period_d = f.period_d;
  if (!f.p_sample.empty()) spec.p_sample = f.p_sample;
  if (!f.eta.empty()) spec.eta = f.eta;
  if (!f.cost_matrix.empty()) {
    spec.cost_matrix = f.cost_matrix;
  }
  if (f.kappa) spec.kappa = *f.kappa;
  if (f.memory_n) spec.memory_n = *f.memory_n;
  if (f.replications) spec.replications = *f.replications;
  if (c.seed) spec.seed = *c.seed;
  if (c.horizon) spec.horizon = *c.horizon;
  spec.validate();
  return spec;
}

void write_table(const ResultTable& table, const std::string& path, std::ostream& out) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  table.write_csv(file);
  file.close();
  if (!file) throw std::runtime_error("failed writing output file '" + path + "'");
  table.write_pretty(out, {"provenance"});
  out << "wrote " << table.rows.size() << " rows to " << path << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Remote reconstruction of a Markov source over an erasure channel"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "remote_track 0.1.0");

  struct Command {
    CLI::App* app;
    CommonFlags common;
    GridFlags grid;
  };
  Command analyze{app.add_subcommand("analyze", "Closed-form metrics per grid point"), {}, {}};
  Command simulate{app.add_subcommand("simulate", "Simulated metrics per grid point"), {}, {}};
  Command optimize{app.add_subcommand("optimize", "Sampling-budget optimisation (N = 2)"), {}, {}};
  Command sweep{app.add_subcommand("sweep", "Replicated simulation over a grid, non-fatal per point"),
                {},
                {}};
  for (Command* c : {&analyze, &simulate, &optimize, &sweep}) {
    add_common(c->app, c->common);
    add_grid(c->app, c->grid);
  }

  CommonFlags t1, t2, f3;
  auto* table1 = app.add_subcommand("reproduce-table1", "Reconstruction error of the four policies");
  auto* table2 = app.add_subcommand("reproduce-table2", "Constrained optimum versus the policies");
  auto* fig3 = app.add_subcommand("reproduce-fig3", "Cost of memory error versus SNR threshold");
  add_common(table1, t1);
  add_common(table2, t2);
  add_common(fig3, f3);

  Fig3Options fig;
  std::vector<double> fig_p, fig_gamma;
  fig3->add_option("--kappa", fig.kappa, "Memory-error base kappa");
  fig3->add_option("--n,--memory-n", fig.memory_n, "Memory-error horizon n");
  fig3->add_option("--p-sample", fig.p_sample, "RS sampling probability");
  fig3->add_option("--p", fig_p, "Jump probabilities p (list)")->delimiter(',');
  fig3->add_option("--gamma-db", fig_gamma, "SNR thresholds in dB (list)")->delimiter(',');
  fig3->add_option("--period-d", fig.period_d, "Uniform sampling period");
  fig3->add_option("--replications", fig.replications, "Replications per curve point");
  fig3->add_option("--p-s-at-0db", fig.p_s_at_0db, "Decoding probability the link is calibrated to at 0 dB");

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    auto output_for = [](const CommonFlags& c, const char* name) {
      return c.output.empty() ? std::string(name) + ".csv" : c.output;
    };
    if (*table1) {
      const ResultTable t = reproduce_table1(t1.horizon.value_or(1'000'000), t1.seed.value_or(1));
      write_table(t, output_for(t1, "reproduce-table1"), out);
    } else if (*table2) {
      const ResultTable t = reproduce_table2(t2.horizon.value_or(1'000'000), t2.seed.value_or(1));
      write_table(t, output_for(t2, "reproduce-table2"), out);
    } else if (*fig3) {
      if (!fig_p.empty()) fig.p_values = fig_p;
      if (!fig_gamma.empty()) fig.gamma_db = fig_gamma;
      if (f3.horizon) fig.horizon = *f3.horizon;
      if (f3.seed) fig.seed = *f3.seed;
      write_table(reproduce_fig3(fig), output_for(f3, "reproduce-fig3"), out);
    } else if (*analyze.app) {
      const auto spec = build_spec(analyze.grid, analyze.common, ExperimentMode::analyze);
      write_table(analyze_grid(spec), output_for(analyze.common, "analyze"), out);
    } else if (*simulate.app) {
      const auto spec = build_spec(simulate.grid, simulate.common, ExperimentMode::simulate);
      write_table(simulate_grid(spec), output_for(simulate.common, "simulate"), out);
    } else if (*optimize.app) {
      const auto spec = build_spec(optimize.grid, optimize.common, ExperimentMode::optimize);
      write_table(optimize_grid(spec), output_for(optimize.common, "optimize"), out);
    } else if (*sweep.app) {
      const auto spec = build_spec(sweep.grid, sweep.common, ExperimentMode::sweep);
      write_table(sweep_grid(spec), output_for(sweep.common, "sweep"), out);
    }
  } catch (const std::exception& e) {
    err << "remote_track: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace remotetrack::cli
