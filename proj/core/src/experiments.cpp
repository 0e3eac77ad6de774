#include "remotetrack/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "remotetrack/closed_form.hpp"
#include "remotetrack/simulator.hpp"

namespace remotetrack {

namespace {

std::string cell(double v) { return format_double(v); }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string cell(bool v) { return v ? "true" : "false"; }

const std::vector<std::string> kMetricHeader{
    "n_states",       "p",           "q",
    "p_s",            "gamma_db",    "policy",
    "period_d",       "p_sample",    "kappa",
    "memory_n",       "p_error",     "variance",
    "avg_consecutive_error",         "cost_memory_error",
    "cost_actuation_error",          "sampling_rate",
    "success_rate",   "method",      "seed",
    "horizon",        "replication", "feasible",
    "provenance"};

struct PointModels {
  SourceModel source;
  ChannelModel channel;
  CostMatrix costs;
};

PointModels build_models(const ExperimentSpec& spec, const GridPoint& point) {
  try {
    SourceModel source(point.n_states, point.p);
    ChannelModel channel = make_channel(spec, point);
    point.policy.validate();
    CostMatrix costs = spec.cost_matrix ? CostMatrix(point.n_states, *spec.cost_matrix)
                                        : CostMatrix::unit(point.n_states);
    return {source, channel, costs};
  } catch (const std::invalid_argument& e) {
    throw GridPointError("invalid grid point (" + point.describe() + "): " + e.what());
  }
}

// Parameter columns shared by every metric row.
std::vector<std::string> parameter_cells(const ExperimentSpec& spec, const GridPoint& point,
                                         const std::optional<PointModels>& models) {
  const bool uniform = point.policy.kind == PolicyKind::uniform;
  const bool rs = point.policy.kind == PolicyKind::randomized_stationary;
  std::string q;
  std::string p_s = point.p_s ? cell(*point.p_s) : std::string();
  if (models) {
    q = cell(models->source.p_stay());
    p_s = cell(models->channel.success_probability());
  }
  return {std::to_string(point.n_states),
          cell(point.p),
          q,
          p_s,
          point.gamma_db ? cell(*point.gamma_db) : std::string(),
          std::string(to_string(point.policy.kind)),
          uniform ? std::to_string(point.policy.period_d) : std::string(),
          rs ? cell(point.policy.p_sample) : std::string(),
          cell(spec.kappa),
          std::to_string(spec.memory_n)};
}

SimulationConfig make_sim_config(const ExperimentSpec& spec, const GridPoint& point,
                                 const PointModels& models, std::uint64_t seed) {
  SimulationConfig cfg{models.source, models.channel, point.policy};
  cfg.horizon_slots = spec.horizon;
  cfg.seed = seed;
  cfg.memory_kappa = spec.kappa;
  cfg.memory_horizon_n = spec.memory_n;
  cfg.cost_matrix = models.costs;
  return cfg;
}

std::uint64_t replicate_seed(std::uint64_t seed, int r) {
  return seed + static_cast<std::uint64_t>(r);
}

std::vector<std::string> simulated_row(const ExperimentSpec& spec, const GridPoint& point,
                                       const PointModels& models, int replication) {
  const std::uint64_t seed = replicate_seed(spec.seed, replication);
  const MetricsReport r = run(make_sim_config(spec, point, models, seed));
  auto row = parameter_cells(spec, point, models);
  const std::vector<std::string> tail{cell(r.p_error),
                                      cell(r.variance),
                                      cell(r.avg_consecutive_error),
                                      cell(r.cost_memory_error),
                                      cell(r.cost_actuation_error),
                                      cell(r.sampling_rate),
                                      cell(r.success_rate),
                                      kSimulated,
                                      std::to_string(seed),
                                      std::to_string(spec.horizon),
                                      std::to_string(replication),
                                      "true",
                                      "simulator::run(seed=" + std::to_string(seed) +
                                          " T=" + std::to_string(spec.horizon) + ")"};
  row.insert(row.end(), tail.begin(), tail.end());
  return row;
}

}  // namespace

int worker_threads() {
  if (const char* env = std::getenv("REMOTE_TRACK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task, int threads) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::mutex mutex;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto worker = [&]() {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (failure || next >= count) return;
        i = next++;
      }
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ResultTable analyze_grid(const ExperimentSpec& spec) {
  ResultTable table{kMetricHeader, {}};
  for (const GridPoint& point : expand_grid(spec)) {
    const PointModels models = build_models(spec, point);
    analytics::AnalyticMetrics m;
    try {
      m = analytics::evaluate_closed_form(point.policy, models.source, models.channel, spec.kappa,
                                          spec.memory_n, models.costs);
    } catch (const std::exception& e) {
      throw GridPointError("grid point (" + point.describe() + "): " + e.what());
    }

    std::string provenance;
    auto note = [&provenance](const std::optional<double>& v, const char* what) {
      if (!v) return;
      if (!provenance.empty()) provenance += "; ";
      provenance += what;
    };
    const bool rs = point.policy.kind == PolicyKind::randomized_stationary;
    note(m.p_error, rs ? "p_error=p_error_rs" : "p_error=p_error_policy");
    note(m.variance, "variance=variance(p_error)");
    note(m.avg_consecutive_error, "avg_consecutive_error=avg_consecutive_error(consecutive_from_chain)");
    note(m.cost_memory_error, "cost_memory_error=memory_cost(consecutive_from_chain)");
    note(m.cost_actuation_error, "cost_actuation_error=actuation_cost(joint_stationary)");
    note(m.sampling_rate, "sampling_rate=sampling_rate");

    auto row = parameter_cells(spec, point, models);
    const std::vector<std::string> tail{cell(m.p_error),
                                        cell(m.variance),
                                        cell(m.avg_consecutive_error),
                                        cell(m.cost_memory_error),
                                        cell(m.cost_actuation_error),
                                        cell(m.sampling_rate),
                                        cell(models.channel.success_probability()),
                                        kClosedForm,
                                        "",
                                        "",
                                        "",
                                        "true",
                                        provenance};
    row.insert(row.end(), tail.begin(), tail.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable simulate_grid(const ExperimentSpec& spec) {
  const auto points = expand_grid(spec);
  std::vector<PointModels> models;
  models.reserve(points.size());
  for (const auto& point : points) models.push_back(build_models(spec, point));

  const auto reps = static_cast<std::size_t>(spec.replications);
  ResultTable table{kMetricHeader, std::vector<std::vector<std::string>>(points.size() * reps)};
  parallel_for(
      table.rows.size(),
      [&](std::size_t k) {
        const std::size_t i = k / reps;
        table.rows[k] = simulated_row(spec, points[i], models[i], static_cast<int>(k % reps));
      },
      worker_threads());
  return table;
}

ResultTable sweep_grid(const ExperimentSpec& spec) {
  const auto points = expand_grid(spec);
  const auto reps = static_cast<std::size_t>(spec.replications);
  ResultTable table{kMetricHeader, std::vector<std::vector<std::string>>(points.size() * reps)};
  parallel_for(
      table.rows.size(),
      [&](std::size_t k) {
        const std::size_t i = k / reps;
        const int rep = static_cast<int>(k % reps);
        try {
          const PointModels models = build_models(spec, points[i]);
          table.rows[k] = simulated_row(spec, points[i], models, rep);
        } catch (const GridPointError& e) {
          auto row = parameter_cells(spec, points[i], std::nullopt);
          const std::vector<std::string> tail{"", "", "", "", "", "", "", kSimulated,
                                              std::to_string(replicate_seed(spec.seed, rep)),
                                              std::to_string(spec.horizon), std::to_string(rep),
                                              "false", e.what()};
          row.insert(row.end(), tail.begin(), tail.end());
          table.rows[k] = std::move(row);
        }
      },
      worker_threads());
  return table;
}

ResultTable optimize_grid(const ExperimentSpec& spec) {
  ResultTable table{{"n_states", "p", "p_s", "gamma_db", "eta", "period_d", "p_star",
                     "p_error_star", "semantics_aware_feasible", "change_aware_feasible",
                     "uniform_feasible", "method", "provenance"},
                    {}};
  ExperimentSpec one = spec;
  one.policies = {PolicyKind::randomized_stationary};
  one.p_sample = {1.0};
  for (const GridPoint& point : expand_grid(one)) {
    const PointModels models = build_models(spec, point);
    for (int d : spec.period_d) {
      analytics::OptimizationResult r;
      try {
        r = analytics::optimize_rs(models.source, models.channel.success_probability(), point.eta,
                                   d);
      } catch (const std::invalid_argument& e) {
        throw GridPointError("grid point (" + point.describe() + "): " + e.what());
      }
      table.rows.push_back({std::to_string(point.n_states), cell(point.p),
                            cell(models.channel.success_probability()),
                            point.gamma_db ? cell(*point.gamma_db) : std::string(), cell(r.eta),
                            std::to_string(d), cell(r.p_star), cell(r.p_error_star),
                            cell(r.feasibility.semantics_aware), cell(r.feasibility.change_aware),
                            cell(r.feasibility.uniform), kClosedForm,
                            "p_star,p_error_star,feasibility=optimize_rs"});
    }
  }
  return table;
}

ResultTable reproduce_table1(std::uint64_t horizon, std::uint64_t seed) {
  struct Row {
    double p;
    double p_s;
  };
  const std::vector<Row> grid{{0.1, 0.922}, {0.1, 0.445}, {0.3, 0.922}, {0.3, 0.445}};
  constexpr int kStates = 3;
  constexpr double kSample = 0.7;
  constexpr int kPeriod = 5;

  std::vector<double> uniform(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        SimulationConfig cfg{SourceModel(kStates, grid[i].p), ChannelModel::direct(grid[i].p_s),
                             PolicyConfig::uniform(kPeriod)};
        cfg.horizon_slots = horizon;
        cfg.seed = seed;
        uniform[i] = run(cfg).p_error;
      },
      worker_threads());

  ResultTable table{{"p", "q", "p_s", "p_sample", "period_d", "semantics_aware", "change_aware",
                     "uniform", "randomized_stationary", "semantics_aware_method",
                     "change_aware_method", "uniform_method", "randomized_stationary_method",
                     "seed", "horizon", "provenance"},
                    {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SourceModel source(kStates, grid[i].p);
    const double sa = *analytics::p_error_policy(PolicyKind::semantics_aware, source, grid[i].p_s);
    const double ca = *analytics::p_error_policy(PolicyKind::change_aware, source, grid[i].p_s);
    const double rs = analytics::p_error_rs(source, kSample, grid[i].p_s);
    table.rows.push_back({cell(grid[i].p), cell(source.p_stay()), cell(grid[i].p_s),
                          cell(kSample), std::to_string(kPeriod), cell(sa), cell(ca),
                          cell(uniform[i]), cell(rs), kClosedForm, kClosedForm, kSimulated,
                          kClosedForm, std::to_string(seed), std::to_string(horizon),
                          "semantics_aware=p_error_policy; change_aware=p_error_policy; "
                          "uniform=simulator::run(seed=" +
                              std::to_string(seed) + " T=" + std::to_string(horizon) +
                              "); randomized_stationary=p_error_rs"});
  }
  return table;
}

ResultTable reproduce_table2(std::uint64_t horizon, std::uint64_t seed) {
  const std::vector<double> p_values{0.1, 0.3, 0.5, 0.7, 0.9};
  constexpr double kPs = 0.5;
  constexpr double kEta = 0.5;
  constexpr int kPeriod = 5;

  std::vector<double> uniform(p_values.size());
  parallel_for(
      p_values.size(),
      [&](std::size_t i) {
        SimulationConfig cfg{SourceModel(2, p_values[i]), ChannelModel::direct(kPs),
                             PolicyConfig::uniform(kPeriod)};
        cfg.horizon_slots = horizon;
        cfg.seed = seed;
        uniform[i] = run(cfg).p_error;
      },
      worker_threads());

  ResultTable table{{"p", "p_s", "eta", "period_d", "semantics_aware", "change_aware", "uniform",
                     "rsc", "rs", "p_star", "semantics_aware_feasible", "change_aware_feasible",
                     "uniform_feasible", "rsc_feasible", "rs_feasible", "semantics_aware_method",
                     "change_aware_method", "uniform_method", "rsc_method", "rs_method", "seed",
                     "horizon", "provenance"},
                    {}};
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    const SourceModel source(2, p_values[i]);
    const auto opt = analytics::optimize_rs(source, kPs, kEta, kPeriod);
    const double sa = *analytics::p_error_policy(PolicyKind::semantics_aware, source, kPs);
    const double ca = *analytics::p_error_policy(PolicyKind::change_aware, source, kPs);
    // Unconstrained RS optimum: sample every slot.
    const double rs = analytics::p_error_rs(source, 1.0, kPs);
    table.rows.push_back(
        {cell(p_values[i]), cell(kPs), cell(kEta), std::to_string(kPeriod), cell(sa), cell(ca),
         cell(uniform[i]), cell(opt.p_error_star), cell(rs), cell(opt.p_star),
         cell(opt.feasibility.semantics_aware), cell(opt.feasibility.change_aware),
         cell(opt.feasibility.uniform), cell(true), cell(1.0 <= kEta), kClosedForm, kClosedForm,
         kSimulated, kClosedForm, kClosedForm, std::to_string(seed), std::to_string(horizon),
         "semantics_aware=p_error_policy; change_aware=p_error_policy; uniform=simulator::run(seed=" +
             std::to_string(seed) + " T=" + std::to_string(horizon) +
             "); rsc,p_star,feasibility=optimize_rs; rs=p_error_rs(p_sample=1)"});
  }
  return table;
}

double calibrated_distance(const PhysicalLink& link, double p_s, double snr_threshold) {
  if (!(p_s > 0.0 && p_s < 1.0)) throw std::invalid_argument("calibration needs p_s in (0, 1)");
  if (!(snr_threshold > 0.0)) throw std::invalid_argument("calibration needs a positive threshold");
  // p_s = exp(-gamma sigma^2 r^beta / P_tx)
  const double r_beta = -std::log(p_s) * link.tx_power_w / (snr_threshold * link.noise_var_w);
  return std::pow(r_beta, 1.0 / link.pathloss_exp);
}

ResultTable reproduce_fig3(const Fig3Options& o) {
  if (o.replications < 1) throw std::invalid_argument("fig3 needs at least one replication");
  PhysicalLink link = o.link;
  link.distance_m = calibrated_distance(link, o.p_s_at_0db);

  const std::vector<PolicyConfig> policies{
      PolicyConfig::semantics_aware(), PolicyConfig::change_aware(),
      PolicyConfig::uniform(o.period_d), PolicyConfig::randomized_stationary(o.p_sample)};

  struct Task {
    std::size_t p_index, policy_index, gamma_index;
    int replication;
  };
  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < o.p_values.size(); ++pi) {
    for (std::size_t k = 0; k < policies.size(); ++k) {
      for (std::size_t g = 0; g < o.gamma_db.size(); ++g) {
        for (int r = 0; r < o.replications; ++r) tasks.push_back({pi, k, g, r});
      }
    }
  }

  auto channel_at = [&](double gamma_db) {
    PhysicalLink l = link;
    l.snr_threshold = db_to_linear(gamma_db);
    return ChannelModel::physical(l);
  };

  std::vector<double> costs(tasks.size());
  parallel_for(
      tasks.size(),
      [&](std::size_t i) {
        const Task& t = tasks[i];
        // Common random numbers across policies and thresholds.
        SimulationConfig cfg{SourceModel(o.n_states, o.p_values[t.p_index]),
                             channel_at(o.gamma_db[t.gamma_index]), policies[t.policy_index]};
        cfg.horizon_slots = o.horizon;
        cfg.seed = replicate_seed(o.seed, t.replication);
        cfg.memory_kappa = o.kappa;
        cfg.memory_horizon_n = o.memory_n;
        costs[i] = run(cfg).cost_memory_error;
      },
      worker_threads());

  ResultTable table{{"p", "q", "policy", "gamma_db", "p_s", "kappa", "memory_n", "p_sample",
                     "period_d", "cost_memory_error", "replicate_sd", "replications", "method",
                     "seed", "horizon", "provenance"},
                    {}};
  const auto reps = static_cast<std::size_t>(o.replications);
  std::size_t i = 0;
  for (std::size_t pi = 0; pi < o.p_values.size(); ++pi) {
    const SourceModel source(o.n_states, o.p_values[pi]);
    for (std::size_t k = 0; k < policies.size(); ++k) {
      const PolicyConfig& policy = policies[k];
      for (std::size_t g = 0; g < o.gamma_db.size(); ++g, i += reps) {
        double mean = 0.0;
        for (std::size_t r = 0; r < reps; ++r) mean += costs[i + r];
        mean /= static_cast<double>(reps);
        double ss = 0.0;
        for (std::size_t r = 0; r < reps; ++r) ss += (costs[i + r] - mean) * (costs[i + r] - mean);
        const double sd = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1)) : 0.0;
        const double p_s = channel_at(o.gamma_db[g]).success_probability();
        const bool uniform = policy.kind == PolicyKind::uniform;
        const bool rs = policy.kind == PolicyKind::randomized_stationary;
        table.rows.push_back(
            {cell(o.p_values[pi]), cell(source.p_stay()), std::string(to_string(policy.kind)),
             cell(o.gamma_db[g]), cell(p_s), cell(o.kappa), std::to_string(o.memory_n),
             rs ? cell(o.p_sample) : std::string(), uniform ? std::to_string(o.period_d) : "",
             cell(mean), cell(sd), std::to_string(o.replications), kSimulated,
             std::to_string(o.seed), std::to_string(o.horizon),
             "mean of simulator::run over seeds " + std::to_string(o.seed) + ".." +
                 std::to_string(o.seed + reps - 1)});
        if (rs) {
          const auto cc = analytics::consecutive_from_chain(
              analytics::build_error_chain(source, o.p_sample, p_s));
          table.rows.push_back({cell(o.p_values[pi]), cell(source.p_stay()),
                                std::string(to_string(policy.kind)), cell(o.gamma_db[g]),
                                cell(p_s), cell(o.kappa), std::to_string(o.memory_n),
                                cell(o.p_sample), "",
                                cell(analytics::memory_cost(cc, o.kappa, o.memory_n)), "", "",
                                kClosedForm, "", "",
                                "memory_cost(consecutive_from_chain(build_error_chain))"});
        }
      }
    }
  }
  return table;
}

}  // namespace remotetrack
