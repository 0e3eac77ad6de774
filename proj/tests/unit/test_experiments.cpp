#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "remotetrack/closed_form.hpp"
#include "remotetrack/experiments.hpp"

namespace rt = remotetrack;
namespace an = remotetrack::analytics;

namespace {

double num(const rt::ResultTable& t, std::size_t row, std::string_view col) {
  return std::stod(t.rows.at(row).at(t.column(col)));
}

const std::string& str(const rt::ResultTable& t, std::size_t row, std::string_view col) {
  return t.rows.at(row).at(t.column(col));
}

rt::ExperimentSpec small_spec() {
  rt::ExperimentSpec spec;
  spec.n_states = {3};
  spec.p = {0.1, 0.3};
  spec.p_s = {0.922};
  spec.policies = {rt::PolicyKind::semantics_aware, rt::PolicyKind::randomized_stationary};
  spec.p_sample = {0.7};
  spec.horizon = 20'000;
  spec.seed = 5;
  return spec;
}

}  // namespace

TEST(Csv, ShortestRoundTripDoubles) {
  EXPECT_EQ(rt::format_double(0.1), "0.1");
  EXPECT_EQ(rt::format_double(1.0), "1");
  EXPECT_EQ(rt::format_double(std::nan("")), "nan");
  EXPECT_EQ(rt::format_double(-INFINITY), "-inf");
  const double x = 0.094336108968049;
  EXPECT_EQ(std::stod(rt::format_double(x)), x);
  EXPECT_EQ(std::stod(rt::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, EscapingAndLayout) {
  EXPECT_EQ(rt::csv_escape("plain"), "plain");
  EXPECT_EQ(rt::csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(rt::csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  rt::ResultTable t{{"a", "b"}, {{"1", "x,y"}, {"2", ""}}};
  EXPECT_EQ(t.to_csv(), "a,b\n1,\"x,y\"\n2,\n");
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_THROW(t.column("c"), std::out_of_range);
  std::ostringstream pretty;
  t.write_pretty(pretty, {"b"});
  EXPECT_EQ(pretty.str().find("x,y"), std::string::npos);
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  rt::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(rt::parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }, 3),
               std::runtime_error);
}

TEST(Parallel, ThreadCountFromEnvironment) {
  ::setenv("REMOTE_TRACK_THREADS", "3", 1);
  EXPECT_EQ(rt::worker_threads(), 3);
  ::setenv("REMOTE_TRACK_THREADS", "junk", 1);
  EXPECT_GE(rt::worker_threads(), 1);
  ::unsetenv("REMOTE_TRACK_THREADS");
  EXPECT_GE(rt::worker_threads(), 1);
}

TEST(AnalyzeGrid, ClosedFormRows) {
  const auto t = rt::analyze_grid(small_spec());
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(str(t, 0, "policy"), "semantics_aware");
  EXPECT_EQ(str(t, 0, "method"), rt::kClosedForm);
  EXPECT_DOUBLE_EQ(num(t, 1, "p_error"), an::p_error_rs(rt::SourceModel(3, 0.1), 0.7, 0.922));
  EXPECT_FALSE(str(t, 1, "provenance").empty());
  EXPECT_EQ(rt::analyze_grid(small_spec()).to_csv(), t.to_csv());
}

TEST(AnalyzeGrid, InvalidPointNamesItself) {
  auto spec = small_spec();
  spec.p = {0.6};
  try {
    rt::analyze_grid(spec);
    FAIL() << "expected GridPointError";
  } catch (const rt::GridPointError& e) {
    EXPECT_NE(std::string(e.what()).find("p=0.6"), std::string::npos);
  }
}

TEST(SimulateGrid, ReplicationsAndDeterminism) {
  auto spec = small_spec();
  spec.replications = 2;
  const auto t = rt::simulate_grid(spec);
  ASSERT_EQ(t.rows.size(), 8u);
  EXPECT_EQ(str(t, 0, "method"), rt::kSimulated);
  EXPECT_EQ(str(t, 0, "seed"), "5");
  EXPECT_EQ(str(t, 1, "seed"), "6");
  EXPECT_NE(str(t, 0, "p_error"), str(t, 1, "p_error"));
  EXPECT_EQ(rt::simulate_grid(spec).to_csv(), t.to_csv());
  spec.seed = 6;
  EXPECT_NE(rt::simulate_grid(spec).to_csv(), t.to_csv());
}

TEST(SweepGrid, FlagsInvalidPointsAndKeepsShape) {
  auto spec = small_spec();
  spec.p = {0.1, 0.6};
  spec.replications = 3;
  const auto t = rt::sweep_grid(spec);
  ASSERT_EQ(t.rows.size(), rt::expand_grid(spec).size() * 3);
  std::size_t flagged = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) flagged += str(t, r, "feasible") == "false";
  EXPECT_EQ(flagged, 6u);
}

TEST(SweepGrid, DeterministicUnderThreading) {
  auto spec = small_spec();
  spec.replications = 2;
  ::setenv("REMOTE_TRACK_THREADS", "1", 1);
  const auto serial = rt::sweep_grid(spec).to_csv();
  ::setenv("REMOTE_TRACK_THREADS", "4", 1);
  const auto threaded = rt::sweep_grid(spec).to_csv();
  ::unsetenv("REMOTE_TRACK_THREADS");
  EXPECT_EQ(serial, threaded);
}

TEST(OptimizeGrid, TableTwoPoints) {
  rt::ExperimentSpec spec;
  spec.mode = rt::ExperimentMode::optimize;
  spec.n_states = {2};
  spec.p = {0.1, 0.5};
  spec.p_s = {0.5};
  spec.eta = {0.5};
  const auto t = rt::optimize_grid(spec);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NEAR(num(t, 0, "p_error_star"), 0.1875, 1e-12);
  EXPECT_NEAR(num(t, 1, "p_error_star"), 0.375, 1e-12);
  spec.n_states = {3};
  EXPECT_THROW(rt::optimize_grid(spec), rt::GridPointError);
}

TEST(Reproduce, TableOneShape) {
  const auto t = rt::reproduce_table1(20'000, 1);
  ASSERT_EQ(t.rows.size(), 4u);
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(str(t, r, "uniform_method"), rt::kSimulated);
    EXPECT_EQ(str(t, r, "semantics_aware_method"), rt::kClosedForm);
    EXPECT_EQ(str(t, r, "randomized_stationary_method"), rt::kClosedForm);
  }
  EXPECT_EQ(t.to_csv(), rt::reproduce_table1(20'000, 1).to_csv());
  // Closed-form cells do not depend on the seed.
  const auto other = rt::reproduce_table1(20'000, 2);
  EXPECT_EQ(str(other, 0, "randomized_stationary"), str(t, 0, "randomized_stationary"));
  EXPECT_NE(str(other, 0, "uniform"), str(t, 0, "uniform"));
}

TEST(Reproduce, TableTwoFeasibilityFlags) {
  const auto t = rt::reproduce_table2(20'000, 1);
  ASSERT_EQ(t.rows.size(), 5u);
  for (std::size_t r = 0; r < 5; ++r) {
    const bool fast = r >= 3;
    EXPECT_EQ(str(t, r, "semantics_aware_feasible"), fast ? "false" : "true");
    EXPECT_EQ(str(t, r, "change_aware_feasible"), fast ? "false" : "true");
  }
}

TEST(Reproduce, CalibratedDistance) {
  const rt::PhysicalLink link{1e-3, 1e-13, 30.0, 4.0, 1.0};
  const double r = rt::calibrated_distance(link, 0.922);
  rt::PhysicalLink calibrated = link;
  calibrated.distance_m = r;
  EXPECT_NEAR(rt::ChannelModel::physical(calibrated).success_probability(), 0.922, 1e-12);
  EXPECT_THROW(rt::calibrated_distance(link, 1.0), std::invalid_argument);
}

TEST(Reproduce, FigThreeShape) {
  rt::Fig3Options o;
  o.horizon = 5'000;
  o.replications = 2;
  o.gamma_db = {0.0, 5.0};
  const auto t = rt::reproduce_fig3(o);
  // simulated rows per (p, policy, gamma) plus one closed-form RS row per (p, gamma)
  EXPECT_EQ(t.rows.size(), 2u * (4u * 2u + 2u));
  EXPECT_EQ(t.to_csv(), rt::reproduce_fig3(o).to_csv());
}
