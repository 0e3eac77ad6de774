#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "remotetrack/process_model.hpp"

namespace rt = remotetrack;

TEST(SourceModel, DerivesStayProbability) {
  const rt::SourceModel s(3, 0.1);
  EXPECT_EQ(s.n_states(), 3);
  EXPECT_DOUBLE_EQ(s.p_stay(), 0.8);
  EXPECT_DOUBLE_EQ(rt::SourceModel(2, 1.0).p_stay(), 0.0);
}

TEST(SourceModel, RowSumsToOne) {
  for (int n = 2; n <= 15; ++n) {
    for (double frac : {0.0, 0.25, 0.5, 0.99, 1.0}) {
      const double p = frac / (n - 1);
      const rt::SourceModel s(n, p);
      EXPECT_NEAR(s.p_stay() + (n - 1) * s.p_change(), 1.0, 1e-12) << "n=" << n << " p=" << p;
    }
  }
}

TEST(SourceModel, RejectsInvalidParameters) {
  EXPECT_THROW(rt::SourceModel(1, 0.0), std::invalid_argument);
  EXPECT_THROW(rt::SourceModel(3, -0.1), std::invalid_argument);
  EXPECT_THROW(rt::SourceModel(3, 0.6), std::invalid_argument);
  EXPECT_THROW(rt::SourceModel(2, std::nan("")), std::invalid_argument);
}

TEST(Channel, DirectModeReturnsStoredProbability) {
  EXPECT_DOUBLE_EQ(rt::success_probability(rt::ChannelModel::direct(0.922)), 0.922);
  EXPECT_THROW(rt::ChannelModel::direct(1.5), std::invalid_argument);
  EXPECT_THROW(rt::ChannelModel::direct(-0.1), std::invalid_argument);
}

TEST(Channel, PhysicalZeroThresholdAlwaysDecodes) {
  rt::PhysicalLink link;
  link.snr_threshold = 0.0;
  EXPECT_DOUBLE_EQ(rt::ChannelModel::physical(link).success_probability(), 1.0);
}

TEST(Channel, PhysicalMatchesExponentialLaw) {
  rt::PhysicalLink link{2e-3, 3e-12, 50.0, 3.5, 2.0};
  const double expected = std::exp(-2.0 * 3e-12 / (2e-3 * std::pow(50.0, -3.5)));
  EXPECT_NEAR(rt::ChannelModel::physical(link).success_probability(), expected, 1e-15);
}

TEST(Channel, PhysicalExponentLinearInThreshold) {
  rt::PhysicalLink link{1e-3, 1e-13, 170.0, 4.0, 1.0};
  const double at1 = rt::ChannelModel::physical(link).success_probability();
  link.snr_threshold = 10.0;
  const double at10 = rt::ChannelModel::physical(link).success_probability();
  EXPECT_NEAR(at10, std::pow(at1, 10.0), 1e-14);
}

TEST(Channel, PhysicalMonotonicity) {
  const rt::PhysicalLink base{1e-3, 1e-13, 150.0, 4.0, 2.0};
  const double ps = rt::ChannelModel::physical(base).success_probability();
  auto with = [&](auto mutate) {
    rt::PhysicalLink l = base;
    mutate(l);
    return rt::ChannelModel::physical(l).success_probability();
  };
  EXPECT_LT(with([](auto& l) { l.snr_threshold = 3.0; }), ps);
  EXPECT_LT(with([](auto& l) { l.noise_var_w = 2e-13; }), ps);
  EXPECT_GT(with([](auto& l) { l.tx_power_w = 2e-3; }), ps);
}

TEST(Channel, PhysicalRejectsBadLinks) {
  auto make = [](rt::PhysicalLink l) { return rt::ChannelModel::physical(l); };
  EXPECT_THROW(make({0.0, 1e-13, 30, 4, 1}), std::invalid_argument);
  EXPECT_THROW(make({-1e-3, 1e-13, 30, 4, 1}), std::invalid_argument);
  EXPECT_THROW(make({1e-3, 0.0, 30, 4, 1}), std::invalid_argument);
  EXPECT_THROW(make({1e-3, 1e-13, 0.0, 4, 1}), std::invalid_argument);
  EXPECT_THROW(make({1e-3, 1e-13, 30, 2.0, 1}), std::invalid_argument);
  EXPECT_THROW(make({1e-3, 1e-13, 30, 4, -1}), std::invalid_argument);
}

TEST(Units, DecibelConversions) {
  EXPECT_DOUBLE_EQ(rt::db_to_linear(0.0), 1.0);
  EXPECT_NEAR(rt::db_to_linear(10.0), 10.0, 1e-12);
  EXPECT_NEAR(rt::dbm_to_watts(0.0), 1e-3, 1e-18);
  EXPECT_NEAR(rt::dbm_to_watts(-100.0), 1e-13, 1e-25);
}

TEST(SourceStep, FrozenSourceStays) {
  const rt::SourceModel s(3, 0.0);
  for (double u : {0.0, 0.3, 0.999999}) EXPECT_EQ(rt::source_step(s, 1, u), 1);
}

TEST(SourceStep, ForcedFlip) {
  const rt::SourceModel s(2, 1.0);
  for (double u : {0.0, 0.5, 0.999999}) EXPECT_EQ(rt::source_step(s, 0, u), 1);
}

TEST(SourceStep, IntervalPartition) {
  const rt::SourceModel s(4, 0.1);  // q = 0.7
  EXPECT_EQ(rt::source_step(s, 2, 0.0), 2);
  EXPECT_EQ(rt::source_step(s, 2, 0.69), 2);
  EXPECT_EQ(rt::source_step(s, 2, 0.71), 0);
  EXPECT_EQ(rt::source_step(s, 2, 0.81), 1);
  EXPECT_EQ(rt::source_step(s, 2, 0.91), 3);
  EXPECT_EQ(rt::source_step(s, 2, 0.9999999), 3);
}

TEST(SourceStep, PureFunction) {
  const rt::SourceModel s(5, 0.2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double d = u(rng);
    const int cur = k % 5;
    EXPECT_EQ(rt::source_step(s, cur, d), rt::source_step(s, cur, d));
  }
}

TEST(SourceStep, FrequenciesMatchTransitionRow) {
  const int n = 4;
  const rt::SourceModel s(n, 0.15);
  const int trials = 1'000'000;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> counts(n, 0);
  for (int k = 0; k < trials; ++k) ++counts[static_cast<std::size_t>(rt::source_step(s, 1, u(rng)))];
  for (int j = 0; j < n; ++j) {
    const double expected = j == 1 ? s.p_stay() : s.p_change();
    const double freq = static_cast<double>(counts[static_cast<std::size_t>(j)]) / trials;
    EXPECT_NEAR(freq, expected, 3.0 * remotetrack::oracle::binomial_se(expected, trials)) << "j=" << j;
  }
}

TEST(ChannelOutcome, Extremes) {
  const auto always = rt::ChannelModel::direct(1.0);
  const auto never = rt::ChannelModel::direct(0.0);
  for (double u : {0.0, 0.5, 0.9999999}) {
    EXPECT_EQ(rt::channel_outcome(always, u), rt::ChannelOutcome::success);
    EXPECT_EQ(rt::channel_outcome(never, u), rt::ChannelOutcome::failure);
  }
}

TEST(ChannelOutcome, SuccessFrequency) {
  const auto ch = rt::ChannelModel::direct(0.445);
  const int trials = 1'000'000;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int ok = 0;
  for (int k = 0; k < trials; ++k) ok += rt::channel_outcome(ch, u(rng)) == rt::ChannelOutcome::success;
  EXPECT_NEAR(static_cast<double>(ok) / trials, 0.445,
              3.0 * remotetrack::oracle::binomial_se(0.445, trials));
}

TEST(CostMatrix, Invariants) {
  const rt::CostMatrix zero(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(zero(i, j), 0.0);
  const auto unit = rt::CostMatrix::unit(3);
  EXPECT_EQ(unit(0, 0), 0.0);
  EXPECT_EQ(unit(0, 2), 1.0);
  const rt::CostMatrix c(2, {0.0, 5.0, 1.0, 0.0});
  EXPECT_EQ(c(0, 1), 5.0);
  EXPECT_EQ(c(1, 0), 1.0);
  EXPECT_THROW(rt::CostMatrix(2, {1.0, 0.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(rt::CostMatrix(2, {0.0, -1.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(rt::CostMatrix(2, {0.0, 1.0, 0.0}), std::invalid_argument);
}
