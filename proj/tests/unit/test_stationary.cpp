#include <gtest/gtest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "remotetrack/closed_form.hpp"
#include "remotetrack/stationary.hpp"

namespace rt = remotetrack;
namespace an = remotetrack::analytics;

TEST(Stationary, PerfectCorrectionConcentratesOnSynced) {
  for (int n = 2; n <= 6; ++n) {
    const auto st = an::stationary(an::build_error_chain(rt::SourceModel(n, 0.5 / (n - 1)), 1.0, 1.0));
    EXPECT_NEAR(st.pi(0), 1.0, 1e-15);
    for (int i = 1; i < n; ++i) EXPECT_NEAR(st.pi(i), 0.0, 1e-15);
  }
}

TEST(Stationary, RandomMatrixDualMethod) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = rt::oracle::random_stochastic(5, seed);
    const auto direct = an::stationary(m);
    const auto power = an::stationary_power_iteration(m);
    const auto squared = rt::oracle::matrix_power_stationary(m);
    EXPECT_LT(direct.residual, 1e-12);
    EXPECT_LT(an::stationary_residual(m, direct.pi), 1e-12);
    EXPECT_LT((direct.pi - power.pi).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((direct.pi - squared).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(direct.pi.sum(), 1.0, 1e-14);
    EXPECT_GE(direct.pi.minCoeff(), 0.0);
  }
}

TEST(Stationary, ErrorChainsAgreeWithMatrixPowerOracle) {
  for (int n = 2; n <= 15; ++n) {
    for (double frac : {0.2, 0.6, 1.0}) {
      const double p = frac / (n - 1);
      for (double pa : {0.3, 0.9}) {
        for (double ps : {0.4, 0.922}) {
          const auto chain = an::build_error_chain(rt::SourceModel(n, p), pa, ps);
          const auto st = an::stationary(chain);
          EXPECT_LT(st.residual, 1e-12);
          const auto oracle =
              rt::oracle::matrix_power_stationary(rt::oracle::enumerate_error_chain(n, p, pa, ps));
          EXPECT_LT((st.pi - oracle).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n << " p=" << p;
        }
      }
    }
  }
}

TEST(Stationary, ThreeStateClosedFormMatchesSolve) {
  for (int k = 1; k <= 9; ++k) {
    const double p = 0.05 * k;
    for (double pa : {0.0, 0.5, 1.0}) {
      for (double ps : {0.0, 0.5, 1.0}) {
        const rt::SourceModel s(3, p);
        const auto st = an::stationary(an::build_error_chain(s, pa, ps));
        EXPECT_LT(st.residual, 1e-12);
        EXPECT_NEAR(an::p_error_rs(s, pa, ps), 1.0 - st.pi(0), 1e-12)
            << "p=" << p << " pa=" << pa << " ps=" << ps;
      }
    }
  }
}

TEST(Stationary, TwoStateClosedFormMatchesSolve) {
  for (int k = 1; k <= 20; ++k) {
    const double p = 0.05 * k;
    for (double pa : {0.0, 0.5, 1.0}) {
      for (double ps : {0.0, 0.5, 1.0}) {
        const rt::SourceModel s(2, p);
        const auto st = an::stationary(an::build_error_chain(s, pa, ps));
        EXPECT_NEAR(an::p_error_rs(s, pa, ps), 1.0 - st.pi(0), 1e-12);
      }
    }
  }
}

TEST(Stationary, ReducibleChainRejected) {
  EXPECT_THROW(an::stationary(Eigen::MatrixXd::Identity(3, 3)), an::ReducibleChainError);
  Eigen::MatrixXd two_classes(4, 4);
  two_classes << 0.5, 0.5, 0, 0, 0.5, 0.5, 0, 0, 0, 0, 0.3, 0.7, 0, 0, 0.6, 0.4;
  EXPECT_THROW(an::stationary(two_classes), an::ReducibleChainError);
  EXPECT_EQ(an::closed_class_count(two_classes), 2);
}

TEST(Stationary, PeriodicChainHandled) {
  Eigen::MatrixXd flip(2, 2);
  flip << 0, 1, 1, 0;
  const auto st = an::stationary(flip);
  EXPECT_NEAR(st.pi(0), 0.5, 1e-15);
  const auto power = an::stationary_power_iteration(flip);
  EXPECT_NEAR(power.pi(0), 0.5, 1e-12);
}

TEST(Stationary, TransientStatesGetNoMass) {
  Eigen::MatrixXd m(3, 3);
  m << 0.5, 0.5, 0.0, 0.2, 0.8, 0.0, 0.3, 0.3, 0.4;
  const auto st = an::stationary(m);
  EXPECT_EQ(an::closed_class_count(m), 1);
  EXPECT_NEAR(st.pi(2), 0.0, 1e-15);
  EXPECT_NEAR(st.pi(0), 2.0 / 7.0, 1e-14);
}

TEST(Stationary, RejectsNonStochasticInput) {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.6, 0.5, 0.5;
  EXPECT_THROW(an::stationary(bad), std::invalid_argument);
  EXPECT_THROW(an::stationary(Eigen::MatrixXd(2, 3)), std::invalid_argument);
}
