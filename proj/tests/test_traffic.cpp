#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hybridcost/error.hpp"
#include "hybridcost/traffic.hpp"

namespace hybridcost {
namespace {

TEST(MonitorUpdate, DirectSubstitution) {
  const auto next = update(make_monitor(0.5, 0.5, 1.0, 10.0, 2.0), 20.0);
  EXPECT_EQ(next.mu, 15.0);
  EXPECT_EQ(next.sigma, 3.5);
  EXPECT_EQ(next.threshold(), 18.5);
}

TEST(MonitorUpdate, FixedPoint) {
  for (double c : {0.0, 1.0, 100.0, 336.0, 12345.678}) {
    const auto state = make_monitor(0.3, 0.7, 1.0, c, 0.0);
    const auto next = update(state, c);
    EXPECT_EQ(next.mu, c);
    EXPECT_EQ(next.sigma, 0.0);
  }
}

TEST(MonitorUpdate, GapDecaysGeometrically) {
  const double c = 1024.0;
  auto state = make_monitor(0.5, 0.5, 1.0, 0.0, 0.0);
  for (int t = 1; t <= 52; ++t) {
    state = update(state, c);
    // Dyadic values keep every step exact.
    EXPECT_EQ(c - state.mu, std::ldexp(c, -t)) << "step " << t;
  }
}

TEST(MonitorUpdate, LongDoubleReference) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> load(0.0, 1000.0);
  const double w_mu = 0.3, w_sigma = 0.6;
  auto state = make_monitor(w_mu, w_sigma);
  long double mu = 0, sigma = 0;
  for (int t = 0; t < 10000; ++t) {
    const double lambda = load(rng);
    state = update(state, lambda);
    mu = (1 - w_mu) * mu + w_mu * static_cast<long double>(lambda);
    sigma = (1 - w_sigma) * sigma + w_sigma * std::fabs(static_cast<long double>(lambda) - mu);
    ASSERT_NEAR(state.mu, static_cast<double>(mu), 1e-12 * std::max(1.0L, mu));
    ASSERT_NEAR(state.sigma, static_cast<double>(sigma), 1e-12 * std::max(1.0L, mu));
  }
}

TEST(MonitorUpdate, HomogeneousOfOrderOne) {
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto base = make_monitor(0.05 + 0.95 * unit(rng), 0.05 + 0.95 * unit(rng), 1.0, 500 * unit(rng),
                                   100 * unit(rng));
    const double lambda = 500 * unit(rng);
    const double c = 0.1 + 10 * unit(rng);
    auto scaled = base;
    scaled.mu *= c;
    scaled.sigma *= c;
    const auto a = update(base, lambda);
    const auto b = update(scaled, c * lambda);
    EXPECT_NEAR(b.mu, c * a.mu, 1e-12 * std::max(1.0, c * a.mu));
    EXPECT_NEAR(b.sigma, c * a.sigma, 1e-12 * std::max(1.0, c * a.mu));
    // Powers of two scale exactly.
    auto exact = base;
    exact.mu *= 4;
    exact.sigma *= 4;
    EXPECT_EQ(update(exact, 4 * lambda).mu, 4 * a.mu);
  }
}

TEST(MakeMonitor, RejectsBadParameters) {
  EXPECT_THROW(make_monitor(0.0), InvalidArgument);
  EXPECT_THROW(make_monitor(0.5, 1.5), InvalidArgument);
  EXPECT_THROW(make_monitor(0.5, 0.5, 1.0, -1.0), InvalidArgument);
  EXPECT_THROW(update(make_monitor(), -3.0), InvalidArgument);
}

TEST(ScaleTarget, ThresholdedResidual) {
  auto at = [](double load) { return make_monitor(0.5, 0.5, 1.0, load, 0.0); };
  auto d = scale_target(at(250), 100, 90);
  EXPECT_EQ(d.k, 2);
  EXPECT_EQ(d.residual, 50);
  EXPECT_EQ(d.target, 2);
  EXPECT_EQ(scale_target(at(295), 100, 90).target, 3);
  EXPECT_EQ(scale_target(at(0), 100, 90).target, 0);
  EXPECT_EQ(scale_target(make_monitor(0.5, 0.5, 1.0, 150, 45), 100, 90).target, 2);
  EXPECT_THROW(scale_target(at(1), 0, 0), InvalidArgument);
  EXPECT_THROW(scale_target(at(1), 100, 120), InvalidArgument);
}

TEST(ScaleTarget, MonotoneInLoad) {
  for (double t_cip : {0.0, 37.5, 90.0, 100.0}) {
    std::int64_t last = 0;
    for (double load = 0; load <= 1000; load += 0.25) {
      const auto target = scale_target(make_monitor(0.5, 0.5, 1.0, load, 0.0), 100, t_cip).target;
      EXPECT_GE(target, last) << "load " << load << " t_cip " << t_cip;
      last = target;
    }
  }
}

}  // namespace
}  // namespace hybridcost
