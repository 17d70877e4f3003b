#include <gtest/gtest.h>

#include <random>

#include "hybridcost/configurator.hpp"
#include "hybridcost/error.hpp"
#include "hybridcost/io.hpp"
#include "hybridcost/simengine.hpp"
#include "support.hpp"

namespace hybridcost {
namespace {

using namespace hybridcost::testing;

TrafficTrace constant_trace(std::int64_t lambda, std::size_t epochs) {
  TrafficTrace trace;
  trace.epochs.assign(epochs, lambda);
  return trace;
}

DeploymentPlan hybrid_plan(double t_cip = 90) { return {Setup::kHybrid, "c6i.large", "faas-8845", 5, t_cip, 100}; }
DeploymentPlan iaas_plan(double t_cip = 90) {
  return {Setup::kIaaSOnly, "c6i.xlarge", "faas-8845", std::nullopt, t_cip, 100};
}
DeploymentPlan faas_plan() { return {Setup::kFaaSOnly, std::nullopt, "faas-8845", std::nullopt, 100, 100}; }

TEST(Replay, ConstantLoadSettlesOnOneInstance) {
  const auto profile = vgg_profile();
  const auto pricing = vgg_pricing();
  const ExitDistribution dist(kMiddle);
  SimParams params;
  params.cold_start_epochs = 0;
  params.scale_interval_epochs = 1;
  const auto report = replay(constant_trace(100, 60), hybrid_plan(), profile, dist, pricing, params);
  const auto closed = cost_hybrid(100, 100, pricing.at("c6i.large"), pricing.at("faas-8845"), 5, profile, dist, 6.0, 90);
  for (std::size_t t = 2; t < report.rows.size(); ++t) {
    const auto& row = report.rows[t];
    EXPECT_EQ(row.healthy, 1) << "epoch " << t;
    EXPECT_EQ(row.provisioned, 1);
    EXPECT_TRUE(row.routing.faas_batches.empty());
    EXPECT_EQ(row.spill_faas_seconds, 0.0);
    EXPECT_NEAR(row.cost(), closed.total, 1e-15);
    EXPECT_NEAR(row.vm_cost, vm_epoch_cost(pricing.at("c6i.large"), 6.0), 1e-18);
  }
  EXPECT_EQ(report.totals.violations, 0);
}

TEST(Replay, ZeroTraceCostsNothing) {
  const auto report =
      replay(constant_trace(0, 50), hybrid_plan(), vgg_profile(), ExitDistribution(kMiddle), vgg_pricing(), {});
  EXPECT_EQ(report.totals.total, 0.0);
  EXPECT_TRUE(report.instances.empty());
  EXPECT_EQ(report.totals.violations, 0);
}

// Arrivals built so the mean-plus-deviation signal crosses one instance at
// epoch 0, two at 25, falls back to one at 250 and returns to two at 275.
TrafficTrace scaling_trace() {
  TrafficTrace trace;
  for (int t = 0; t < 300; ++t) {
    std::int64_t lambda = 200;
    if (t == 0) lambda = 140;
    if (t >= 226 && t <= 250) lambda = 100;
    trace.epochs.push_back(lambda);
  }
  return trace;
}

TEST(Replay, ScaleEventsFollowColdStart) {
  SimParams params;  // interval 25, cold start 19
  const auto report =
      replay(scaling_trace(), hybrid_plan(90), vgg_profile(), ExitDistribution(kMiddle), vgg_pricing(), params);
  ASSERT_EQ(report.scale_events.size(), 4u);
  const std::vector<std::array<std::int64_t, 4>> want{
      {0, 0, 1, 19}, {25, 1, 2, 44}, {250, 2, 1, 251}, {275, 1, 2, 294}};
  for (std::size_t i = 0; i < want.size(); ++i) {
    const auto& e = report.scale_events[i];
    EXPECT_EQ(e.epoch, want[i][0]);
    EXPECT_EQ(e.from, want[i][1]);
    EXPECT_EQ(e.to, want[i][2]);
    EXPECT_EQ(e.ready_epoch, want[i][3]);
  }
  // Cold-starting instances are billed but take no batches.
  EXPECT_EQ(report.rows[5].provisioned, 1);
  EXPECT_EQ(report.rows[5].healthy, 0);
  EXPECT_TRUE(report.rows[5].routing.vm_batches.empty());
  EXPECT_EQ(report.rows[19].healthy, 1);
  EXPECT_EQ(report.rows[44].healthy, 2);
  EXPECT_EQ(report.rows[250].provisioned, 2);
  EXPECT_EQ(report.rows[251].provisioned, 1);
  EXPECT_EQ(report.rows[0].provisioned, 0);
}

TEST(Replay, ConservationAndCapacityOnRandomTraces) {
  std::mt19937_64 rng(123);
  const auto profile = vgg_profile();
  const auto pricing = vgg_pricing();
  const ExitDistribution dist(kMiddle);
  for (int trial = 0; trial < 20; ++trial) {
    TrafficTrace trace;
    for (int t = 0; t < 200; ++t) trace.epochs.push_back(static_cast<std::int64_t>(rng() % 600));
    SimParams params;
    params.scale_interval_epochs = 1 + static_cast<std::int64_t>(rng() % 30);
    params.cold_start_epochs = static_cast<std::int64_t>(rng() % 25);
    for (const auto& plan : {hybrid_plan(), iaas_plan(), faas_plan()}) {
      const auto report = replay(trace, plan, profile, dist, pricing, params);
      double vm = 0, faas = 0;
      std::int64_t arrivals = 0;
      for (const auto& row : report.rows) {
        EXPECT_EQ(row.routing.vm_requests() + row.routing.faas_requests(), row.lambda);
        EXPECT_LE(static_cast<std::int64_t>(row.routing.vm_batches.size()), row.healthy);
        for (auto b : row.routing.vm_batches) EXPECT_LE(b, 100);
        EXPECT_GE(row.violations, 0);
        vm += row.vm_cost;
        faas += row.faas_cost;
        arrivals += row.lambda;
      }
      EXPECT_EQ(report.totals.vm_cost, vm);
      EXPECT_EQ(report.totals.faas_cost, faas);
      EXPECT_EQ(report.totals.arrivals, arrivals);
      EXPECT_EQ(report.totals.vm_requests + report.totals.faas_requests, arrivals);
    }
  }
}

TEST(Replay, LittlesLawOnConstantSpill) {
  const auto profile = vgg_profile();
  const auto pricing = vgg_pricing();
  const ExitDistribution dist(kMiddle);
  const double mean_duration = oracle_faas_seconds(1.0, kMiddle, per_request(kFaasBatch, 100));
  for (std::int64_t lambda : {1, 37, 100, 250}) {
    const auto report = replay(constant_trace(lambda, 100), faas_plan(), profile, dist, pricing, {});
    const double in_flight = report.totals.spill_faas_seconds / static_cast<double>(report.rows.size());
    EXPECT_NEAR(in_flight, static_cast<double>(lambda) * mean_duration, 1e-9);
  }
}

TEST(Replay, DeterministicReports) {
  std::mt19937_64 rng(5);
  TrafficTrace trace;
  for (int t = 0; t < 150; ++t) trace.epochs.push_back(static_cast<std::int64_t>(rng() % 500));
  SimParams params;
  params.exit_mode = ExitMode::kMultinomial;
  params.cold_start_jitter_epochs = 6;
  params.seed = 99;
  const auto a = replay(trace, hybrid_plan(), vgg_profile(), ExitDistribution(kMiddle), vgg_pricing(), params);
  const auto b = replay(trace, hybrid_plan(), vgg_profile(), ExitDistribution(kMiddle), vgg_pricing(), params);
  EXPECT_EQ(io::to_json(a).dump(), io::to_json(b).dump());
  EXPECT_EQ(io::report_to_csv(a), io::report_to_csv(b));
  params.seed = 100;
  const auto c = replay(trace, hybrid_plan(), vgg_profile(), ExitDistribution(kMiddle), vgg_pricing(), params);
  EXPECT_NE(io::to_json(a).dump(), io::to_json(c).dump());
}

TEST(Replay, EpochLimitTruncates) {
  SimParams params;
  params.max_epochs = 40;
  const auto report =
      replay(constant_trace(120, 100), faas_plan(), vgg_profile(), ExitDistribution(kMiddle), vgg_pricing(), params);
  EXPECT_EQ(report.rows.size(), 40u);
}

TEST(Replay, RejectsBadInputs) {
  const auto profile = vgg_profile();
  const auto pricing = vgg_pricing();
  const ExitDistribution dist(kMiddle);
  EXPECT_THROW(replay(TrafficTrace{}, faas_plan(), profile, dist, pricing, {}), InvalidArgument);
  DeploymentPlan unknown = hybrid_plan();
  unknown.theta_i = "m5.metal";
  EXPECT_THROW(replay(constant_trace(1, 3), unknown, profile, dist, pricing, {}), InvalidArgument);
  DeploymentPlan swapped = hybrid_plan();
  swapped.theta_i = "faas-8845";
  EXPECT_THROW(replay(constant_trace(1, 3), swapped, profile, dist, pricing, {}), KindError);
  EXPECT_THROW(replay(constant_trace(1, 3), faas_plan(), profile, ExitDistribution({0.5, 0.5}), pricing, {}),
               ProfileShapeError);
  SimParams fractional;
  fractional.r_max = 99.5;
  EXPECT_THROW(replay(constant_trace(1, 3), faas_plan(), profile, dist, pricing, fractional), InvalidArgument);
  SimParams zero_interval;
  zero_interval.scale_interval_epochs = 0;
  EXPECT_THROW(replay(constant_trace(1, 3), faas_plan(), profile, dist, pricing, zero_interval), InvalidArgument);
}

TEST(Replay, ViolationsCountedForSlowBatches) {
  // Full-model batches on c6i.large take 10.3 s against a 6 s epoch.
  DeploymentPlan slow{Setup::kIaaSOnly, "c6i.large", "faas-8845", std::nullopt, 0, 100};
  SimParams params;
  params.warm_start = true;
  const auto report =
      replay(constant_trace(200, 10), slow, vgg_profile(), ExitDistribution(kDeep), vgg_pricing(), params);
  EXPECT_EQ(report.totals.violations, 20);
}

TEST(ComparePools, IdenticalPlansTie) {
  const auto cmp = compare_pools(constant_trace(150, 80), {hybrid_plan(), hybrid_plan()}, vgg_profile(),
                                 ExitDistribution(kMiddle), vgg_pricing(), {});
  ASSERT_EQ(cmp.ranked.size(), 2u);
  EXPECT_EQ(cmp.percent[0][1], 0.0);
  EXPECT_EQ(cmp.percent[1][0], 0.0);
  EXPECT_THROW(compare_pools(constant_trace(1, 3), {faas_plan()}, vgg_profile(), ExitDistribution(kMiddle),
                             vgg_pricing(), {}),
               InvalidArgument);
}

TEST(ComparePools, OrderingMatchesClosedFormPrediction) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 20.0);
  TrafficTrace trace;
  for (int t = 0; t < 300; ++t) trace.epochs.push_back(std::max<std::int64_t>(0, std::llround(180 + noise(rng))));
  const auto profile = vgg_profile();
  const auto pricing = vgg_pricing();
  const ExitDistribution dist(kMiddle);
  const auto t_h = resolve_t_cip(hybrid_plan().spec(), profile, dist, pricing, 100, 6.0);
  const auto t_i = resolve_t_cip(iaas_plan().spec(), profile, dist, pricing, 100, 6.0);
  const auto cmp = compare_pools(trace, {iaas_plan(t_i), faas_plan(), hybrid_plan(t_h)}, profile, dist, pricing, {});
  // Per-epoch closed forms on the same arrivals predict the order.
  double h = 0, f = 0, i = 0;
  for (auto lambda : trace.epochs) {
    const double n = static_cast<double>(lambda);
    h += evaluate_setup(hybrid_plan().spec(), n, 100, 6, t_h, profile, dist, pricing).total;
    f += evaluate_setup(faas_plan().spec(), n, 100, 6, 100, profile, dist, pricing).total;
    i += evaluate_setup(iaas_plan().spec(), n, 100, 6, t_i, profile, dist, pricing).total;
  }
  ASSERT_LT(h, f);
  ASSERT_LT(f, i);
  EXPECT_EQ(cmp.ranked[0].plan.setup, Setup::kHybrid);
  EXPECT_EQ(cmp.ranked[1].plan.setup, Setup::kFaaSOnly);
  EXPECT_EQ(cmp.ranked[2].plan.setup, Setup::kIaaSOnly);
  EXPECT_NEAR(cmp.percent[2][0], 100 * (cmp.ranked[2].totals.total / cmp.ranked[0].totals.total - 1), 1e-9);
}

TEST(BatchSurvivors, ModesAgreeOnShape) {
  const ExitDistribution dist(kMiddle);
  std::mt19937_64 rng(1);
  const auto expected = batch_survivors(dist, 100, ExitMode::kExpected, rng);
  EXPECT_EQ(expected[0], 100.0);
  EXPECT_NEAR(expected[6], 3.0, 1e-12);
  const auto rounded = batch_survivors(dist, 37, ExitMode::kLargestRemainder, rng);
  EXPECT_EQ(rounded[0], 37.0);
  for (std::size_t k = 1; k < rounded.size(); ++k) {
    EXPECT_EQ(rounded[k], std::floor(rounded[k]));
    EXPECT_LE(rounded[k], rounded[k - 1]);
    EXPECT_NEAR(rounded[k], 37 * dist.survival(static_cast<int>(k) + 1), 1.0 + 1e-9);
  }
  std::mt19937_64 a(9), b(9);
  EXPECT_EQ(batch_survivors(dist, 100, ExitMode::kMultinomial, a),
            batch_survivors(dist, 100, ExitMode::kMultinomial, b));
}

TEST(TraceHash, StableAndSensitive) {
  auto trace = constant_trace(5, 10);
  const auto h = trace_hash(trace);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h, trace_hash(trace));
  trace.epochs[3] = 6;
  EXPECT_NE(h, trace_hash(trace));
}

TEST(ExitModeText, RoundTrip) {
  for (auto m : {ExitMode::kExpected, ExitMode::kLargestRemainder, ExitMode::kMultinomial}) {
    EXPECT_EQ(exit_mode_from_string(to_string(m)), m);
  }
  EXPECT_THROW(exit_mode_from_string("poisson"), InvalidArgument);
}

}  // namespace
}  // namespace hybridcost
