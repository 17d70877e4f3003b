#include <gtest/gtest.h>

#include <random>

#include "hybridcost/balancer.hpp"
#include "hybridcost/error.hpp"

namespace hybridcost {
namespace {

using Batches = std::vector<std::int64_t>;

TEST(RouteEpoch, SplitsIntoInstanceAndServerlessBatches) {
  const auto r = route_epoch(336, 2, 100);
  EXPECT_EQ(r.vm_batches, (Batches{100, 100}));
  EXPECT_EQ(r.faas_batches, (Batches{100, 36}));
}

TEST(RouteEpoch, EmptyEpoch) {
  const auto r = route_epoch(0, 3, 100);
  EXPECT_TRUE(r.vm_batches.empty());
  EXPECT_TRUE(r.faas_batches.empty());
}

TEST(RouteEpoch, SurplusInstancesTakeEverything) {
  const auto r = route_epoch(250, 5, 100);
  EXPECT_EQ(r.vm_batches, (Batches{100, 100, 50}));
  EXPECT_TRUE(r.faas_batches.empty());
}

TEST(RouteEpoch, NoInstances) {
  const auto r = route_epoch(120, 0, 100, 42.0, 7);
  EXPECT_EQ(r.faas_batches, (Batches{100, 20}));
  EXPECT_EQ(r.epoch, 7);
  EXPECT_EQ(r.threshold, 42.0);
}

TEST(RouteEpoch, RejectsBadInput) {
  EXPECT_THROW(route_epoch(-1, 1, 100), InvalidArgument);
  EXPECT_THROW(route_epoch(1, -1, 100), InvalidArgument);
  EXPECT_THROW(route_epoch(1, 1, 0), InvalidArgument);
}

TEST(RouteEpochProperty, ConservationAndCapacity) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::int64_t arrivals = static_cast<std::int64_t>(rng() % 2000);
    const std::int64_t healthy = static_cast<std::int64_t>(rng() % 25);
    const std::int64_t r_max = 1 + static_cast<std::int64_t>(rng() % 300);
    const auto r = route_epoch(arrivals, healthy, r_max);
    EXPECT_EQ(r.vm_requests() + r.faas_requests(), arrivals);
    EXPECT_LE(static_cast<std::int64_t>(r.vm_batches.size()), healthy);
    for (auto b : r.vm_batches) EXPECT_TRUE(b > 0 && b <= r_max);
    for (auto b : r.faas_batches) EXPECT_TRUE(b > 0 && b <= r_max);
    if (healthy * r_max >= arrivals) {
      EXPECT_EQ(r.faas_requests(), 0);
    }
    const auto again = route_epoch(arrivals, healthy, r_max);
    EXPECT_EQ(again.vm_batches, r.vm_batches);
    EXPECT_EQ(again.faas_batches, r.faas_batches);
  }
}

}  // namespace
}  // namespace hybridcost
