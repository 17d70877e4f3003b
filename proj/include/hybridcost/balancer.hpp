#pragma once

#include <cstdint>
#include <vector>

namespace hybridcost {

struct EpochRouting {
  std::int64_t epoch = 0;
  std::int64_t arrivals = 0;
  std::vector<std::int64_t> vm_batches;
  std::vector<std::int64_t> faas_batches;
  // mu + phi * sigma when the epoch was routed; reported, not used to route.
  double threshold = 0.0;

  std::int64_t vm_requests() const;
  std::int64_t faas_requests() const;
};

// Splits arrivals into batches of r_max in arrival order (the last one may be
// partial). The first `healthy` batches go to long-lived instances in instance
// id order, the rest to serverless.
EpochRouting route_epoch(std::int64_t arrivals, std::int64_t healthy, std::int64_t r_max, double threshold = 0.0,
                         std::int64_t epoch = 0);

}  // namespace hybridcost
