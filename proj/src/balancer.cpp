#include "hybridcost/balancer.hpp"

#include <algorithm>
#include <numeric>

#include "hybridcost/error.hpp"

namespace hybridcost {

std::int64_t EpochRouting::vm_requests() const {
  return std::accumulate(vm_batches.begin(), vm_batches.end(), std::int64_t{0});
}

std::int64_t EpochRouting::faas_requests() const {
  return std::accumulate(faas_batches.begin(), faas_batches.end(), std::int64_t{0});
}

EpochRouting route_epoch(std::int64_t arrivals, std::int64_t healthy, std::int64_t r_max, double threshold,
                         std::int64_t epoch) {
  if (arrivals < 0 || healthy < 0) {
    throw InvalidArgument("arrivals and healthy instance count must be non-negative");
  }
  if (r_max <= 0) {
    throw InvalidArgument("r_max must be positive");
  }
  EpochRouting routing;
  routing.epoch = epoch;
  routing.arrivals = arrivals;
  routing.threshold = threshold;
  std::int64_t remaining = arrivals;
  while (remaining > 0) {
    const std::int64_t batch = std::min(remaining, r_max);
    if (static_cast<std::int64_t>(routing.vm_batches.size()) < healthy) {
      routing.vm_batches.push_back(batch);
    } else {
      routing.faas_batches.push_back(batch);
    }
    remaining -= batch;
  }
  return routing;
}

}  // namespace hybridcost
