#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hybridcost/balancer.hpp"
#include "hybridcost/configurator.hpp"
#include "hybridcost/pricing.hpp"
#include "hybridcost/profile.hpp"
#include "hybridcost/traffic.hpp"

namespace hybridcost {

struct TrafficTrace {
  std::vector<std::int64_t> epochs;  // arrivals per epoch
  double epoch_seconds = 6.0;
  std::string source;
};

enum class VmState { kColdStarting, kHealthy, kTerminated };

struct VmInstance {
  std::int64_t id = 0;
  ConfigId config;
  std::int64_t provisioned_epoch = 0;
  // First epoch the instance may take batches.
  std::int64_t ready_epoch = 0;
  // Last epoch the instance is billed for; unset while alive.
  std::optional<std::int64_t> terminated_epoch;

  // State during epoch `epoch`.
  VmState state_at(std::int64_t epoch) const;
  bool billed_at(std::int64_t epoch) const;
};

// How requests inside one batch are split over exits.
enum class ExitMode {
  // Fractional f_pid * batch; matches the closed-form cost equations.
  kExpected,
  // Integer exits by largest-remainder apportionment of f_pid * batch.
  kLargestRemainder,
  // Seeded sequential binomial draws with the conditional exit rates.
  kMultinomial,
};

std::string to_string(ExitMode mode);
ExitMode exit_mode_from_string(const std::string& text);

struct SimParams {
  std::int64_t scale_interval_epochs = 25;
  std::int64_t cold_start_epochs = 19;
  // Extra cold start drawn uniformly from [0, jitter]; 0 keeps it fixed.
  std::int64_t cold_start_jitter_epochs = 0;
  double w_mu = 0.5;
  double w_sigma = 0.5;
  double phi = 1.0;
  // Overrides for the plan's values.
  std::optional<double> t_cip;
  std::optional<double> r_max;
  std::uint64_t seed = 0;
  ExitMode exit_mode = ExitMode::kExpected;
  // Seed the monitor with the first epoch's load and start with the pool it
  // asks for already healthy. Off: mu = sigma = 0 and an empty pool.
  bool warm_start = false;
  std::optional<std::int64_t> max_epochs;

  void validate() const;
};

struct EpochRow {
  std::int64_t epoch = 0;
  std::int64_t lambda = 0;
  double mu = 0.0;
  double sigma = 0.0;
  std::int64_t healthy = 0;
  // Instances billed this epoch, cold-starting ones included.
  std::int64_t provisioned = 0;
  std::int64_t target = 0;
  EpochRouting routing;
  double vm_cost = 0.0;
  double faas_cost = 0.0;
  // Billed serverless seconds for spilled batches and for offloaded tails.
  double spill_faas_seconds = 0.0;
  double tail_faas_seconds = 0.0;
  std::int64_t violations = 0;

  double cost() const { return vm_cost + faas_cost; }
};

struct ScaleEvent {
  std::int64_t epoch = 0;
  std::int64_t from = 0;
  std::int64_t to = 0;
  // Epoch the last added instance becomes healthy; equals epoch + 1 for
  // scale-downs and no-ops.
  std::int64_t ready_epoch = 0;
};

struct SimTotals {
  double vm_cost = 0.0;
  double faas_cost = 0.0;
  double total = 0.0;
  std::int64_t violations = 0;
  std::int64_t arrivals = 0;
  std::int64_t vm_requests = 0;
  std::int64_t faas_requests = 0;
  double spill_faas_seconds = 0.0;
  double tail_faas_seconds = 0.0;
};

struct SimReport {
  DeploymentPlan plan;
  SimParams params;
  double t_cip = 0.0;
  double r_max = 0.0;
  std::string trace_source;
  std::string trace_hash;
  double epoch_seconds = 0.0;
  std::vector<EpochRow> rows;
  std::vector<ScaleEvent> scale_events;
  std::vector<VmInstance> instances;
  SimTotals totals;
};

// FNV-1a over the arrival counts and epoch length, as 16 hex digits.
std::string trace_hash(const TrafficTrace& trace);

SimReport replay(const TrafficTrace& trace, const DeploymentPlan& plan, const StagedModelProfile& profile,
                 const ExitDistribution& dist, const PricingCatalog& pricing, const SimParams& params);

struct PoolResult {
  DeploymentPlan plan;
  SimTotals totals;
};

struct PoolComparison {
  // Sorted by total cost, cheapest first; ties keep input order.
  std::vector<PoolResult> ranked;
  // percent[i][j] = 100 * (total_i - total_j) / total_j over ranked indices.
  std::vector<std::vector<double>> percent;
  std::vector<SimReport> reports;  // input order
};

PoolComparison compare_pools(const TrafficTrace& trace, const std::vector<DeploymentPlan>& plans,
                             const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PricingCatalog& pricing, const SimParams& params);

// Survivors entering each partition for one batch under the given mode.
// survivors[pid - 1] is the count entering partition pid; survivors[0] == batch.
std::vector<double> batch_survivors(const ExitDistribution& dist, std::int64_t batch, ExitMode mode,
                                    std::mt19937_64& rng);

}  // namespace hybridcost
