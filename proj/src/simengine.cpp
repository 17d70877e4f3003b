#include "hybridcost/simengine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <future>
#include <iomanip>
#include <sstream>

#include "hybridcost/costmodel.hpp"
#include "hybridcost/error.hpp"

namespace hybridcost {

VmState VmInstance::state_at(std::int64_t epoch) const {
  if (terminated_epoch && epoch > *terminated_epoch) {
    return VmState::kTerminated;
  }
  if (epoch > provisioned_epoch && epoch >= ready_epoch) {
    return VmState::kHealthy;
  }
  return VmState::kColdStarting;
}

bool VmInstance::billed_at(std::int64_t epoch) const {
  return epoch > provisioned_epoch && (!terminated_epoch || epoch <= *terminated_epoch);
}

std::string to_string(ExitMode mode) {
  switch (mode) {
    case ExitMode::kExpected:
      return "expected";
    case ExitMode::kLargestRemainder:
      return "largest_remainder";
    case ExitMode::kMultinomial:
      return "multinomial";
  }
  return "unknown";
}

ExitMode exit_mode_from_string(const std::string& text) {
  if (text == "expected") return ExitMode::kExpected;
  if (text == "largest_remainder") return ExitMode::kLargestRemainder;
  if (text == "multinomial") return ExitMode::kMultinomial;
  throw InvalidArgument("unknown exit mode '" + text + "'");
}

void SimParams::validate() const {
  if (scale_interval_epochs < 1) {
    throw InvalidArgument("scale interval must be at least one epoch");
  }
  if (cold_start_epochs < 0 || cold_start_jitter_epochs < 0) {
    throw InvalidArgument("cold start must be non-negative");
  }
  make_monitor(w_mu, w_sigma, phi);
  if (max_epochs && *max_epochs < 1) {
    throw InvalidArgument("epoch limit must be positive");
  }
}

std::string trace_hash(const TrafficTrace& trace) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (word >> (8 * byte)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  };
  for (auto value : trace.epochs) {
    mix(static_cast<std::uint64_t>(value));
  }
  std::uint64_t seconds_bits = 0;
  std::memcpy(&seconds_bits, &trace.epoch_seconds, sizeof(seconds_bits));
  mix(seconds_bits);
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

std::vector<double> batch_survivors(const ExitDistribution& dist, std::int64_t batch, ExitMode mode,
                                    std::mt19937_64& rng) {
  const int L = dist.num_partitions();
  std::vector<double> survivors(L, 0.0);
  const double b = static_cast<double>(batch);
  switch (mode) {
    case ExitMode::kExpected: {
      survivors[0] = b;
      for (int pid = 2; pid <= L; ++pid) {
        survivors[pid - 1] = b * dist.survival(pid);
      }
      break;
    }
    case ExitMode::kLargestRemainder: {
      std::vector<std::int64_t> exits(L);
      std::vector<std::pair<double, int>> remainders;
      std::int64_t assigned = 0;
      for (int i = 0; i < L; ++i) {
        const double share = b * dist.fractions()[i];
        exits[i] = static_cast<std::int64_t>(std::floor(share));
        assigned += exits[i];
        remainders.emplace_back(share - std::floor(share), i);
      }
      std::stable_sort(remainders.begin(), remainders.end(),
                       [](const auto& x, const auto& y) { return x.first > y.first; });
      for (std::int64_t left = batch - assigned, r = 0; left > 0; --left, ++r) {
        exits[remainders[static_cast<std::size_t>(r) % remainders.size()].second] += 1;
      }
      std::int64_t alive = batch;
      for (int i = 0; i < L; ++i) {
        survivors[i] = static_cast<double>(alive);
        alive -= exits[i];
      }
      break;
    }
    case ExitMode::kMultinomial: {
      const auto betas = dist.conditional();
      std::int64_t alive = batch;
      for (int i = 0; i < L; ++i) {
        survivors[i] = static_cast<double>(alive);
        if (alive == 0) continue;
        std::binomial_distribution<std::int64_t> draw(alive, betas[i]);
        alive -= i + 1 == L ? alive : draw(rng);
      }
      break;
    }
  }
  return survivors;
}

namespace {

struct PoolModel {
  Setup setup;
  const PlatformConfig* theta_i = nullptr;
  const PlatformConfig* theta_f = nullptr;
  int head_last = 0;  // partitions 1..head_last run on the instance
  std::vector<double> vm_time;
  std::vector<double> faas_time;
  double vm_epoch = 0.0;
  double transmission_s = 0.0;
};

PoolModel build_pool(const DeploymentPlan& plan, const StagedModelProfile& profile, const PricingCatalog& pricing,
                     double epoch_seconds) {
  plan.validate();
  const int L = profile.num_partitions();
  PoolModel pool;
  pool.setup = plan.setup;
  pool.transmission_s = pricing.offload_transmission_s();
  if (!plan.theta_f) {
    throw InvalidArgument(to_string(plan.setup) + " plan needs theta_f for serverless batches");
  }
  pool.theta_f = &pricing.at(*plan.theta_f);
  if (!pool.theta_f->is_serverless()) {
    throw KindError("plan theta_f '" + pool.theta_f->id + "' is not a serverless config");
  }
  pool.faas_time.resize(L);
  for (int pid = 1; pid <= L; ++pid) {
    pool.faas_time[pid - 1] = profile.request_runtime(pid, pool.theta_f->id);
  }
  if (plan.setup != Setup::kFaaSOnly) {
    pool.theta_i = &pricing.at(*plan.theta_i);
    if (!pool.theta_i->is_vm()) {
      throw KindError("plan theta_i '" + pool.theta_i->id + "' is not a VM config");
    }
    pool.head_last = plan.setup == Setup::kHybrid ? *plan.cut_id : L;
    if (pool.head_last < 1 || pool.head_last > L) {
      throw ProfileShapeError("plan cut_id " + std::to_string(pool.head_last) + " outside 1.." + std::to_string(L));
    }
    pool.vm_time.resize(pool.head_last);
    for (int pid = 1; pid <= pool.head_last; ++pid) {
      pool.vm_time[pid - 1] = profile.request_runtime(pid, pool.theta_i->id);
    }
    pool.vm_epoch = vm_epoch_cost(*pool.theta_i, epoch_seconds);
  }
  return pool;
}

std::int64_t pool_target(const PoolModel& pool, const MonitorState& state, double r_max, double t_cip) {
  if (pool.setup == Setup::kFaaSOnly) {
    return 0;
  }
  return scale_target(state, r_max, t_cip).target;
}

bool exceeds(double service, double limit) { return service > limit * (1.0 + 1e-12); }

}  // namespace

SimReport replay(const TrafficTrace& trace, const DeploymentPlan& plan, const StagedModelProfile& profile,
                 const ExitDistribution& dist, const PricingCatalog& pricing, const SimParams& params) {
  params.validate();
  check_same_shape(profile, dist);
  if (trace.epochs.empty()) {
    throw InvalidArgument("trace is empty");
  }
  if (!(trace.epoch_seconds > 0.0)) {
    throw InvalidArgument("epoch length must be positive");
  }
  for (auto value : trace.epochs) {
    if (value < 0) {
      throw InvalidArgument("trace has negative arrivals");
    }
  }
  const double r_max = params.r_max.value_or(plan.r_max);
  if (!(r_max >= 1.0) || r_max != std::floor(r_max)) {
    throw InvalidArgument("replay needs an integral r_max >= 1");
  }
  const double t_cip = params.t_cip.value_or(plan.t_cip);
  if (!(t_cip >= 0.0 && t_cip <= r_max)) {
    throw InvalidArgument("t_cip must lie in [0, r_max]");
  }
  const auto pool = build_pool(plan, profile, pricing, trace.epoch_seconds);
  const int L = profile.num_partitions();
  const auto batch_cap = static_cast<std::int64_t>(r_max);

  SimReport report;
  report.plan = plan;
  report.params = params;
  report.t_cip = t_cip;
  report.r_max = r_max;
  report.trace_source = trace.source;
  report.trace_hash = trace_hash(trace);
  report.epoch_seconds = trace.epoch_seconds;

  std::mt19937_64 rng(params.seed);
  auto state = make_monitor(params.w_mu, params.w_sigma, params.phi);
  auto& instances = report.instances;
  std::int64_t next_id = 0;
  std::int64_t current_target = 0;

  const auto epochs = static_cast<std::int64_t>(trace.epochs.size());
  const std::int64_t horizon = params.max_epochs ? std::min(*params.max_epochs, epochs) : epochs;

  if (params.warm_start) {
    state.mu = static_cast<double>(trace.epochs.front());
    current_target = pool_target(pool, state, r_max, t_cip);
    for (std::int64_t i = 0; i < current_target; ++i) {
      instances.push_back({next_id++, pool.theta_i->id, -1, 0, std::nullopt});
    }
  }

  for (std::int64_t t = 0; t < horizon; ++t) {
    const std::int64_t lambda = trace.epochs[static_cast<std::size_t>(t)];
    state = update(state, static_cast<double>(lambda));

    EpochRow row;
    row.epoch = t;
    row.lambda = lambda;
    row.mu = state.mu;
    row.sigma = state.sigma;
    for (const auto& vm : instances) {
      row.healthy += vm.state_at(t) == VmState::kHealthy ? 1 : 0;
      row.provisioned += vm.billed_at(t) ? 1 : 0;
    }
    row.routing = route_epoch(lambda, row.healthy, batch_cap, state.threshold(), t);

    for (auto batch : row.routing.vm_batches) {
      const auto survivors = batch_survivors(dist, batch, params.exit_mode, rng);
      double service = 0.0;
      for (int pid = 1; pid <= pool.head_last; ++pid) {
        service += survivors[pid - 1] * pool.vm_time[pid - 1];
      }
      if (pool.head_last < L && survivors[pool.head_last] > 0.0) {
        double tail = 0.0;
        for (int pid = pool.head_last + 1; pid <= L; ++pid) {
          tail += survivors[pid - 1] * pool.faas_time[pid - 1];
        }
        row.tail_faas_seconds += tail + pool.transmission_s * survivors[pool.head_last];
        service += pool.transmission_s + tail;
      }
      row.violations += exceeds(service, trace.epoch_seconds) ? 1 : 0;
    }
    for (auto batch : row.routing.faas_batches) {
      const auto survivors = batch_survivors(dist, batch, params.exit_mode, rng);
      double seconds = 0.0;
      for (int pid = 1; pid <= L; ++pid) {
        seconds += survivors[pid - 1] * pool.faas_time[pid - 1];
      }
      row.spill_faas_seconds += seconds;
      row.violations += exceeds(seconds, trace.epoch_seconds) ? 1 : 0;
    }
    row.vm_cost = static_cast<double>(row.provisioned) * pool.vm_epoch;
    row.faas_cost = pool.theta_f->unit_price * (row.tail_faas_seconds + row.spill_faas_seconds);

    if (t % params.scale_interval_epochs == 0) {
      const std::int64_t target = pool_target(pool, state, r_max, t_cip);
      std::int64_t alive = 0;
      for (const auto& vm : instances) {
        alive += vm.terminated_epoch ? 0 : 1;
      }
      ScaleEvent event{t, alive, target, t + 1};
      if (target > alive) {
        for (std::int64_t i = alive; i < target; ++i) {
          std::int64_t delay = params.cold_start_epochs;
          if (params.cold_start_jitter_epochs > 0) {
            delay += std::uniform_int_distribution<std::int64_t>(0, params.cold_start_jitter_epochs)(rng);
          }
          const std::int64_t ready = std::max(t + delay, t + 1);
          instances.push_back({next_id++, pool.theta_i->id, t, ready, std::nullopt});
          event.ready_epoch = std::max(event.ready_epoch, ready);
        }
      } else if (target < alive) {
        std::int64_t to_stop = alive - target;
        for (auto it = instances.rbegin(); it != instances.rend() && to_stop > 0; ++it) {
          if (!it->terminated_epoch) {
            it->terminated_epoch = t;
            --to_stop;
          }
        }
      }
      if (target != alive) {
        report.scale_events.push_back(event);
      }
      current_target = target;
    }
    row.target = current_target;

    auto& totals = report.totals;
    totals.vm_cost += row.vm_cost;
    totals.faas_cost += row.faas_cost;
    totals.violations += row.violations;
    totals.arrivals += lambda;
    totals.vm_requests += row.routing.vm_requests();
    totals.faas_requests += row.routing.faas_requests();
    totals.spill_faas_seconds += row.spill_faas_seconds;
    totals.tail_faas_seconds += row.tail_faas_seconds;
    report.rows.push_back(std::move(row));
  }
  report.totals.total = report.totals.vm_cost + report.totals.faas_cost;
  return report;
}

PoolComparison compare_pools(const TrafficTrace& trace, const std::vector<DeploymentPlan>& plans,
                             const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PricingCatalog& pricing, const SimParams& params) {
  if (plans.size() < 2) {
    throw InvalidArgument("pool comparison needs at least two plans");
  }
  std::vector<std::future<SimReport>> jobs;
  jobs.reserve(plans.size());
  for (const auto& plan : plans) {
    jobs.push_back(std::async(std::launch::async, [&, plan] {
      return replay(trace, plan, profile, dist, pricing, params);
    }));
  }
  PoolComparison out;
  for (auto& job : jobs) {
    out.reports.push_back(job.get());
  }
  for (const auto& report : out.reports) {
    out.ranked.push_back({report.plan, report.totals});
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const PoolResult& a, const PoolResult& b) { return a.totals.total < b.totals.total; });
  const auto count = out.ranked.size();
  out.percent.assign(count, std::vector<double>(count, 0.0));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      const double base = out.ranked[j].totals.total;
      const double diff = out.ranked[i].totals.total - base;
      out.percent[i][j] = diff == 0.0 ? 0.0 : 100.0 * diff / base;
    }
  }
  return out;
}

}  // namespace hybridcost
