#include "hybridcost/costmodel.hpp"

#include <algorithm>
#include <cmath>

#include "hybridcost/error.hpp"

namespace hybridcost {

std::string to_string(Setup setup) {
  switch (setup) {
    case Setup::kIaaSOnly:
      return "IaaSOnly";
    case Setup::kFaaSOnly:
      return "FaaSOnly";
    case Setup::kHybrid:
      return "Hybrid";
  }
  return "unknown";
}

Setup setup_from_string(const std::string& text) {
  if (text == "IaaSOnly" || text == "iaas") return Setup::kIaaSOnly;
  if (text == "FaaSOnly" || text == "faas") return Setup::kFaaSOnly;
  if (text == "Hybrid" || text == "hybrid") return Setup::kHybrid;
  throw InvalidArgument("unknown setup '" + text + "'");
}

VmSizing size_vms(double n, double r_max, double t_cip) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("request count must be finite and >= 0");
  }
  if (!(r_max > 0.0)) {
    throw InvalidArgument("r_max must be positive");
  }
  if (!(t_cip >= 0.0 && t_cip <= r_max)) {
    throw InvalidArgument("t_cip must lie in [0, r_max]");
  }
  VmSizing sizing;
  const double base = std::floor(n / r_max);
  sizing.base = static_cast<std::int64_t>(base);
  sizing.residual = std::max(0.0, n - base * r_max);
  const bool extra = sizing.residual > t_cip;
  sizing.count = sizing.base + (extra ? 1 : 0);
  sizing.spill = extra ? 0.0 : sizing.residual;
  return sizing;
}

double faas_seconds(const StagedModelProfile& profile, const ExitDistribution& dist, const ConfigId& theta_f,
                    double n, int first_pid) {
  check_same_shape(profile, dist);
  const auto rates = propagate_rates(dist, n);
  double seconds = 0.0;
  for (int pid = first_pid; pid <= profile.num_partitions(); ++pid) {
    seconds += rates[pid - 1] * profile.request_runtime(pid, theta_f);
  }
  return seconds;
}

namespace {

void require_serverless(const PlatformConfig& config) {
  if (!config.is_serverless()) {
    throw KindError("config '" + config.id + "' is not a serverless config");
  }
}

void require_vm(const PlatformConfig& config) {
  if (!config.is_vm()) {
    throw KindError("config '" + config.id + "' is not a VM config");
  }
}

}  // namespace

CostBreakdown cost_faas_only(double n, const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PlatformConfig& theta_f) {
  require_serverless(theta_f);
  CostBreakdown out;
  out.setup = Setup::kFaaSOnly;
  out.faas_cost = theta_f.unit_price * faas_seconds(profile, dist, theta_f.id, n);
  out.total = out.vm_cost + out.faas_cost;
  return out;
}

CostBreakdown cost_iaas_only(double n, double r_max, const PlatformConfig& theta_i, double slo, double t_cip) {
  require_vm(theta_i);
  const auto sizing = size_vms(n, r_max, t_cip);
  CostBreakdown out;
  out.setup = Setup::kIaaSOnly;
  out.vm_count = sizing.count;
  out.vm_cost = static_cast<double>(sizing.count) * vm_epoch_cost(theta_i, slo);
  out.spill_requests = sizing.spill;
  out.total = out.vm_cost + out.faas_cost;
  return out;
}

CostBreakdown cost_iaas_only(double n, double r_max, const PlatformConfig& theta_i, double slo, double t_cip,
                             const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PlatformConfig& theta_f, const CostOptions& options) {
  require_serverless(theta_f);
  auto out = cost_iaas_only(n, r_max, theta_i, slo, t_cip);
  if (options.spill == SpillBilling::kExplicit) {
    out.faas_cost = theta_f.unit_price * faas_seconds(profile, dist, theta_f.id, out.spill_requests);
  }
  out.total = out.vm_cost + out.faas_cost;
  return out;
}

CostBreakdown cost_hybrid(double n, double r_max, const PlatformConfig& theta_i, const PlatformConfig& theta_f,
                          int cut_id, const StagedModelProfile& profile, const ExitDistribution& dist, double slo,
                          double t_cip, const CostOptions& options) {
  require_vm(theta_i);
  require_serverless(theta_f);
  check_same_shape(profile, dist);
  const int L = profile.num_partitions();
  if (cut_id < 1 || cut_id > L) {
    throw InvalidArgument("cut_id " + std::to_string(cut_id) + " outside 1.." + std::to_string(L));
  }
  const auto sizing = size_vms(n, r_max, t_cip);

  CostBreakdown out;
  out.setup = Setup::kHybrid;
  out.cut_id = cut_id;
  out.vm_count = sizing.count;
  out.vm_cost = static_cast<double>(sizing.count) * vm_epoch_cost(theta_i, slo);
  out.spill_requests = sizing.spill;

  const bool strict = options.spill == SpillBilling::kStrict;
  const double vm_served = strict ? n : n - sizing.spill;
  double tail = faas_seconds(profile, dist, theta_f.id, vm_served, cut_id + 1);
  if (cut_id < L) {
    tail += options.transmission_s * (vm_served * dist.survival(cut_id + 1));
  }
  const double spill = strict ? 0.0 : faas_seconds(profile, dist, theta_f.id, sizing.spill);
  out.faas_cost = theta_f.unit_price * (tail + spill);
  out.total = out.vm_cost + out.faas_cost;
  return out;
}

namespace {

const PlatformConfig& required(const PricingCatalog& pricing, const std::optional<ConfigId>& id,
                               const char* what, Setup setup) {
  if (!id) {
    throw InvalidArgument(to_string(setup) + " setup needs " + what);
  }
  return pricing.at(*id);
}

}  // namespace

CostBreakdown evaluate_setup(const SetupSpec& spec, double n, double r_max, double slo, double t_cip,
                             const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PricingCatalog& pricing, const CostOptions& options) {
  switch (spec.setup) {
    case Setup::kFaaSOnly:
      return cost_faas_only(n, profile, dist, required(pricing, spec.theta_f, "theta_f", spec.setup));
    case Setup::kIaaSOnly: {
      const auto& theta_i = required(pricing, spec.theta_i, "theta_i", spec.setup);
      if (!spec.theta_f) {
        return cost_iaas_only(n, r_max, theta_i, slo, t_cip);
      }
      return cost_iaas_only(n, r_max, theta_i, slo, t_cip, profile, dist, pricing.at(*spec.theta_f), options);
    }
    case Setup::kHybrid: {
      if (!spec.cut_id) {
        throw InvalidArgument("Hybrid setup needs cut_id");
      }
      return cost_hybrid(n, r_max, required(pricing, spec.theta_i, "theta_i", spec.setup),
                         required(pricing, spec.theta_f, "theta_f", spec.setup), *spec.cut_id, profile, dist, slo,
                         t_cip, options);
    }
  }
  throw InvalidArgument("unknown setup");
}

ResidualCostLines residual_cost_lines(const SetupSpec& spec, const StagedModelProfile& profile,
                                      const ExitDistribution& dist, const PricingCatalog& pricing, double slo,
                                      const CostOptions& options) {
  if (spec.setup == Setup::kFaaSOnly) {
    throw InvalidArgument("FaaS-only setups have no dedicated instances");
  }
  const auto& theta_i = required(pricing, spec.theta_i, "theta_i", spec.setup);
  const auto& theta_f = required(pricing, spec.theta_f, "theta_f", spec.setup);
  require_serverless(theta_f);

  ResidualCostLines lines;
  lines.instance_fixed = vm_epoch_cost(theta_i, slo);
  lines.faas_per_request = theta_f.unit_price * faas_seconds(profile, dist, theta_f.id, 1.0);
  if (spec.setup == Setup::kHybrid) {
    if (!spec.cut_id) {
      throw InvalidArgument("Hybrid setup needs cut_id");
    }
    const int cut = *spec.cut_id;
    double tail = faas_seconds(profile, dist, theta_f.id, 1.0, cut + 1);
    if (cut < profile.num_partitions()) {
      tail += options.transmission_s * dist.survival(cut + 1);
    }
    lines.instance_per_request = theta_f.unit_price * tail;
  }
  return lines;
}

}  // namespace hybridcost
