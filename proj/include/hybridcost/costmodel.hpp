#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hybridcost/pricing.hpp"
#include "hybridcost/profile.hpp"

namespace hybridcost {

enum class Setup { kIaaSOnly, kFaaSOnly, kHybrid };

std::string to_string(Setup setup);
Setup setup_from_string(const std::string& text);

// How residual traffic that does not earn an extra VM is charged.
enum class SpillBilling {
  // The residual runs the whole model on serverless and its cost is part of
  // the breakdown.
  kExplicit,
  // Literal closed forms: IaaS-only charges VMs only; hybrid charges the
  // offloaded tail of all n requests.
  kStrict,
};

struct CostOptions {
  SpillBilling spill = SpillBilling::kExplicit;
  // Per-offload transmission seconds, billed per offloaded request.
  double transmission_s = 0.0;
};

/// Which pools serve which partitions. IaaS-only keeps theta_f for the
/// serverless spill path.
struct SetupSpec {
  Setup setup = Setup::kFaaSOnly;
  std::optional<ConfigId> theta_i;
  std::optional<ConfigId> theta_f;
  std::optional<int> cut_id;
};

/// Per-epoch cost of one setup; every amount is currency per epoch.
struct CostBreakdown {
  Setup setup = Setup::kFaaSOnly;
  double vm_cost = 0.0;
  double faas_cost = 0.0;
  double total = 0.0;
  std::int64_t vm_count = 0;
  std::optional<int> cut_id;
  // Residual requests sent to serverless instead of an extra VM.
  double spill_requests = 0.0;
};

struct VmSizing {
  std::int64_t base = 0;     // floor(n / r_max)
  double residual = 0.0;     // n - base * r_max
  std::int64_t count = 0;    // base + 1[residual > t_cip]
  double spill = 0.0;        // residual when no extra VM is added, else 0
};

VmSizing size_vms(double n, double r_max, double t_cip);

// Serverless execution-seconds for n arrivals over partitions first_pid..L,
// using per-request stage times on theta_f.
double faas_seconds(const StagedModelProfile& profile, const ExitDistribution& dist, const ConfigId& theta_f,
                    double n, int first_pid = 1);

CostBreakdown cost_faas_only(double n, const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PlatformConfig& theta_f);

// VM term only; the residual is reported in spill_requests but not charged.
CostBreakdown cost_iaas_only(double n, double r_max, const PlatformConfig& theta_i, double slo, double t_cip);

// VM term plus the residual charged as full-model serverless runs on theta_f.
CostBreakdown cost_iaas_only(double n, double r_max, const PlatformConfig& theta_i, double slo, double t_cip,
                             const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PlatformConfig& theta_f, const CostOptions& options = {});

CostBreakdown cost_hybrid(double n, double r_max, const PlatformConfig& theta_i, const PlatformConfig& theta_f,
                          int cut_id, const StagedModelProfile& profile, const ExitDistribution& dist, double slo,
                          double t_cip, const CostOptions& options = {});

// Dispatches on spec.setup.
CostBreakdown evaluate_setup(const SetupSpec& spec, double n, double r_max, double slo, double t_cip,
                             const StagedModelProfile& profile, const ExitDistribution& dist,
                             const PricingCatalog& pricing, const CostOptions& options = {});

/// Cost of a residual load rho as two lines: a dedicated instance costs
/// instance_fixed + instance_per_request * rho, serverless costs
/// faas_per_request * rho.
struct ResidualCostLines {
  double instance_fixed = 0.0;
  double instance_per_request = 0.0;
  double faas_per_request = 0.0;

  double instance_cost(double rho) const { return instance_fixed + instance_per_request * rho; }
  double faas_cost(double rho) const { return faas_per_request * rho; }
};

ResidualCostLines residual_cost_lines(const SetupSpec& spec, const StagedModelProfile& profile,
                                      const ExitDistribution& dist, const PricingCatalog& pricing, double slo,
                                      const CostOptions& options = {});

}  // namespace hybridcost
