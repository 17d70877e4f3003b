#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hybridcost/profile.hpp"

namespace hybridcost {

enum class PlatformKind { kVm, kServerless };

// Serverless memory sizes that are whole multiples of this grant dedicated
// vCPUs on the modeled provider.
inline constexpr int kFullVcpuMemoryStepMb = 1769;

struct PlatformConfig {
  ConfigId id;
  PlatformKind kind = PlatformKind::kVm;
  // VM: price per instance-second. Serverless: price per execution-second at
  // this memory size.
  double unit_price = 0.0;
  int memory_mb = 0;
  double vcpus = 0.0;
  // Requests per epoch one instance serves within the SLO.
  double r_max = 0.0;

  bool is_vm() const { return kind == PlatformKind::kVm; }
  bool is_serverless() const { return kind == PlatformKind::kServerless; }
};

// Unit price for a serverless config billed per GB-second.
double serverless_unit_price(int memory_mb, double price_per_gb_second);

class PricingCatalog {
 public:
  PricingCatalog(std::vector<PlatformConfig> configs, std::string currency = "USD",
                 double offload_transmission_s = 0.0);

  const std::vector<PlatformConfig>& configs() const { return configs_; }
  const std::string& currency() const { return currency_; }
  // Per-offload transmission overhead (seconds) for hybrid tails. Added to the
  // service path and billed per offloaded request at the serverless price.
  double offload_transmission_s() const { return offload_transmission_s_; }

  const PlatformConfig& at(const ConfigId& id) const;
  const PlatformConfig* find(const ConfigId& id) const;
  std::vector<PlatformConfig> of_kind(PlatformKind kind) const;
  bool empty() const { return configs_.empty(); }

  // Non-fatal findings, e.g. serverless memory not on a full-vCPU step.
  std::vector<std::string> warnings() const;

 private:
  std::vector<PlatformConfig> configs_;
  std::string currency_;
  double offload_transmission_s_;
};

double serverless_exec_cost(const PlatformConfig& config, double duration_seconds);

// Cost of keeping one VM for a whole epoch (epoch length = SLO).
double vm_epoch_cost(const PlatformConfig& config, double slo_seconds);

std::string to_string(PlatformKind kind);
PlatformKind platform_kind_from_string(const std::string& text);

}  // namespace hybridcost
