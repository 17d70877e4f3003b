#include "hybridcost/pricing.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "hybridcost/error.hpp"

namespace hybridcost {

double serverless_unit_price(int memory_mb, double price_per_gb_second) {
  return (static_cast<double>(memory_mb) / 1024.0) * price_per_gb_second;
}

PricingCatalog::PricingCatalog(std::vector<PlatformConfig> configs, std::string currency,
                               double offload_transmission_s)
    : configs_(std::move(configs)), currency_(std::move(currency)), offload_transmission_s_(offload_transmission_s) {
  std::set<ConfigId> seen;
  for (const auto& config : configs_) {
    if (config.id.empty()) {
      throw InvalidArgument("pricing config with empty id");
    }
    if (!seen.insert(config.id).second) {
      throw InvalidArgument("duplicate pricing config id '" + config.id + "'");
    }
    if (!(config.unit_price > 0.0) || !std::isfinite(config.unit_price)) {
      throw InvalidArgument("config '" + config.id + "': unit price must be positive");
    }
    if (!(config.r_max > 0.0)) {
      throw InvalidArgument("config '" + config.id + "': r_max must be positive");
    }
  }
  if (!(offload_transmission_s_ >= 0.0) || !std::isfinite(offload_transmission_s_)) {
    throw InvalidArgument("offload transmission time must be finite and >= 0");
  }
}

const PlatformConfig* PricingCatalog::find(const ConfigId& id) const {
  for (const auto& config : configs_) {
    if (config.id == id) {
      return &config;
    }
  }
  return nullptr;
}

const PlatformConfig& PricingCatalog::at(const ConfigId& id) const {
  if (const auto* config = find(id)) {
    return *config;
  }
  throw InvalidArgument("unknown platform config '" + id + "'");
}

std::vector<PlatformConfig> PricingCatalog::of_kind(PlatformKind kind) const {
  std::vector<PlatformConfig> out;
  for (const auto& config : configs_) {
    if (config.kind == kind) {
      out.push_back(config);
    }
  }
  return out;
}

std::vector<std::string> PricingCatalog::warnings() const {
  std::vector<std::string> out;
  for (const auto& config : configs_) {
    if (config.is_serverless() && config.memory_mb % kFullVcpuMemoryStepMb != 0) {
      out.push_back("serverless config '" + config.id + "' uses " + std::to_string(config.memory_mb) +
                    " MB, not a multiple of " + std::to_string(kFullVcpuMemoryStepMb) +
                    " MB; vCPUs may be shared");
    }
  }
  return out;
}

double serverless_exec_cost(const PlatformConfig& config, double duration_seconds) {
  if (!config.is_serverless()) {
    throw KindError("config '" + config.id + "' is not a serverless config");
  }
  if (!(duration_seconds >= 0.0)) {
    throw InvalidArgument("duration must be non-negative");
  }
  return duration_seconds * config.unit_price;
}

double vm_epoch_cost(const PlatformConfig& config, double slo_seconds) {
  if (!config.is_vm()) {
    throw KindError("config '" + config.id + "' is not a VM config");
  }
  if (!(slo_seconds >= 0.0)) {
    throw InvalidArgument("slo must be non-negative");
  }
  return config.unit_price * slo_seconds;
}

std::string to_string(PlatformKind kind) { return kind == PlatformKind::kVm ? "vm" : "serverless"; }

PlatformKind platform_kind_from_string(const std::string& text) {
  if (text == "vm" || text == "VM" || text == "iaas") {
    return PlatformKind::kVm;
  }
  if (text == "serverless" || text == "Serverless" || text == "faas") {
    return PlatformKind::kServerless;
  }
  throw InvalidArgument("unknown platform kind '" + text + "'");
}

}  // namespace hybridcost
