#pragma once

// Fixtures and independent reference formulas shared by the unit and
// acceptance tests. Oracles recompute costs from raw fractions with plain
// loops and never call the library's cost code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "hybridcost/costmodel.hpp"
#include "hybridcost/pricing.hpp"
#include "hybridcost/profile.hpp"

namespace hybridcost::testing {

// Seconds per 100-request batch.
inline const std::vector<double> kLargeBatch{1.0, 0.9, 0.8, 0.7, 0.6, 3.0, 3.3};
inline const std::vector<double> kXlargeBatch{0.5, 0.45, 0.4, 0.35, 0.3, 1.7, 1.8};
inline const std::vector<double> kFaasBatch{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0};

inline const std::vector<double> kShallow{0.55, 0.25, 0.08, 0.05, 0.04, 0.02, 0.01};
inline const std::vector<double> kMiddle{0.05, 0.10, 0.25, 0.30, 0.20, 0.07, 0.03};
inline const std::vector<double> kDeep{0.01, 0.02, 0.02, 0.05, 0.10, 0.30, 0.50};

inline constexpr double kFaasPerGbSecond = 0.0000166667;

inline StagedModelProfile vgg_profile() {
  std::vector<PartitionProfile> parts;
  for (int i = 0; i < 7; ++i) {
    parts.push_back({i + 1,
                     {{"c6i.large", kLargeBatch[i]}, {"c6i.xlarge", kXlargeBatch[i]}, {"faas-8845", kFaasBatch[i]}},
                     true});
  }
  return StagedModelProfile("vgg16-ic", 6.0, parts, 100);
}

inline PricingCatalog vgg_pricing(double transmission_s = 0.0) {
  return PricingCatalog({{"c6i.large", PlatformKind::kVm, 0.085 / 3600.0, 4096, 2, 100},
                         {"c6i.xlarge", PlatformKind::kVm, 0.17 / 3600.0, 8192, 4, 100},
                         {"faas-8845", PlatformKind::kServerless, serverless_unit_price(8845, kFaasPerGbSecond),
                          8845, 0, 100}},
                        "USD", transmission_s);
}

// One VM config "vm" and one serverless config "fn"; times are per request
// (batch size 1).
inline StagedModelProfile unit_profile(const std::vector<double>& vm_times, const std::vector<double>& fn_times,
                                       double slo = 6.0) {
  std::vector<PartitionProfile> parts;
  for (std::size_t i = 0; i < fn_times.size(); ++i) {
    PartitionProfile part{static_cast<int>(i) + 1, {{"fn", fn_times[i]}}, true};
    if (i < vm_times.size()) part.runtimes["vm"] = vm_times[i];
    parts.push_back(part);
  }
  return StagedModelProfile("unit", slo, parts, 1);
}

inline PricingCatalog unit_pricing(double vm_per_s, double fn_per_s, double r_max = 100.0,
                                   double transmission_s = 0.0) {
  return PricingCatalog({{"vm", PlatformKind::kVm, vm_per_s, 2048, 2, r_max},
                         {"fn", PlatformKind::kServerless, fn_per_s, 1769, 1, r_max}},
                        "USD", transmission_s);
}

// Random point on the simplex with `parts` entries; sums to 1 within 1e-15.
inline std::vector<double> random_fractions(std::mt19937_64& rng, int parts) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> f(parts);
  double total = 0.0;
  for (auto& x : f) total += (x = draw(rng));
  for (auto& x : f) x /= total;
  double head = 0.0;
  for (int i = 0; i + 1 < parts; ++i) head += f[i];
  f.back() = std::max(0.0, 1.0 - head);
  return f;
}

// --- Oracles -------------------------------------------------------------

// Share of arrivals reaching partition k (1-based) from raw fractions.
inline double oracle_reach(const std::vector<double>& f, int k) {
  double exited = 0.0;
  for (int i = 1; i < k; ++i) exited += f[i - 1];
  return std::max(0.0, 1.0 - exited);
}

// Serverless seconds for n arrivals over partitions first..L with per-request
// times t.
inline double oracle_faas_seconds(double n, const std::vector<double>& f, const std::vector<double>& t,
                                  int first = 1) {
  double seconds = 0.0;
  for (int k = first; k <= static_cast<int>(f.size()); ++k) seconds += n * oracle_reach(f, k) * t[k - 1];
  return seconds;
}

struct OracleCost {
  double vm = 0.0;
  double faas = 0.0;
  std::int64_t vms = 0;
  double total() const { return vm + faas; }
};

inline OracleCost oracle_vm_term(double n, double r_max, double vm_epoch, double t_cip) {
  OracleCost out;
  const double base = std::floor(n / r_max);
  const double residual = n - base * r_max;
  out.vms = static_cast<std::int64_t>(base) + (residual > t_cip ? 1 : 0);
  out.vm = static_cast<double>(out.vms) * vm_epoch;
  return out;
}

inline double oracle_spill(double n, double r_max, double t_cip) {
  const double residual = n - std::floor(n / r_max) * r_max;
  return residual > t_cip ? 0.0 : residual;
}

// Explicit spill billing: the residual that does not earn a VM runs the whole
// model on serverless.
inline OracleCost oracle_iaas(double n, double r_max, double vm_epoch, double t_cip, const std::vector<double>& f,
                              const std::vector<double>& fn_t, double fn_price) {
  auto out = oracle_vm_term(n, r_max, vm_epoch, t_cip);
  out.faas = fn_price * oracle_faas_seconds(oracle_spill(n, r_max, t_cip), f, fn_t);
  return out;
}

inline OracleCost oracle_faas(double n, const std::vector<double>& f, const std::vector<double>& fn_t,
                              double fn_price) {
  OracleCost out;
  out.faas = fn_price * oracle_faas_seconds(n, f, fn_t);
  return out;
}

inline OracleCost oracle_hybrid(double n, double r_max, double vm_epoch, double t_cip, int cut,
                                const std::vector<double>& f, const std::vector<double>& fn_t, double fn_price,
                                double transmission_s = 0.0) {
  auto out = oracle_vm_term(n, r_max, vm_epoch, t_cip);
  const double spill = oracle_spill(n, r_max, t_cip);
  const double served = n - spill;
  const int L = static_cast<int>(f.size());
  double seconds = oracle_faas_seconds(served, f, fn_t, cut + 1) + oracle_faas_seconds(spill, f, fn_t);
  if (cut < L) seconds += transmission_s * served * oracle_reach(f, cut + 1);
  out.faas = fn_price * seconds;
  return out;
}

inline std::vector<double> per_request(const std::vector<double>& batch_times, double batch_size) {
  std::vector<double> out;
  for (double t : batch_times) out.push_back(t / batch_size);
  return out;
}

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return got == want ? 0.0 : std::abs(got - want) / scale;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("hybridcost_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace hybridcost::testing
