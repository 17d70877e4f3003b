#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybridcost/costmodel.hpp"
#include "hybridcost/pricing.hpp"
#include "hybridcost/profile.hpp"

namespace hybridcost {

/// Output of plan selection, consumed by the replay engine.
struct DeploymentPlan {
  Setup setup = Setup::kFaaSOnly;
  std::optional<ConfigId> theta_i;
  std::optional<ConfigId> theta_f;
  std::optional<int> cut_id;
  // Residual threshold in requests per epoch. Equal to r_max means the extra
  // instance is never added.
  double t_cip = 0.0;
  double r_max = 100.0;

  SetupSpec spec() const { return {setup, theta_i, theta_f, cut_id}; }
  // "{IaaS,FaaS}", "{Hybrid,FaaS}" or "{FaaS}".
  std::string pool() const;
  // Throws InvalidArgument when the plan breaks its shape rules.
  void validate() const;
};

struct FeasibilityRow {
  SetupSpec spec;
  // Batch time when r_max requests traverse every partition on the assigned
  // configs, including the offload overhead for hybrid tails.
  double worst_case_seconds = 0.0;
  bool feasible = false;
};

struct CutRange {
  int first = 1;
  int last = 0;  // 0 means L - 1
};

// Every (setup, theta_i, theta_f, cut) tuple the catalog can form, with its
// worst-case path time. Configs lacking a runtime for a needed partition are
// left out.
std::vector<FeasibilityRow> evaluate_feasibility(const StagedModelProfile& profile, const PricingCatalog& candidates,
                                                 double r_max, double slo, CutRange cut_range = {});

// Feasible subset of evaluate_feasibility; an empty result means no
// configuration meets the SLO. Throws InvalidArgument on an empty catalog.
std::vector<FeasibilityRow> slo_feasible(const StagedModelProfile& profile, const PricingCatalog& candidates,
                                         double r_max, double slo, CutRange cut_range = {});

// Residual load at which one dedicated instance and serverless spill cost the
// same, or nullopt when the lines do not cross inside [0, r_max).
std::optional<double> find_t_cip(const SetupSpec& spec, const StagedModelProfile& profile,
                                 const ExitDistribution& dist, const PricingCatalog& pricing, double r_max,
                                 double slo, const CostOptions& options = {});

// find_t_cip with the no-crossing defaults applied: r_max when serverless is
// cheaper across the whole range, 0 when the instance is.
double resolve_t_cip(const SetupSpec& spec, const StagedModelProfile& profile, const ExitDistribution& dist,
                     const PricingCatalog& pricing, double r_max, double slo, const CostOptions& options = {});

struct PlanChoice {
  DeploymentPlan plan;
  // Cheapest feasible plan of each setup, as compared by the selection.
  std::optional<DeploymentPlan> iaas_plan;
  std::optional<DeploymentPlan> faas_plan;
  std::optional<DeploymentPlan> hybrid_plan;
  std::optional<CostBreakdown> iaas;
  std::optional<CostBreakdown> faas;
  std::optional<CostBreakdown> hybrid;
  CostBreakdown chosen;
};

PlanChoice select_plan(const StagedModelProfile& profile, const ExitDistribution& dist,
                       const std::vector<FeasibilityRow>& feasible, const PricingCatalog& pricing, double n,
                       double r_max, double slo, const CostOptions& options = {});

enum class SweepAxis { kConfThres, kCutId, kIngestion };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& text);

struct SweepContext {
  const StagedModelProfile* profile = nullptr;
  const PricingCatalog* pricing = nullptr;
  // Used on the conf_thres axis, looked up by conf_thres.
  std::vector<ExitDistribution> family;
  // Used on the cut_id and ingestion axes.
  std::optional<ExitDistribution> dist;
  SetupSpec iaas{Setup::kIaaSOnly, std::nullopt, std::nullopt, std::nullopt};
  SetupSpec faas{Setup::kFaaSOnly, std::nullopt, std::nullopt, std::nullopt};
  SetupSpec hybrid{Setup::kHybrid, std::nullopt, std::nullopt, std::nullopt};
  double n = 100.0;
  double r_max = 100.0;
  double slo = 6.0;
  // Fixed thresholds; when unset they are resolved per point.
  std::optional<double> t_cip_iaas;
  std::optional<double> t_cip_hybrid;
  CostOptions options;
  // Setup pairs (a, b) whose difference cost_a - cost_b is scanned for sign
  // changes.
  std::vector<std::pair<Setup, Setup>> pairs{{Setup::kHybrid, Setup::kIaaSOnly},
                                             {Setup::kHybrid, Setup::kFaaSOnly}};
};

struct SweepPoint {
  double x = 0.0;
  CostBreakdown iaas;
  CostBreakdown faas;
  CostBreakdown hybrid;

  const CostBreakdown& of(Setup setup) const;
};

struct Crossing {
  Setup a = Setup::kHybrid;
  Setup b = Setup::kIaaSOnly;
  double x = 0.0;
  // Sign of cost_a - cost_b just above x.
  int sign_after = 0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kConfThres;
  std::vector<SweepPoint> points;
  std::vector<Crossing> crossings;
};

inline constexpr double kCrossingTolerance = 1e-6;

SweepResult sweep(SweepAxis axis, const std::vector<double>& grid, const SweepContext& context);

// Sign changes of ys over xs, refined by linear interpolation between the
// neighbours that bracket each change. ys[i] counts as zero when
// |ys[i]| <= zero_band[i]. Returns (x, sign after x) pairs.
std::vector<std::pair<double, int>> locate_sign_changes(const std::vector<double>& xs,
                                                        const std::vector<double>& ys,
                                                        const std::vector<double>& zero_band);

}  // namespace hybridcost
