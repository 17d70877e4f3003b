#include "hybridcost/configurator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hybridcost/error.hpp"

namespace hybridcost {

std::string DeploymentPlan::pool() const {
  switch (setup) {
    case Setup::kIaaSOnly:
      return "{IaaS,FaaS}";
    case Setup::kHybrid:
      return "{Hybrid,FaaS}";
    case Setup::kFaaSOnly:
      return "{FaaS}";
  }
  return "{}";
}

void DeploymentPlan::validate() const {
  if (!(r_max > 0.0)) {
    throw InvalidArgument("plan r_max must be positive");
  }
  if (!(t_cip >= 0.0 && t_cip <= r_max)) {
    throw InvalidArgument("plan t_cip must lie in [0, r_max]");
  }
  switch (setup) {
    case Setup::kHybrid:
      if (!theta_i || !theta_f || !cut_id) {
        throw InvalidArgument("Hybrid plan needs theta_i, theta_f and cut_id");
      }
      break;
    case Setup::kFaaSOnly:
      if (theta_i || cut_id || !theta_f) {
        throw InvalidArgument("FaaSOnly plan needs theta_f and no theta_i or cut_id");
      }
      break;
    case Setup::kIaaSOnly:
      if (!theta_i || cut_id) {
        throw InvalidArgument("IaaSOnly plan needs theta_i and no cut_id");
      }
      break;
  }
}

namespace {

bool covers(const StagedModelProfile& profile, const ConfigId& id, int first, int last) {
  for (int pid = first; pid <= last; ++pid) {
    if (!profile.has_runtime(pid, id)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<FeasibilityRow> evaluate_feasibility(const StagedModelProfile& profile, const PricingCatalog& candidates,
                                                 double r_max, double slo, CutRange cut_range) {
  if (candidates.empty()) {
    throw InvalidArgument("candidate catalog is empty");
  }
  if (!(r_max > 0.0)) {
    throw InvalidArgument("r_max must be positive");
  }
  const int L = profile.num_partitions();
  const int first_cut = std::max(1, cut_range.first);
  const int last_cut = cut_range.last > 0 ? std::min(cut_range.last, L) : L - 1;
  // Runtimes are profiled per batch_size requests; worst case scales to r_max.
  const double scale = r_max / profile.batch_size();
  const double overhead = candidates.offload_transmission_s();

  const auto vms = candidates.of_kind(PlatformKind::kVm);
  const auto functions = candidates.of_kind(PlatformKind::kServerless);

  std::vector<FeasibilityRow> rows;
  auto add = [&](SetupSpec spec, double seconds) {
    rows.push_back({std::move(spec), seconds, seconds <= slo});
  };

  for (const auto& vm : vms) {
    if (covers(profile, vm.id, 1, L)) {
      add({Setup::kIaaSOnly, vm.id, std::nullopt, std::nullopt}, profile.batch_runtime_range(1, L, vm.id) * scale);
    }
  }
  for (const auto& fn : functions) {
    if (covers(profile, fn.id, 1, L)) {
      add({Setup::kFaaSOnly, std::nullopt, fn.id, std::nullopt}, profile.batch_runtime_range(1, L, fn.id) * scale);
    }
  }
  for (const auto& vm : vms) {
    for (const auto& fn : functions) {
      for (int cut = first_cut; cut <= last_cut; ++cut) {
        if (!covers(profile, vm.id, 1, cut) || !covers(profile, fn.id, cut + 1, L)) {
          continue;
        }
        double seconds = profile.batch_runtime_range(1, cut, vm.id) * scale;
        if (cut < L) {
          seconds += overhead + profile.batch_runtime_range(cut + 1, L, fn.id) * scale;
        }
        add({Setup::kHybrid, vm.id, fn.id, cut}, seconds);
      }
    }
  }
  return rows;
}

std::vector<FeasibilityRow> slo_feasible(const StagedModelProfile& profile, const PricingCatalog& candidates,
                                         double r_max, double slo, CutRange cut_range) {
  std::vector<FeasibilityRow> out;
  for (auto& row : evaluate_feasibility(profile, candidates, r_max, slo, cut_range)) {
    if (row.feasible) {
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::optional<double> find_t_cip(const SetupSpec& spec, const StagedModelProfile& profile,
                                 const ExitDistribution& dist, const PricingCatalog& pricing, double r_max,
                                 double slo, const CostOptions& options) {
  const auto lines = residual_cost_lines(spec, profile, dist, pricing, slo, options);
  const double slope = lines.faas_per_request - lines.instance_per_request;
  if (!(slope > 0.0)) {
    return std::nullopt;
  }
  const double rho = lines.instance_fixed / slope;
  if (rho < 0.0 || rho >= r_max) {
    return std::nullopt;
  }
  return rho;
}

double resolve_t_cip(const SetupSpec& spec, const StagedModelProfile& profile, const ExitDistribution& dist,
                     const PricingCatalog& pricing, double r_max, double slo, const CostOptions& options) {
  if (spec.setup == Setup::kFaaSOnly) {
    return r_max;
  }
  if (auto rho = find_t_cip(spec, profile, dist, pricing, r_max, slo, options)) {
    return *rho;
  }
  const auto lines = residual_cost_lines(spec, profile, dist, pricing, slo, options);
  // With a positive fixed instance cost serverless wins at rho = 0, so the
  // no-crossing case means serverless wins everywhere.
  return lines.instance_fixed > 0.0 ? r_max : 0.0;
}

PlanChoice select_plan(const StagedModelProfile& profile, const ExitDistribution& dist,
                       const std::vector<FeasibilityRow>& feasible, const PricingCatalog& pricing, double n,
                       double r_max, double slo, const CostOptions& options) {
  check_same_shape(profile, dist);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Base serverless config: cheapest feasible FaaS-only tuple.
  std::optional<FeasibilityRow> base_f;
  std::optional<CostBreakdown> cost_f;
  for (const auto& row : feasible) {
    if (row.spec.setup != Setup::kFaaSOnly || !row.feasible) continue;
    auto cost = evaluate_setup(row.spec, n, r_max, slo, r_max, profile, dist, pricing, options);
    if (!cost_f || cost.total < cost_f->total) {
      cost_f = cost;
      base_f = row;
    }
  }
  std::optional<ConfigId> theta_f0;
  if (base_f) {
    theta_f0 = base_f->spec.theta_f;
  }

  // Base IaaS config: cheapest feasible IaaS-only tuple, spilling to theta_f0.
  std::optional<DeploymentPlan> plan_i;
  std::optional<CostBreakdown> cost_i;
  for (const auto& row : feasible) {
    if (row.spec.setup != Setup::kIaaSOnly || !row.feasible) continue;
    SetupSpec spec = row.spec;
    spec.theta_f = theta_f0;
    // Without a serverless path every residual needs its own instance.
    const double t_cip = spec.theta_f ? resolve_t_cip(spec, profile, dist, pricing, r_max, slo, options) : 0.0;
    auto cost = evaluate_setup(spec, n, r_max, slo, t_cip, profile, dist, pricing, options);
    if (!cost_i || cost.total < cost_i->total) {
      cost_i = cost;
      plan_i = DeploymentPlan{spec.setup, spec.theta_i, spec.theta_f, std::nullopt, t_cip, r_max};
    }
  }

  std::optional<DeploymentPlan> plan_h;
  std::optional<CostBreakdown> cost_h;
  for (const auto& row : feasible) {
    if (row.spec.setup != Setup::kHybrid || !row.feasible) continue;
    if (theta_f0 && row.spec.theta_f != theta_f0) continue;
    const double t_cip = theta_f0 ? resolve_t_cip(row.spec, profile, dist, pricing, r_max, slo, options) : 0.0;
    auto cost = evaluate_setup(row.spec, n, r_max, slo, t_cip, profile, dist, pricing, options);
    if (!cost_h || cost.total < cost_h->total) {
      cost_h = cost;
      plan_h = DeploymentPlan{Setup::kHybrid, row.spec.theta_i, row.spec.theta_f, row.spec.cut_id, t_cip, r_max};
    }
  }

  const double ci = cost_i ? cost_i->total : kInf;
  const double cf = cost_f ? cost_f->total : kInf;
  const double ch = cost_h ? cost_h->total : kInf;
  if (!cost_i && !cost_f && !cost_h) {
    throw InfeasibleError();
  }

  PlanChoice choice;
  choice.iaas_plan = plan_i;
  choice.hybrid_plan = plan_h;
  if (cost_f) {
    choice.faas_plan = DeploymentPlan{Setup::kFaaSOnly, std::nullopt, theta_f0, std::nullopt, r_max, r_max};
  }
  choice.iaas = cost_i;
  choice.faas = cost_f;
  choice.hybrid = cost_h;
  if (cost_i && ci <= std::min(cf, ch)) {
    choice.plan = *plan_i;
    choice.chosen = *cost_i;
  } else if (cost_f && cf <= std::min(ci, ch)) {
    choice.plan = *choice.faas_plan;
    choice.chosen = *cost_f;
  } else {
    choice.plan = *plan_h;
    choice.chosen = *cost_h;
  }
  return choice;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kConfThres:
      return "conf_thres";
    case SweepAxis::kCutId:
      return "cut_id";
    case SweepAxis::kIngestion:
      return "ingestion";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& text) {
  if (text == "conf_thres") return SweepAxis::kConfThres;
  if (text == "cut_id") return SweepAxis::kCutId;
  if (text == "ingestion") return SweepAxis::kIngestion;
  throw InvalidArgument("unknown sweep axis '" + text + "'");
}

const CostBreakdown& SweepPoint::of(Setup setup) const {
  switch (setup) {
    case Setup::kIaaSOnly:
      return iaas;
    case Setup::kFaaSOnly:
      return faas;
    case Setup::kHybrid:
      return hybrid;
  }
  throw InvalidArgument("unknown setup");
}

namespace {

int sign_of(double value, double band) {
  if (std::abs(value) <= band) return 0;
  return value > 0.0 ? 1 : -1;
}

const ExitDistribution& lookup(const std::vector<ExitDistribution>& family, double conf_thres) {
  for (const auto& dist : family) {
    if (std::abs(dist.conf_thres() - conf_thres) <= 1e-12) {
      return dist;
    }
  }
  throw InvalidArgument("no exit distribution for conf_thres " + std::to_string(conf_thres));
}

}  // namespace

std::vector<std::pair<double, int>> locate_sign_changes(const std::vector<double>& xs,
                                                        const std::vector<double>& ys,
                                                        const std::vector<double>& zero_band) {
  if (xs.size() != ys.size() || xs.size() != zero_band.size()) {
    throw InvalidArgument("sign-change scan needs equally sized inputs");
  }
  std::vector<std::pair<double, int>> out;
  std::optional<std::size_t> last;  // index of the last non-zero sample
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int s = sign_of(ys[i], zero_band[i]);
    if (s == 0) continue;
    if (last) {
      const std::size_t p = *last;
      const int prev = sign_of(ys[p], zero_band[p]);
      if (prev != s) {
        double x;
        if (i == p + 1) {
          x = xs[p] + ys[p] * (xs[i] - xs[p]) / (ys[p] - ys[i]);
        } else {
          x = xs[p + 1];  // first sample sitting on zero
        }
        out.emplace_back(x, s);
      }
    }
    last = i;
  }
  return out;
}

SweepResult sweep(SweepAxis axis, const std::vector<double>& grid, const SweepContext& context) {
  if (grid.empty()) {
    throw InvalidArgument("sweep grid is empty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidArgument("sweep grid must be strictly increasing");
    }
  }
  if (!context.profile || !context.pricing) {
    throw InvalidArgument("sweep context needs a profile and a pricing catalog");
  }
  if (axis != SweepAxis::kConfThres && !context.dist) {
    throw InvalidArgument("sweep over " + to_string(axis) + " needs an exit distribution");
  }
  const auto& profile = *context.profile;
  const auto& pricing = *context.pricing;

  SweepResult result;
  result.axis = axis;
  for (double x : grid) {
    const ExitDistribution& dist = axis == SweepAxis::kConfThres ? lookup(context.family, x) : *context.dist;
    double n = context.n;
    SetupSpec hybrid = context.hybrid;
    if (axis == SweepAxis::kIngestion) {
      n = x;
    } else if (axis == SweepAxis::kCutId) {
      if (x != std::floor(x)) {
        throw InvalidArgument("cut_id grid values must be integers");
      }
      hybrid.cut_id = static_cast<int>(x);
    }

    SetupSpec iaas = context.iaas;
    if (!iaas.theta_f) {
      iaas.theta_f = context.faas.theta_f;
    }
    const double t_i = context.t_cip_iaas.value_or(
        resolve_t_cip(iaas, profile, dist, pricing, context.r_max, context.slo, context.options));
    const double t_h = context.t_cip_hybrid.value_or(
        resolve_t_cip(hybrid, profile, dist, pricing, context.r_max, context.slo, context.options));

    SweepPoint point;
    point.x = x;
    point.iaas = evaluate_setup(iaas, n, context.r_max, context.slo, t_i, profile, dist, pricing, context.options);
    point.faas = evaluate_setup(context.faas, n, context.r_max, context.slo, context.r_max, profile, dist, pricing,
                                context.options);
    point.hybrid =
        evaluate_setup(hybrid, n, context.r_max, context.slo, t_h, profile, dist, pricing, context.options);
    result.points.push_back(point);
  }

  for (const auto& [a, b] : context.pairs) {
    std::vector<double> xs, ys, band;
    for (const auto& point : result.points) {
      const double ca = point.of(a).total;
      const double cb = point.of(b).total;
      xs.push_back(point.x);
      ys.push_back(ca - cb);
      band.push_back(kCrossingTolerance * std::max(std::abs(ca), std::abs(cb)));
    }
    for (const auto& [x, sign] : locate_sign_changes(xs, ys, band)) {
      result.crossings.push_back({a, b, x, sign});
    }
  }
  return result;
}

}  // namespace hybridcost
