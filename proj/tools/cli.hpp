#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hybridcost/configurator.hpp"
#include "hybridcost/pricing.hpp"
#include "hybridcost/profile.hpp"
#include "hybridcost/simengine.hpp"

namespace hybridcost::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;

// Paths and parameters shared by every command. load() parses every referenced
// file before any command does work.
struct RunManifest {
  std::filesystem::path profile_path;
  std::filesystem::path pricing_path;
  std::filesystem::path dist_path;
  std::filesystem::path dist_family_path;
  std::filesystem::path trace_path;
  std::vector<std::filesystem::path> plan_paths;
  std::filesystem::path out_dir;

  double r_max = 100.0;
  std::optional<double> slo;  // defaults to the profile's slo_seconds
  std::optional<double> n;    // defaults to r_max
  std::optional<double> t_cip;
  int cut_first = 1;
  int cut_last = 0;
  bool strict_spill = false;
  bool plot_data = false;

  SimParams sim;
  std::optional<std::int64_t> epochs;

  // Loaded inputs.
  std::optional<StagedModelProfile> profile;
  std::optional<PricingCatalog> pricing;
  std::optional<ExitDistribution> dist;
  std::vector<ExitDistribution> family;
  std::optional<TrafficTrace> trace;
  std::vector<DeploymentPlan> plans;

  void load();
  double effective_slo() const;
  CostOptions cost_options() const;
};

struct SweepArgs {
  std::string axis = "conf_thres";
  std::string grid;  // "a:b:step" or "v1,v2,..."; empty uses the family thresholds
  std::optional<std::string> theta_i;
  std::optional<std::string> theta_h;
  std::optional<std::string> theta_f;
  int cut_id = 0;  // 0 picks the largest SLO-feasible cut
  std::string pairs = "Hybrid-IaaSOnly,Hybrid-FaaSOnly";
};

int cmd_feasible(RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_plan(RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_sweep(RunManifest& manifest, const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_replay(RunManifest& manifest, std::ostream& out, std::ostream& err);

std::vector<double> parse_grid(const std::string& text);

// Full entry point: parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybridcost::cli
