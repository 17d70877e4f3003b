#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridcost/configurator.hpp"
#include "hybridcost/costmodel.hpp"
#include "hybridcost/pricing.hpp"
#include "hybridcost/profile.hpp"
#include "hybridcost/simengine.hpp"

namespace hybridcost::io {

using nlohmann::json;

// Readers throw ParseError with the file name and, for syntax errors, the
// line number. `source` names the origin in messages.
StagedModelProfile profile_from_json(const json& doc, const std::string& source = "<profile>");
ExitDistribution exit_distribution_from_json(const json& doc, const std::string& source = "<distribution>");
std::vector<ExitDistribution> exit_family_from_json(const json& doc, const std::string& source = "<family>");
PricingCatalog pricing_from_json(const json& doc, const std::string& source = "<pricing>");
DeploymentPlan plan_from_json(const json& doc, const std::string& source = "<plan>");
TrafficTrace trace_from_csv(const std::string& text, double epoch_seconds, const std::string& source = "<trace>");

StagedModelProfile load_profile(const std::filesystem::path& path);
ExitDistribution load_exit_distribution(const std::filesystem::path& path);
// Accepts a JSON array of distributions or {"family": [...]}.
std::vector<ExitDistribution> load_exit_family(const std::filesystem::path& path);
PricingCatalog load_pricing(const std::filesystem::path& path);
DeploymentPlan load_plan(const std::filesystem::path& path);
TrafficTrace load_trace(const std::filesystem::path& path, double epoch_seconds);

json to_json(const StagedModelProfile& profile);
json to_json(const ExitDistribution& dist);
json to_json(const PricingCatalog& pricing);
json to_json(const DeploymentPlan& plan);
json to_json(const CostBreakdown& cost);
json to_json(const SimParams& params);
json to_json(const SimReport& report);

std::string trace_to_csv(const TrafficTrace& trace);

inline constexpr const char* kReportCsvHeader =
    "epoch,lambda,mu,sigma,healthy,target,vm_batches,faas_batches,vm_cost,faas_cost,violations";

// One row per epoch; vm_batches and faas_batches are batch counts.
std::string report_to_csv(const SimReport& report);

// Columns x,C_I,C_F,C_H followed by "# crossing" footer lines.
std::string sweep_to_csv(const SweepResult& result);
// Long format: axis,x,setup,vm_cost,faas_cost,total,vm_count.
std::string sweep_to_tidy_csv(const SweepResult& result);

// Shortest text that reads back to the same double.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temp file and renames it over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hybridcost::io
