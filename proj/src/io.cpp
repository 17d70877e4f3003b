#include "hybridcost/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hybridcost/error.hpp"

namespace hybridcost::io {

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& message) {
  throw ParseError(source + ": " + message);
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    fail(source + ":" + std::to_string(line), e.what());
  }
}

template <typename Fn>
auto guarded(const std::string& source, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    fail(source, e.what());
  } catch (const Error& e) {
    fail(source, e.what());
  }
}

const json& member(const json& doc, const char* key, const std::string& source) {
  if (!doc.is_object() || !doc.contains(key)) {
    fail(source, std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

}  // namespace

StagedModelProfile profile_from_json(const json& doc, const std::string& source) {
  return guarded(source, [&] {
    std::vector<PartitionProfile> partitions;
    for (const auto& item : member(doc, "partitions", source)) {
      PartitionProfile part;
      part.pid = member(item, "pid", source).get<int>();
      part.ends_in_classifier = item.value("ends_in_classifier", true);
      for (const auto& [config, seconds] : member(item, "runtimes", source).items()) {
        part.runtimes.emplace(config, seconds.get<double>());
      }
      partitions.push_back(std::move(part));
    }
    return StagedModelProfile(doc.value("name", std::string("model")), member(doc, "slo_seconds", source).get<double>(),
                              std::move(partitions), doc.value("batch_size", 100));
  });
}

ExitDistribution exit_distribution_from_json(const json& doc, const std::string& source) {
  return guarded(source, [&] {
    const double conf = doc.value("conf_thres", 1.0);
    std::optional<double> accuracy;
    if (doc.contains("accuracy") && !doc.at("accuracy").is_null()) {
      accuracy = doc.at("accuracy").get<double>();
    }
    if (doc.contains("fractions")) {
      return ExitDistribution(doc.at("fractions").get<std::vector<double>>(), conf, accuracy);
    }
    if (doc.contains("betas")) {
      const auto betas = doc.at("betas").get<std::vector<double>>();
      return ExitDistribution::from_conditional(betas, conf, accuracy);
    }
    fail(source, "exit distribution needs 'fractions' or 'betas'");
  });
}

std::vector<ExitDistribution> exit_family_from_json(const json& doc, const std::string& source) {
  const json& items = doc.is_array() ? doc : member(doc, "family", source);
  std::vector<ExitDistribution> family;
  std::size_t index = 0;
  for (const auto& item : items) {
    family.push_back(exit_distribution_from_json(item, source + "[" + std::to_string(index++) + "]"));
  }
  if (family.empty()) {
    fail(source, "distribution family is empty");
  }
  return family;
}

PricingCatalog pricing_from_json(const json& doc, const std::string& source) {
  return guarded(source, [&] {
    std::vector<PlatformConfig> configs;
    for (const auto& item : member(doc, "configs", source)) {
      PlatformConfig config;
      config.id = member(item, "id", source).get<std::string>();
      config.kind = platform_kind_from_string(member(item, "kind", source).get<std::string>());
      config.memory_mb = item.value("memory_mb", 0);
      config.vcpus = item.value("vcpus", 0.0);
      config.r_max = item.value("r_max", 100.0);
      if (item.contains("unit_price_per_s")) {
        config.unit_price = item.at("unit_price_per_s").get<double>();
      } else if (item.contains("price_per_hour")) {
        config.unit_price = item.at("price_per_hour").get<double>() / 3600.0;
      } else if (item.contains("price_per_gb_s")) {
        config.unit_price = serverless_unit_price(config.memory_mb, item.at("price_per_gb_s").get<double>());
      } else {
        fail(source, "config '" + config.id + "' needs unit_price_per_s, price_per_hour or price_per_gb_s");
      }
      configs.push_back(std::move(config));
    }
    return PricingCatalog(std::move(configs), doc.value("currency", std::string("USD")),
                          doc.value("offload_transmission_s", 0.0));
  });
}

DeploymentPlan plan_from_json(const json& doc, const std::string& source) {
  return guarded(source, [&] {
    DeploymentPlan plan;
    plan.setup = setup_from_string(member(doc, "setup", source).get<std::string>());
    auto optional_string = [&](const char* key) -> std::optional<std::string> {
      if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
      return doc.at(key).get<std::string>();
    };
    plan.theta_i = optional_string("theta_i");
    plan.theta_f = optional_string("theta_f");
    if (doc.contains("cut_id") && !doc.at("cut_id").is_null()) {
      plan.cut_id = doc.at("cut_id").get<int>();
    }
    plan.r_max = doc.value("r_max", 100.0);
    plan.t_cip = doc.value("t_cip", plan.r_max);
    plan.validate();
    return plan;
  });
}

TrafficTrace trace_from_csv(const std::string& text, double epoch_seconds, const std::string& source) {
  TrafficTrace trace;
  trace.epoch_seconds = epoch_seconds;
  trace.source = source;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "epoch,requests") {
        fail(source + ":" + std::to_string(line_no), "expected header 'epoch,requests'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      fail(source + ":" + std::to_string(line_no), "expected two columns");
    }
    auto parse_int = [&](std::string_view field, const char* what) {
      std::int64_t value = 0;
      const auto* end = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(field.data(), end, value);
      if (ec != std::errc() || ptr != end) {
        fail(source + ":" + std::to_string(line_no), std::string("invalid ") + what + " '" + std::string(field) + "'");
      }
      return value;
    };
    const std::string_view view(line);
    const auto epoch = parse_int(view.substr(0, comma), "epoch");
    const auto requests = parse_int(view.substr(comma + 1), "requests");
    if (epoch != static_cast<std::int64_t>(trace.epochs.size())) {
      fail(source + ":" + std::to_string(line_no), "epochs must be consecutive from 0");
    }
    if (requests < 0) {
      fail(source + ":" + std::to_string(line_no), "requests must be non-negative");
    }
    trace.epochs.push_back(requests);
  }
  if (!header_seen) {
    fail(source, "missing header 'epoch,requests'");
  }
  if (trace.epochs.empty()) {
    fail(source, "trace has no epochs");
  }
  return trace;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot write " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      throw Error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

StagedModelProfile load_profile(const std::filesystem::path& path) {
  return profile_from_json(parse_json(read_file(path), path.string()), path.string());
}

ExitDistribution load_exit_distribution(const std::filesystem::path& path) {
  return exit_distribution_from_json(parse_json(read_file(path), path.string()), path.string());
}

std::vector<ExitDistribution> load_exit_family(const std::filesystem::path& path) {
  return exit_family_from_json(parse_json(read_file(path), path.string()), path.string());
}

PricingCatalog load_pricing(const std::filesystem::path& path) {
  return pricing_from_json(parse_json(read_file(path), path.string()), path.string());
}

DeploymentPlan load_plan(const std::filesystem::path& path) {
  return plan_from_json(parse_json(read_file(path), path.string()), path.string());
}

TrafficTrace load_trace(const std::filesystem::path& path, double epoch_seconds) {
  return trace_from_csv(read_file(path), epoch_seconds, path.string());
}

namespace {

json optional_json(const std::optional<std::string>& value) { return value ? json(*value) : json(nullptr); }
json optional_json(const std::optional<int>& value) { return value ? json(*value) : json(nullptr); }

}  // namespace

json to_json(const StagedModelProfile& profile) {
  json parts = json::array();
  for (const auto& part : profile.partitions()) {
    json runtimes = json::object();
    for (const auto& [config, seconds] : part.runtimes) {
      runtimes[config] = seconds;
    }
    parts.push_back({{"pid", part.pid}, {"ends_in_classifier", part.ends_in_classifier}, {"runtimes", runtimes}});
  }
  return {{"name", profile.name()},
          {"slo_seconds", profile.slo()},
          {"batch_size", profile.batch_size()},
          {"partitions", parts}};
}

json to_json(const ExitDistribution& dist) {
  return {{"conf_thres", dist.conf_thres()},
          {"fractions", dist.fractions()},
          {"accuracy", dist.accuracy() ? json(*dist.accuracy()) : json(nullptr)}};
}

json to_json(const PricingCatalog& pricing) {
  json configs = json::array();
  for (const auto& config : pricing.configs()) {
    configs.push_back({{"id", config.id},
                       {"kind", to_string(config.kind)},
                       {"unit_price_per_s", config.unit_price},
                       {"memory_mb", config.memory_mb},
                       {"vcpus", config.vcpus},
                       {"r_max", config.r_max}});
  }
  return {{"currency", pricing.currency()},
          {"offload_transmission_s", pricing.offload_transmission_s()},
          {"configs", configs}};
}

json to_json(const DeploymentPlan& plan) {
  return {{"setup", to_string(plan.setup)},
          {"theta_i", optional_json(plan.theta_i)},
          {"theta_f", optional_json(plan.theta_f)},
          {"cut_id", optional_json(plan.cut_id)},
          {"t_cip", plan.t_cip},
          {"r_max", plan.r_max},
          {"pool", plan.pool()}};
}

json to_json(const CostBreakdown& cost) {
  return {{"setup", to_string(cost.setup)},
          {"vm_cost", cost.vm_cost},
          {"faas_cost", cost.faas_cost},
          {"total", cost.total},
          {"vm_count", cost.vm_count},
          {"cut_id", optional_json(cost.cut_id)},
          {"spill_requests", cost.spill_requests}};
}

json to_json(const SimParams& params) {
  return {{"scale_interval_epochs", params.scale_interval_epochs},
          {"cold_start_epochs", params.cold_start_epochs},
          {"cold_start_jitter_epochs", params.cold_start_jitter_epochs},
          {"w_mu", params.w_mu},
          {"w_sigma", params.w_sigma},
          {"phi", params.phi},
          {"t_cip", params.t_cip ? json(*params.t_cip) : json(nullptr)},
          {"r_max", params.r_max ? json(*params.r_max) : json(nullptr)},
          {"seed", params.seed},
          {"exit_mode", to_string(params.exit_mode)},
          {"warm_start", params.warm_start},
          {"max_epochs", params.max_epochs ? json(*params.max_epochs) : json(nullptr)}};
}

json to_json(const SimReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"epoch", row.epoch},
                    {"lambda", row.lambda},
                    {"mu", row.mu},
                    {"sigma", row.sigma},
                    {"threshold", row.routing.threshold},
                    {"healthy", row.healthy},
                    {"provisioned", row.provisioned},
                    {"target", row.target},
                    {"vm_batches", row.routing.vm_batches},
                    {"faas_batches", row.routing.faas_batches},
                    {"vm_cost", row.vm_cost},
                    {"faas_cost", row.faas_cost},
                    {"spill_faas_seconds", row.spill_faas_seconds},
                    {"tail_faas_seconds", row.tail_faas_seconds},
                    {"violations", row.violations}});
  }
  json events = json::array();
  for (const auto& event : report.scale_events) {
    events.push_back(
        {{"epoch", event.epoch}, {"from", event.from}, {"to", event.to}, {"ready_epoch", event.ready_epoch}});
  }
  const auto& totals = report.totals;
  return {{"metadata",
           {{"plan", to_json(report.plan)},
            {"params", to_json(report.params)},
            {"t_cip", report.t_cip},
            {"r_max", report.r_max},
            {"epoch_seconds", report.epoch_seconds},
            {"trace_source", report.trace_source},
            {"trace_hash", report.trace_hash}}},
          {"totals",
           {{"vm_cost", totals.vm_cost},
            {"faas_cost", totals.faas_cost},
            {"total", totals.total},
            {"violations", totals.violations},
            {"arrivals", totals.arrivals},
            {"vm_requests", totals.vm_requests},
            {"faas_requests", totals.faas_requests},
            {"spill_faas_seconds", totals.spill_faas_seconds},
            {"tail_faas_seconds", totals.tail_faas_seconds}}},
          {"scale_events", events},
          {"rows", rows}};
}

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  }
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string trace_to_csv(const TrafficTrace& trace) {
  std::string out = "epoch,requests\n";
  for (std::size_t i = 0; i < trace.epochs.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(trace.epochs[i]) + "\n";
  }
  return out;
}

std::string report_to_csv(const SimReport& report) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.epoch) + "," + std::to_string(row.lambda) + "," + format_double(row.mu) + "," +
           format_double(row.sigma) + "," + std::to_string(row.healthy) + "," + std::to_string(row.target) + "," +
           std::to_string(row.routing.vm_batches.size()) + "," + std::to_string(row.routing.faas_batches.size()) +
           "," + format_double(row.vm_cost) + "," + format_double(row.faas_cost) + "," +
           std::to_string(row.violations) + "\n";
  }
  return out;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "x,C_I,C_F,C_H\n";
  for (const auto& point : result.points) {
    out += format_double(point.x) + "," + format_double(point.iaas.total) + "," + format_double(point.faas.total) +
           "," + format_double(point.hybrid.total) + "\n";
  }
  for (const auto& crossing : result.crossings) {
    out += "# crossing," + to_string(crossing.a) + "-" + to_string(crossing.b) + "," + format_double(crossing.x) +
           "\n";
  }
  return out;
}

std::string sweep_to_tidy_csv(const SweepResult& result) {
  std::string out = "axis,x,setup,vm_cost,faas_cost,total,vm_count\n";
  const auto axis = to_string(result.axis);
  for (const auto& point : result.points) {
    for (const auto* cost : {&point.iaas, &point.faas, &point.hybrid}) {
      out += axis + "," + format_double(point.x) + "," + to_string(cost->setup) + "," + format_double(cost->vm_cost) +
             "," + format_double(cost->faas_cost) + "," + format_double(cost->total) + "," +
             std::to_string(cost->vm_count) + "\n";
    }
  }
  return out;
}

}  // namespace hybridcost::io
