#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "hybridcost/error.hpp"
#include "hybridcost/io.hpp"

namespace hybridcost::cli {

namespace {

std::string money(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string or_dash(const std::optional<std::string>& value) { return value ? *value : "-"; }
std::string or_dash(const std::optional<int>& value) { return value ? std::to_string(*value) : "-"; }

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

void write_output(const RunManifest& manifest, const std::string& name, const std::string& content) {
  if (manifest.out_dir.empty()) return;
  io::write_file_atomic(manifest.out_dir / name, content);
}

}  // namespace

void RunManifest::load() {
  if (profile_path.empty()) throw InvalidArgument("--profile is required");
  if (pricing_path.empty()) throw InvalidArgument("--pricing is required");
  profile = io::load_profile(profile_path);
  pricing = io::load_pricing(pricing_path);
  if (!dist_path.empty()) {
    dist = io::load_exit_distribution(dist_path);
    check_same_shape(*profile, *dist);
  }
  if (!dist_family_path.empty()) {
    family = io::load_exit_family(dist_family_path);
    for (const auto& member : family) check_same_shape(*profile, member);
  }
  if (!trace_path.empty()) {
    trace = io::load_trace(trace_path, effective_slo());
  }
  for (const auto& path : plan_paths) {
    plans.push_back(io::load_plan(path));
  }
  if (!(r_max > 0.0)) throw InvalidArgument("--r-max must be positive");
  if (t_cip && !(*t_cip >= 0.0 && *t_cip <= r_max)) throw InvalidArgument("--t-cip must lie in [0, r-max]");
  sim.max_epochs = epochs;
  sim.validate();
}

double RunManifest::effective_slo() const {
  if (slo) return *slo;
  return profile ? profile->slo() : 6.0;
}

CostOptions RunManifest::cost_options() const {
  CostOptions options;
  options.spill = strict_spill ? SpillBilling::kStrict : SpillBilling::kExplicit;
  options.transmission_s = pricing ? pricing->offload_transmission_s() : 0.0;
  return options;
}

int cmd_feasible(RunManifest& manifest, std::ostream& out, std::ostream& err) {
  const auto rows = evaluate_feasibility(*manifest.profile, *manifest.pricing, manifest.r_max, manifest.effective_slo(),
                                         {manifest.cut_first, manifest.cut_last});
  std::string csv = "setup,theta_i,theta_f,cut_id,worst_case_seconds,feasible\n";
  out << pad("setup", 10) << pad("theta_i", 14) << pad("theta_f", 18) << pad("cut", 5) << pad("worst_s", 10)
      << "feasible\n";
  bool any = false;
  for (const auto& row : rows) {
    any = any || row.feasible;
    out << pad(to_string(row.spec.setup), 10) << pad(or_dash(row.spec.theta_i), 14)
        << pad(or_dash(row.spec.theta_f), 18) << pad(or_dash(row.spec.cut_id), 5)
        << pad(fixed(row.worst_case_seconds, 3), 10) << (row.feasible ? "yes" : "no") << "\n";
    csv += to_string(row.spec.setup) + "," + row.spec.theta_i.value_or("") + "," + row.spec.theta_f.value_or("") +
           "," + (row.spec.cut_id ? std::to_string(*row.spec.cut_id) : "") + "," +
           io::format_double(row.worst_case_seconds) + "," + (row.feasible ? "true" : "false") + "\n";
  }
  write_output(manifest, "feasibility.csv", csv);
  if (!any) {
    err << "No configuration meets SLO.\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

namespace {

PlanChoice choose(RunManifest& manifest) {
  if (!manifest.dist) throw InvalidArgument("--dist is required");
  const double slo = manifest.effective_slo();
  const auto feasible =
      slo_feasible(*manifest.profile, *manifest.pricing, manifest.r_max, slo, {manifest.cut_first, manifest.cut_last});
  if (feasible.empty()) throw InfeasibleError();
  const double n = manifest.n.value_or(manifest.r_max);
  auto choice = select_plan(*manifest.profile, *manifest.dist, feasible, *manifest.pricing, n, manifest.r_max, slo,
                            manifest.cost_options());
  if (manifest.t_cip) {
    for (auto* plan : {&choice.plan}) {
      if (plan->setup != Setup::kFaaSOnly) plan->t_cip = *manifest.t_cip;
    }
  }
  return choice;
}

}  // namespace

int cmd_plan(RunManifest& manifest, std::ostream& out, std::ostream& /*err*/) {
  const auto choice = choose(manifest);
  const auto& currency = manifest.pricing->currency();
  out << "setup       total/epoch (" << currency << ")  vm_cost     faas_cost   vms\n";
  auto line = [&](const char* name, const std::optional<CostBreakdown>& cost) {
    out << pad(name, 12);
    if (!cost) {
      out << "infeasible\n";
      return;
    }
    out << pad(money(cost->total), 20) << pad(money(cost->vm_cost), 12) << pad(money(cost->faas_cost), 12)
        << cost->vm_count << (cost->cut_id ? "  cut_id=" + std::to_string(*cost->cut_id) : std::string()) << "\n";
  };
  line("IaaSOnly", choice.iaas);
  line("FaaSOnly", choice.faas);
  line("Hybrid", choice.hybrid);
  const auto& plan = choice.plan;
  out << "selected: " << to_string(plan.setup) << " pool=" << plan.pool() << " theta_i=" << or_dash(plan.theta_i)
      << " theta_f=" << or_dash(plan.theta_f) << " cut_id=" << or_dash(plan.cut_id) << " t_cip=" << fixed(plan.t_cip, 3)
      << "\n";
  write_output(manifest, "plan.json", io::to_json(plan).dump(2) + "\n");
  return kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.empty()) return grid;
  auto number = [&](const std::string& token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) throw InvalidArgument("invalid grid value '" + token + "'");
    return value;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw InvalidArgument("grid range must be start:stop:step");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || stop < start) throw InvalidArgument("grid range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  std::stringstream in(text);
  for (std::string token; std::getline(in, token, ',');) grid.push_back(number(token));
  return grid;
}

namespace {

struct DefaultConfigs {
  std::optional<ConfigId> theta_i;
  std::optional<ConfigId> theta_h;
  std::optional<ConfigId> theta_f;
  int cut_id = 0;
};

// Cheapest-by-unit-price feasible configs and the largest feasible hybrid cut.
DefaultConfigs default_configs(const RunManifest& manifest, const SweepArgs& args) {
  const auto feasible = slo_feasible(*manifest.profile, *manifest.pricing, manifest.r_max, manifest.effective_slo(),
                                     {manifest.cut_first, manifest.cut_last});
  const auto& pricing = *manifest.pricing;
  auto cheaper = [&](const std::optional<ConfigId>& current, const ConfigId& candidate) {
    return !current || pricing.at(candidate).unit_price < pricing.at(*current).unit_price;
  };
  DefaultConfigs out{args.theta_i, args.theta_h, args.theta_f, args.cut_id};
  if (!out.theta_f) {
    for (const auto& row : feasible)
      if (row.spec.setup == Setup::kFaaSOnly && cheaper(out.theta_f, *row.spec.theta_f)) out.theta_f = row.spec.theta_f;
  }
  if (!out.theta_i) {
    std::optional<ConfigId> best;
    for (const auto& row : feasible)
      if (row.spec.setup == Setup::kIaaSOnly && cheaper(best, *row.spec.theta_i)) best = row.spec.theta_i;
    out.theta_i = best;
  }
  if (!out.theta_h) {
    std::optional<ConfigId> best;
    for (const auto& row : feasible)
      if (row.spec.setup == Setup::kHybrid && (!out.theta_f || row.spec.theta_f == out.theta_f) &&
          cheaper(best, *row.spec.theta_i))
        best = row.spec.theta_i;
    out.theta_h = best;
  }
  if (out.cut_id == 0) {
    for (const auto& row : feasible)
      if (row.spec.setup == Setup::kHybrid && row.spec.theta_i == out.theta_h && row.spec.theta_f == out.theta_f)
        out.cut_id = std::max(out.cut_id, *row.spec.cut_id);
  }
  if (!out.theta_i || !out.theta_h || !out.theta_f || out.cut_id == 0) {
    throw InfeasibleError();
  }
  return out;
}

std::vector<std::pair<Setup, Setup>> parse_pairs(const std::string& text) {
  std::vector<std::pair<Setup, Setup>> pairs;
  std::stringstream in(text);
  for (std::string token; std::getline(in, token, ',');) {
    const auto dash = token.find('-');
    if (dash == std::string::npos) throw InvalidArgument("setup pair '" + token + "' must look like A-B");
    pairs.emplace_back(setup_from_string(token.substr(0, dash)), setup_from_string(token.substr(dash + 1)));
  }
  return pairs;
}

}  // namespace

int cmd_sweep(RunManifest& manifest, const SweepArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const auto axis = sweep_axis_from_string(args.axis);
  auto grid = parse_grid(args.grid);
  if (axis == SweepAxis::kConfThres) {
    if (manifest.family.empty()) throw InvalidArgument("conf_thres sweeps need --dist-family");
    if (grid.empty()) {
      for (const auto& dist : manifest.family) grid.push_back(dist.conf_thres());
      std::sort(grid.begin(), grid.end());
    }
  } else if (!manifest.dist) {
    throw InvalidArgument(args.axis + " sweeps need --dist");
  }
  if (grid.empty()) throw InvalidArgument("--grid is required for " + args.axis + " sweeps");

  const auto configs = default_configs(manifest, args);
  SweepContext context;
  context.profile = &*manifest.profile;
  context.pricing = &*manifest.pricing;
  context.family = manifest.family;
  context.dist = manifest.dist;
  context.iaas = {Setup::kIaaSOnly, configs.theta_i, configs.theta_f, std::nullopt};
  context.faas = {Setup::kFaaSOnly, std::nullopt, configs.theta_f, std::nullopt};
  context.hybrid = {Setup::kHybrid, configs.theta_h, configs.theta_f, configs.cut_id};
  context.r_max = manifest.r_max;
  context.n = manifest.n.value_or(manifest.r_max);
  context.slo = manifest.effective_slo();
  context.t_cip_iaas = manifest.t_cip;
  context.t_cip_hybrid = manifest.t_cip;
  context.options = manifest.cost_options();
  context.pairs = parse_pairs(args.pairs);

  const auto result = sweep(axis, grid, context);
  const auto csv = io::sweep_to_csv(result);
  out << csv;
  write_output(manifest, "sweep_" + args.axis + ".csv", csv);
  if (manifest.plot_data) {
    write_output(manifest, "sweep_" + args.axis + "_tidy.csv", io::sweep_to_tidy_csv(result));
  }
  return kExitOk;
}

int cmd_replay(RunManifest& manifest, std::ostream& out, std::ostream& /*err*/) {
  if (!manifest.trace) throw InvalidArgument("--trace is required");
  if (!manifest.dist) throw InvalidArgument("--dist is required");
  auto plans = manifest.plans;
  if (plans.empty()) {
    const auto choice = choose(manifest);
    for (const auto& plan : {choice.hybrid_plan, choice.faas_plan, choice.iaas_plan}) {
      if (plan) plans.push_back(*plan);
    }
  }
  auto params = manifest.sim;
  if (manifest.t_cip) params.t_cip = manifest.t_cip;

  auto report_name = [](std::size_t index, const SimReport& report) {
    return "report_" + std::to_string(index) + "_" + to_string(report.plan.setup);
  };
  std::string tidy = "epoch,pool,vm_batches,faas_batches,vm_cost,faas_cost\n";
  auto add_tidy = [&](const SimReport& report) {
    for (const auto& row : report.rows) {
      tidy += std::to_string(row.epoch) + "," + report.plan.pool() + "," +
              std::to_string(row.routing.vm_batches.size()) + "," + std::to_string(row.routing.faas_batches.size()) +
              "," + io::format_double(row.vm_cost) + "," + io::format_double(row.faas_cost) + "\n";
    }
  };
  // Pools are quoted in CSV output because labels contain commas.
  auto quoted = [](const std::string& text) { return "\"" + text + "\""; };

  if (plans.size() == 1) {
    const auto report = replay(*manifest.trace, plans.front(), *manifest.profile, *manifest.dist, *manifest.pricing,
                               params);
    write_output(manifest, report_name(0, report) + ".json", io::to_json(report).dump(2) + "\n");
    write_output(manifest, report_name(0, report) + ".csv", io::report_to_csv(report));
    add_tidy(report);
    out << report.plan.pool() << " total " << money(report.totals.total) << " (vm " << money(report.totals.vm_cost)
        << ", faas " << money(report.totals.faas_cost) << ") over " << report.rows.size() << " epochs, "
        << report.totals.violations << " SLO violations\n";
  } else {
    const auto comparison =
        compare_pools(*manifest.trace, plans, *manifest.profile, *manifest.dist, *manifest.pricing, params);
    for (std::size_t i = 0; i < comparison.reports.size(); ++i) {
      const auto& report = comparison.reports[i];
      write_output(manifest, report_name(i, report) + ".json", io::to_json(report).dump(2) + "\n");
      write_output(manifest, report_name(i, report) + ".csv", io::report_to_csv(report));
      add_tidy(report);
    }
    std::string csv = "rank,pool,setup,total,vm_cost,faas_cost,violations,pct_vs_cheapest\n";
    out << "rank  pool            total         vm_cost       faas_cost     violations  vs cheapest\n";
    for (std::size_t i = 0; i < comparison.ranked.size(); ++i) {
      const auto& entry = comparison.ranked[i];
      const double pct = comparison.percent[i][0];
      out << pad(std::to_string(i + 1), 6) << pad(entry.plan.pool(), 16) << pad(money(entry.totals.total), 14)
          << pad(money(entry.totals.vm_cost), 14) << pad(money(entry.totals.faas_cost), 14)
          << pad(std::to_string(entry.totals.violations), 12) << (pct >= 0 ? "+" : "") << fixed(pct, 2) << "%\n";
      csv += std::to_string(i + 1) + "," + quoted(entry.plan.pool()) + "," + to_string(entry.plan.setup) + "," +
             io::format_double(entry.totals.total) + "," + io::format_double(entry.totals.vm_cost) + "," +
             io::format_double(entry.totals.faas_cost) + "," + std::to_string(entry.totals.violations) + "," +
             io::format_double(pct) + "\n";
    }
    write_output(manifest, "comparison.csv", csv);
  }
  if (manifest.plot_data) {
    write_output(manifest, "replay_tidy.csv", tidy);
  }
  return kExitOk;
}

namespace {

void add_common(CLI::App* cmd, RunManifest& m) {
  cmd->add_option("--profile", m.profile_path, "Staged model profile (JSON)")->required();
  cmd->add_option("--pricing", m.pricing_path, "Pricing catalog (JSON)")->required();
  cmd->add_option("--out", m.out_dir, "Output directory");
  cmd->add_option("--r-max", m.r_max, "Per-instance capacity, requests per epoch")->capture_default_str();
  cmd->add_option("--slo", m.slo, "SLO and epoch length in seconds (default: profile slo_seconds, 6 s)");
  cmd->add_option("--t-cip", m.t_cip, "Override the residual threshold, requests per epoch");
  cmd->add_option("--n", m.n, "Long-term average load, requests per epoch (default: r-max)");
  cmd->add_option("--cut-first", m.cut_first, "Smallest hybrid cut to consider")->capture_default_str();
  cmd->add_option("--cut-last", m.cut_last, "Largest hybrid cut to consider (0: L-1)")->capture_default_str();
  cmd->add_flag("--strict-spill", m.strict_spill, "Charge residual spill as in the literal closed forms");
  cmd->add_flag("--plot-data", m.plot_data, "Also write tidy CSV for plotting");
}

void add_sim(CLI::App* cmd, RunManifest& m) {
  cmd->add_option("--scale-interval", m.sim.scale_interval_epochs, "Epochs between scaling decisions")
      ->capture_default_str();
  cmd->add_option("--cold-start", m.sim.cold_start_epochs, "VM cold start in epochs")->capture_default_str();
  cmd->add_option("--cold-start-jitter", m.sim.cold_start_jitter_epochs, "Uniform extra cold start, epochs")
      ->capture_default_str();
  cmd->add_option("--w-mu", m.sim.w_mu, "EWMA weight of the mean")->capture_default_str();
  cmd->add_option("--w-sigma", m.sim.w_sigma, "EWMA weight of the deviation")->capture_default_str();
  cmd->add_option("--phi", m.sim.phi, "Deviation multiplier of the balancer threshold")->capture_default_str();
  cmd->add_option("--seed", m.sim.seed, "Seed for jitter and multinomial exits")->capture_default_str();
  cmd->add_option("--epochs", m.epochs, "Replay at most this many epochs");
  cmd->add_flag("--warm-start", m.sim.warm_start, "Start from the first epoch's load with a healthy pool");
  cmd->add_option_function<std::string>(
         "--exit-mode", [&m](const std::string& text) { m.sim.exit_mode = exit_mode_from_string(text); },
         "expected | largest_remainder | multinomial")
      ->default_str("expected");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cost planner and trace replay for early-exit inference on VM and serverless pools"};
  app.require_subcommand(1);
  RunManifest manifest;
  SweepArgs sweep_args;

  auto* feasible = app.add_subcommand("feasible", "List setups whose worst-case batch time meets the SLO");
  add_common(feasible, manifest);

  auto* plan = app.add_subcommand("plan", "Pick the cheapest feasible setup for an exit distribution");
  add_common(plan, manifest);
  plan->add_option("--dist", manifest.dist_path, "Exit distribution (JSON)")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate all setups over a grid and locate cost crossings");
  add_common(sweep_cmd, manifest);
  sweep_cmd->add_option("--dist", manifest.dist_path, "Exit distribution (JSON)");
  sweep_cmd->add_option("--dist-family", manifest.dist_family_path, "Distributions keyed by conf_thres (JSON)");
  sweep_cmd->add_option("--axis", sweep_args.axis, "conf_thres | cut_id | ingestion")->capture_default_str();
  sweep_cmd->add_option("--grid", sweep_args.grid, "start:stop:step or v1,v2,...");
  sweep_cmd->add_option("--theta-i", sweep_args.theta_i, "VM config for IaaS-only");
  sweep_cmd->add_option("--theta-h", sweep_args.theta_h, "VM config for hybrid");
  sweep_cmd->add_option("--theta-f", sweep_args.theta_f, "Serverless config");
  sweep_cmd->add_option("--cut", sweep_args.cut_id, "Hybrid cut (0: largest feasible)");
  sweep_cmd->add_option("--pairs", sweep_args.pairs, "Setup pairs to scan, e.g. Hybrid-IaaSOnly,FaaSOnly-IaaSOnly")
      ->capture_default_str();

  auto* replay_cmd = app.add_subcommand("replay", "Replay a trace against one or more deployment plans");
  add_common(replay_cmd, manifest);
  add_sim(replay_cmd, manifest);
  replay_cmd->add_option("--dist", manifest.dist_path, "Exit distribution (JSON)")->required();
  replay_cmd->add_option("--trace", manifest.trace_path, "Trace CSV with header epoch,requests")->required();
  replay_cmd->add_option("--plan", manifest.plan_paths, "Plan JSON; repeat to compare pools (default: all three)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << e.what() << "\n" << active->help();
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    manifest.load();
    if (feasible->parsed()) return cmd_feasible(manifest, out, err);
    if (plan->parsed()) return cmd_plan(manifest, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(manifest, sweep_args, out, err);
    return cmd_replay(manifest, out, err);
  } catch (const InfeasibleError& e) {
    err << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace hybridcost::cli
