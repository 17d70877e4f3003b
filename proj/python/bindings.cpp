#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hybridcost/balancer.hpp"
#include "hybridcost/configurator.hpp"
#include "hybridcost/costmodel.hpp"
#include "hybridcost/error.hpp"
#include "hybridcost/io.hpp"
#include "hybridcost/pricing.hpp"
#include "hybridcost/profile.hpp"
#include "hybridcost/simengine.hpp"
#include "hybridcost/traffic.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace hybridcost;

namespace {

// JSON crosses the boundary as text; the Python side parses it with json.loads.
template <typename T>
std::string dump(const T& value) {
  return io::to_json(value).dump();
}

void bind_errors(py::module_& m) {
  // Translators run newest first, so the base goes in before the subclasses.
  const auto& base = py::register_exception<Error>(m, "HybridCostError");
  py::register_exception<ProfileShapeError>(m, "ProfileShapeError", base.ptr());
  py::register_exception<KindError>(m, "KindError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
}

void bind_inputs(py::module_& m) {
  py::class_<PartitionProfile>(m, "PartitionProfile")
      .def(py::init([](int pid, std::map<ConfigId, double> runtimes, bool classifier) {
             return PartitionProfile{pid, std::move(runtimes), classifier};
           }),
           "pid"_a, "runtimes"_a, "ends_in_classifier"_a = true)
      .def_readwrite("pid", &PartitionProfile::pid)
      .def_readwrite("runtimes", &PartitionProfile::runtimes)
      .def_readwrite("ends_in_classifier", &PartitionProfile::ends_in_classifier);

  py::class_<StagedModelProfile>(m, "StagedModelProfile")
      .def(py::init<std::string, double, std::vector<PartitionProfile>, int>(), "name"_a, "slo_seconds"_a,
           "partitions"_a, "batch_size"_a = 100)
      .def_property_readonly("name", &StagedModelProfile::name)
      .def_property_readonly("slo", &StagedModelProfile::slo)
      .def_property_readonly("batch_size", &StagedModelProfile::batch_size)
      .def_property_readonly("num_partitions", &StagedModelProfile::num_partitions)
      .def_property_readonly("partitions", &StagedModelProfile::partitions)
      .def("batch_runtime", &StagedModelProfile::batch_runtime, "pid"_a, "config"_a)
      .def("request_runtime", &StagedModelProfile::request_runtime, "pid"_a, "config"_a)
      .def("to_json", &dump<StagedModelProfile>);

  py::class_<ExitDistribution>(m, "ExitDistribution")
      .def(py::init<std::vector<double>, double, std::optional<double>>(), "fractions"_a, "conf_thres"_a = 1.0,
           "accuracy"_a = std::nullopt)
      .def_static(
          "from_conditional",
          [](const std::vector<double>& betas, double conf, std::optional<double> accuracy) {
            return ExitDistribution::from_conditional(betas, conf, accuracy);
          },
          "betas"_a, "conf_thres"_a = 1.0, "accuracy"_a = std::nullopt)
      .def_property_readonly("num_partitions", &ExitDistribution::num_partitions)
      .def_property_readonly("fractions", &ExitDistribution::fractions)
      .def_property_readonly("conf_thres", &ExitDistribution::conf_thres)
      .def_property_readonly("accuracy", &ExitDistribution::accuracy)
      .def("survival", &ExitDistribution::survival, "pid"_a)
      .def("conditional", &ExitDistribution::conditional)
      .def("to_json", &dump<ExitDistribution>);

  m.def("propagate_rates", &propagate_rates, "dist"_a, "n"_a);
  m.def("exits_per_partition", &exits_per_partition, "dist"_a, "n"_a);

  py::enum_<PlatformKind>(m, "PlatformKind")
      .value("VM", PlatformKind::kVm)
      .value("SERVERLESS", PlatformKind::kServerless);

  py::class_<PlatformConfig>(m, "PlatformConfig")
      .def(py::init([](ConfigId id, PlatformKind kind, double unit_price, int memory_mb, double vcpus,
                       double r_max) { return PlatformConfig{std::move(id), kind, unit_price, memory_mb, vcpus, r_max}; }),
           "id"_a, "kind"_a, "unit_price"_a, "memory_mb"_a = 0, "vcpus"_a = 0.0, "r_max"_a = 0.0)
      .def_readonly("id", &PlatformConfig::id)
      .def_readonly("kind", &PlatformConfig::kind)
      .def_readonly("unit_price", &PlatformConfig::unit_price)
      .def_readonly("memory_mb", &PlatformConfig::memory_mb)
      .def_readonly("vcpus", &PlatformConfig::vcpus)
      .def_readonly("r_max", &PlatformConfig::r_max);

  py::class_<PricingCatalog>(m, "PricingCatalog")
      .def(py::init<std::vector<PlatformConfig>, std::string, double>(), "configs"_a, "currency"_a = "USD",
           "offload_transmission_s"_a = 0.0)
      .def_property_readonly("configs", &PricingCatalog::configs)
      .def_property_readonly("currency", &PricingCatalog::currency)
      .def_property_readonly("offload_transmission_s", &PricingCatalog::offload_transmission_s)
      .def("at", &PricingCatalog::at, "id"_a, py::return_value_policy::copy)
      .def("warnings", &PricingCatalog::warnings)
      .def("to_json", &dump<PricingCatalog>);

  m.def("serverless_unit_price", &serverless_unit_price, "memory_mb"_a, "price_per_gb_second"_a);
  m.def("vm_epoch_cost", &vm_epoch_cost, "config"_a, "slo_seconds"_a);

  m.def("load_profile", &io::load_profile, "path"_a);
  m.def("load_exit_distribution", &io::load_exit_distribution, "path"_a);
  m.def("load_exit_family", &io::load_exit_family, "path"_a);
  m.def("load_pricing", &io::load_pricing, "path"_a);
  m.def("load_plan", &io::load_plan, "path"_a);
  m.def("load_trace", &io::load_trace, "path"_a, "epoch_seconds"_a = 6.0);
}

void bind_costs(py::module_& m) {
  py::enum_<Setup>(m, "Setup")
      .value("IAAS_ONLY", Setup::kIaaSOnly)
      .value("FAAS_ONLY", Setup::kFaaSOnly)
      .value("HYBRID", Setup::kHybrid);

  py::enum_<SpillBilling>(m, "SpillBilling")
      .value("EXPLICIT", SpillBilling::kExplicit)
      .value("STRICT", SpillBilling::kStrict);

  py::class_<CostOptions>(m, "CostOptions")
      .def(py::init([](SpillBilling spill, double transmission_s) { return CostOptions{spill, transmission_s}; }),
           "spill"_a = SpillBilling::kExplicit, "transmission_s"_a = 0.0)
      .def_readwrite("spill", &CostOptions::spill)
      .def_readwrite("transmission_s", &CostOptions::transmission_s);

  py::class_<SetupSpec>(m, "SetupSpec")
      .def(py::init([](Setup setup, std::optional<ConfigId> theta_i, std::optional<ConfigId> theta_f,
                       std::optional<int> cut_id) { return SetupSpec{setup, theta_i, theta_f, cut_id}; }),
           "setup"_a, "theta_i"_a = std::nullopt, "theta_f"_a = std::nullopt, "cut_id"_a = std::nullopt)
      .def_readwrite("setup", &SetupSpec::setup)
      .def_readwrite("theta_i", &SetupSpec::theta_i)
      .def_readwrite("theta_f", &SetupSpec::theta_f)
      .def_readwrite("cut_id", &SetupSpec::cut_id);

  py::class_<CostBreakdown>(m, "CostBreakdown")
      .def_readonly("setup", &CostBreakdown::setup)
      .def_readonly("vm_cost", &CostBreakdown::vm_cost)
      .def_readonly("faas_cost", &CostBreakdown::faas_cost)
      .def_readonly("total", &CostBreakdown::total)
      .def_readonly("vm_count", &CostBreakdown::vm_count)
      .def_readonly("cut_id", &CostBreakdown::cut_id)
      .def_readonly("spill_requests", &CostBreakdown::spill_requests)
      .def("to_json", &dump<CostBreakdown>)
      .def("__repr__", [](const CostBreakdown& c) {
        return "<CostBreakdown " + to_string(c.setup) + " total=" + io::format_double(c.total) + ">";
      });

  py::class_<VmSizing>(m, "VmSizing")
      .def_readonly("base", &VmSizing::base)
      .def_readonly("residual", &VmSizing::residual)
      .def_readonly("count", &VmSizing::count)
      .def_readonly("spill", &VmSizing::spill);

  m.def("size_vms", &size_vms, "n"_a, "r_max"_a, "t_cip"_a);
  m.def("faas_seconds", &faas_seconds, "profile"_a, "dist"_a, "theta_f"_a, "n"_a, "first_pid"_a = 1);
  m.def("cost_faas_only", &cost_faas_only, "n"_a, "profile"_a, "dist"_a, "theta_f"_a);
  m.def("cost_iaas_only",
        py::overload_cast<double, double, const PlatformConfig&, double, double>(&cost_iaas_only), "n"_a,
        "r_max"_a, "theta_i"_a, "slo"_a, "t_cip"_a);
  m.def("cost_hybrid", &cost_hybrid, "n"_a, "r_max"_a, "theta_i"_a, "theta_f"_a, "cut_id"_a, "profile"_a,
        "dist"_a, "slo"_a, "t_cip"_a, "options"_a = CostOptions{});
  m.def("evaluate_setup", &evaluate_setup, "spec"_a, "n"_a, "r_max"_a, "slo"_a, "t_cip"_a, "profile"_a, "dist"_a,
        "pricing"_a, "options"_a = CostOptions{});
}

void bind_configurator(py::module_& m) {
  py::class_<DeploymentPlan>(m, "DeploymentPlan")
      .def(py::init([](Setup setup, std::optional<ConfigId> theta_i, std::optional<ConfigId> theta_f,
                       std::optional<int> cut_id, double t_cip, double r_max) {
             DeploymentPlan plan{setup, theta_i, theta_f, cut_id, t_cip, r_max};
             plan.validate();
             return plan;
           }),
           "setup"_a, "theta_i"_a = std::nullopt, "theta_f"_a = std::nullopt, "cut_id"_a = std::nullopt,
           "t_cip"_a = 0.0, "r_max"_a = 100.0)
      .def_readonly("setup", &DeploymentPlan::setup)
      .def_readonly("theta_i", &DeploymentPlan::theta_i)
      .def_readonly("theta_f", &DeploymentPlan::theta_f)
      .def_readonly("cut_id", &DeploymentPlan::cut_id)
      .def_readonly("t_cip", &DeploymentPlan::t_cip)
      .def_readonly("r_max", &DeploymentPlan::r_max)
      .def("pool", &DeploymentPlan::pool)
      .def("spec", &DeploymentPlan::spec)
      .def("to_json", &dump<DeploymentPlan>);

  py::class_<FeasibilityRow>(m, "FeasibilityRow")
      .def_readonly("spec", &FeasibilityRow::spec)
      .def_readonly("worst_case_seconds", &FeasibilityRow::worst_case_seconds)
      .def_readonly("feasible", &FeasibilityRow::feasible);

  const auto cut_range = [](int first, int last) { return CutRange{first, last}; };
  m.def(
      "evaluate_feasibility",
      [cut_range](const StagedModelProfile& p, const PricingCatalog& c, double r_max, double slo, int first,
                  int last) { return evaluate_feasibility(p, c, r_max, slo, cut_range(first, last)); },
      "profile"_a, "pricing"_a, "r_max"_a, "slo"_a, "cut_first"_a = 1, "cut_last"_a = 0);
  m.def(
      "slo_feasible",
      [cut_range](const StagedModelProfile& p, const PricingCatalog& c, double r_max, double slo, int first,
                  int last) { return slo_feasible(p, c, r_max, slo, cut_range(first, last)); },
      "profile"_a, "pricing"_a, "r_max"_a, "slo"_a, "cut_first"_a = 1, "cut_last"_a = 0);
  m.def("find_t_cip", &find_t_cip, "spec"_a, "profile"_a, "dist"_a, "pricing"_a, "r_max"_a, "slo"_a,
        "options"_a = CostOptions{});
  m.def("resolve_t_cip", &resolve_t_cip, "spec"_a, "profile"_a, "dist"_a, "pricing"_a, "r_max"_a, "slo"_a,
        "options"_a = CostOptions{});

  py::class_<PlanChoice>(m, "PlanChoice")
      .def_readonly("plan", &PlanChoice::plan)
      .def_readonly("iaas_plan", &PlanChoice::iaas_plan)
      .def_readonly("faas_plan", &PlanChoice::faas_plan)
      .def_readonly("hybrid_plan", &PlanChoice::hybrid_plan)
      .def_readonly("iaas", &PlanChoice::iaas)
      .def_readonly("faas", &PlanChoice::faas)
      .def_readonly("hybrid", &PlanChoice::hybrid)
      .def_readonly("chosen", &PlanChoice::chosen);

  m.def("select_plan", &select_plan, "profile"_a, "dist"_a, "feasible"_a, "pricing"_a, "n"_a, "r_max"_a, "slo"_a,
        "options"_a = CostOptions{});

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("x", &SweepPoint::x)
      .def_readonly("iaas", &SweepPoint::iaas)
      .def_readonly("faas", &SweepPoint::faas)
      .def_readonly("hybrid", &SweepPoint::hybrid);

  py::class_<Crossing>(m, "Crossing")
      .def_readonly("a", &Crossing::a)
      .def_readonly("b", &Crossing::b)
      .def_readonly("x", &Crossing::x)
      .def_readonly("sign_after", &Crossing::sign_after);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("points", &SweepResult::points)
      .def_readonly("crossings", &SweepResult::crossings)
      .def("to_csv", [](const SweepResult& r) { return io::sweep_to_csv(r); });

  // Keyword form of SweepContext; the specs default to the roles with no config.
  m.def(
      "sweep",
      [](const std::string& axis, const std::vector<double>& grid, const StagedModelProfile& profile,
         const PricingCatalog& pricing, const SetupSpec& iaas, const SetupSpec& faas, const SetupSpec& hybrid,
         std::optional<ExitDistribution> dist, std::vector<ExitDistribution> family, double n, double r_max,
         double slo, std::optional<double> t_cip_iaas, std::optional<double> t_cip_hybrid,
         const CostOptions& options, std::optional<std::vector<std::pair<Setup, Setup>>> pairs) {
        SweepContext ctx;
        ctx.profile = &profile;
        ctx.pricing = &pricing;
        ctx.iaas = iaas;
        ctx.faas = faas;
        ctx.hybrid = hybrid;
        ctx.dist = std::move(dist);
        ctx.family = std::move(family);
        ctx.n = n;
        ctx.r_max = r_max;
        ctx.slo = slo;
        ctx.t_cip_iaas = t_cip_iaas;
        ctx.t_cip_hybrid = t_cip_hybrid;
        ctx.options = options;
        if (pairs) ctx.pairs = *pairs;
        return sweep(sweep_axis_from_string(axis), grid, ctx);
      },
      "axis"_a, "grid"_a, "profile"_a, "pricing"_a, "iaas"_a, "faas"_a, "hybrid"_a, "dist"_a = std::nullopt,
      "family"_a = std::vector<ExitDistribution>{}, "n"_a = 100.0, "r_max"_a = 100.0, "slo"_a = 6.0,
      "t_cip_iaas"_a = std::nullopt, "t_cip_hybrid"_a = std::nullopt, "options"_a = CostOptions{},
      "pairs"_a = std::nullopt);
}

void bind_online(py::module_& m) {
  py::class_<MonitorState>(m, "MonitorState")
      .def(py::init(&make_monitor), "w_mu"_a = 0.5, "w_sigma"_a = 0.5, "phi"_a = 1.0, "mu"_a = 0.0,
           "sigma"_a = 0.0)
      .def_readonly("mu", &MonitorState::mu)
      .def_readonly("sigma", &MonitorState::sigma)
      .def_readonly("w_mu", &MonitorState::w_mu)
      .def_readonly("w_sigma", &MonitorState::w_sigma)
      .def_readonly("phi", &MonitorState::phi)
      .def("threshold", &MonitorState::threshold)
      .def("update", &update, "lambda_"_a);

  py::class_<ScaleDecision>(m, "ScaleDecision")
      .def_readonly("k", &ScaleDecision::k)
      .def_readonly("residual", &ScaleDecision::residual)
      .def_readonly("target", &ScaleDecision::target);

  m.def("scale_target", &scale_target, "state"_a, "r_max"_a, "t_cip"_a);

  py::class_<EpochRouting>(m, "EpochRouting")
      .def_readonly("epoch", &EpochRouting::epoch)
      .def_readonly("arrivals", &EpochRouting::arrivals)
      .def_readonly("vm_batches", &EpochRouting::vm_batches)
      .def_readonly("faas_batches", &EpochRouting::faas_batches)
      .def_readonly("threshold", &EpochRouting::threshold)
      .def("vm_requests", &EpochRouting::vm_requests)
      .def("faas_requests", &EpochRouting::faas_requests);

  m.def("route_epoch", &route_epoch, "arrivals"_a, "healthy"_a, "r_max"_a, "threshold"_a = 0.0, "epoch"_a = 0);
}

void bind_simulation(py::module_& m) {
  py::class_<TrafficTrace>(m, "TrafficTrace")
      .def(py::init([](std::vector<std::int64_t> epochs, double epoch_seconds, std::string source) {
             return TrafficTrace{std::move(epochs), epoch_seconds, std::move(source)};
           }),
           "epochs"_a, "epoch_seconds"_a = 6.0, "source"_a = "<memory>")
      .def_readonly("epochs", &TrafficTrace::epochs)
      .def_readonly("epoch_seconds", &TrafficTrace::epoch_seconds)
      .def_readonly("source", &TrafficTrace::source);

  m.def("trace_hash", &trace_hash, "trace"_a);

  py::enum_<ExitMode>(m, "ExitMode")
      .value("EXPECTED", ExitMode::kExpected)
      .value("LARGEST_REMAINDER", ExitMode::kLargestRemainder)
      .value("MULTINOMIAL", ExitMode::kMultinomial);

  py::class_<SimParams>(m, "SimParams")
      .def(py::init([](std::int64_t scale_interval, std::int64_t cold_start, std::int64_t jitter, double w_mu,
                       double w_sigma, double phi, std::optional<double> t_cip, std::optional<double> r_max,
                       std::uint64_t seed, ExitMode exit_mode, bool warm_start,
                       std::optional<std::int64_t> max_epochs) {
             SimParams p{scale_interval, cold_start, jitter, w_mu, w_sigma, phi, t_cip, r_max,
                         seed,           exit_mode,  warm_start, max_epochs};
             p.validate();
             return p;
           }),
           "scale_interval_epochs"_a = 25, "cold_start_epochs"_a = 19, "cold_start_jitter_epochs"_a = 0,
           "w_mu"_a = 0.5, "w_sigma"_a = 0.5, "phi"_a = 1.0, "t_cip"_a = std::nullopt, "r_max"_a = std::nullopt,
           "seed"_a = 0, "exit_mode"_a = ExitMode::kExpected, "warm_start"_a = false,
           "max_epochs"_a = std::nullopt)
      .def_readonly("scale_interval_epochs", &SimParams::scale_interval_epochs)
      .def_readonly("cold_start_epochs", &SimParams::cold_start_epochs)
      .def_readonly("seed", &SimParams::seed)
      .def_readonly("exit_mode", &SimParams::exit_mode)
      .def("to_json", &dump<SimParams>);

  py::class_<EpochRow>(m, "EpochRow")
      .def_readonly("epoch", &EpochRow::epoch)
      .def_readonly("lambda_", &EpochRow::lambda)
      .def_readonly("mu", &EpochRow::mu)
      .def_readonly("sigma", &EpochRow::sigma)
      .def_readonly("healthy", &EpochRow::healthy)
      .def_readonly("provisioned", &EpochRow::provisioned)
      .def_readonly("target", &EpochRow::target)
      .def_readonly("routing", &EpochRow::routing)
      .def_readonly("vm_cost", &EpochRow::vm_cost)
      .def_readonly("faas_cost", &EpochRow::faas_cost)
      .def_readonly("violations", &EpochRow::violations)
      .def("cost", &EpochRow::cost);

  py::class_<ScaleEvent>(m, "ScaleEvent")
      .def_readonly("epoch", &ScaleEvent::epoch)
      .def_readonly("from_", &ScaleEvent::from)
      .def_readonly("to", &ScaleEvent::to)
      .def_readonly("ready_epoch", &ScaleEvent::ready_epoch);

  py::class_<SimTotals>(m, "SimTotals")
      .def_readonly("vm_cost", &SimTotals::vm_cost)
      .def_readonly("faas_cost", &SimTotals::faas_cost)
      .def_readonly("total", &SimTotals::total)
      .def_readonly("violations", &SimTotals::violations)
      .def_readonly("arrivals", &SimTotals::arrivals)
      .def_readonly("vm_requests", &SimTotals::vm_requests)
      .def_readonly("faas_requests", &SimTotals::faas_requests);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("plan", &SimReport::plan)
      .def_readonly("t_cip", &SimReport::t_cip)
      .def_readonly("r_max", &SimReport::r_max)
      .def_readonly("trace_hash", &SimReport::trace_hash)
      .def_readonly("rows", &SimReport::rows)
      .def_readonly("scale_events", &SimReport::scale_events)
      .def_readonly("totals", &SimReport::totals)
      .def("to_json", &dump<SimReport>)
      .def("to_csv", [](const SimReport& r) { return io::report_to_csv(r); });

  py::class_<PoolResult>(m, "PoolResult")
      .def_readonly("plan", &PoolResult::plan)
      .def_readonly("totals", &PoolResult::totals);

  py::class_<PoolComparison>(m, "PoolComparison")
      .def_readonly("ranked", &PoolComparison::ranked)
      .def_readonly("percent", &PoolComparison::percent)
      .def_readonly("reports", &PoolComparison::reports);

  // Replays are pure C++; release the GIL so callers can run several in threads.
  m.def("replay", &replay, "trace"_a, "plan"_a, "profile"_a, "dist"_a, "pricing"_a, "params"_a = SimParams{},
        py::call_guard<py::gil_scoped_release>());
  m.def("compare_pools", &compare_pools, "trace"_a, "plans"_a, "profile"_a, "dist"_a, "pricing"_a,
        "params"_a = SimParams{}, py::call_guard<py::gil_scoped_release>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cost model, configurator and trace replay for hybrid VM and serverless inference pools";
  bind_errors(m);
  bind_inputs(m);
  bind_costs(m);
  bind_configurator(m);
  bind_online(m);
  bind_simulation(m);
}
