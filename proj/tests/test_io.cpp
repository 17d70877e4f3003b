#include <gtest/gtest.h>

#include <fstream>

#include "hybridcost/error.hpp"
#include "hybridcost/io.hpp"
#include "support.hpp"

namespace hybridcost {
namespace {

using io::json;
using namespace hybridcost::testing;

TEST(IoProfile, RoundTrip) {
  const auto profile = vgg_profile();
  const auto back = io::profile_from_json(io::to_json(profile));
  EXPECT_EQ(back.num_partitions(), 7);
  EXPECT_EQ(back.batch_size(), 100);
  EXPECT_EQ(back.batch_runtime(6, "c6i.large"), 3.0);
  EXPECT_EQ(io::to_json(back), io::to_json(profile));
}

TEST(IoProfile, MissingFieldNamesSource) {
  try {
    io::profile_from_json(json::parse(R"({"partitions": []})"), "p.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("p.json"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("slo_seconds"), std::string::npos);
  }
}

TEST(IoDistribution, FractionsOrBetas) {
  const auto f = io::exit_distribution_from_json(json::parse(R"({"conf_thres": 0.7, "fractions": [0.6, 0.3, 0.1]})"));
  EXPECT_EQ(f.conf_thres(), 0.7);
  const auto b = io::exit_distribution_from_json(json::parse(R"({"betas": [0.6, 0.75, 0.0]})"));
  EXPECT_NEAR(b.fractions()[1], 0.3, 1e-15);
  EXPECT_THROW(io::exit_distribution_from_json(json::parse(R"({"conf_thres": 0.7})")), ParseError);
  EXPECT_THROW(io::exit_distribution_from_json(json::parse(R"({"fractions": [0.6, 0.3]})")), ParseError);
}

TEST(IoDistribution, FamilyForms) {
  const auto arr = io::exit_family_from_json(json::parse(R"([{"conf_thres": 0.5, "fractions": [1.0]}])"));
  EXPECT_EQ(arr.size(), 1u);
  const auto obj =
      io::exit_family_from_json(json::parse(R"({"family": [{"conf_thres": 0.5, "fractions": [1.0]},
                                                          {"conf_thres": 0.6, "fractions": [1.0]}]})"));
  EXPECT_EQ(obj.size(), 2u);
  EXPECT_THROW(io::exit_family_from_json(json::parse("[]")), ParseError);
}

TEST(IoPricing, PriceForms) {
  const auto catalog = io::pricing_from_json(json::parse(R"({
    "currency": "EUR", "offload_transmission_s": 0.05,
    "configs": [
      {"id": "a", "kind": "vm", "price_per_hour": 0.36},
      {"id": "b", "kind": "vm", "unit_price_per_s": 0.001, "r_max": 50},
      {"id": "f", "kind": "serverless", "memory_mb": 2048, "price_per_gb_s": 0.00002}
    ]})"));
  EXPECT_EQ(catalog.currency(), "EUR");
  EXPECT_EQ(catalog.offload_transmission_s(), 0.05);
  EXPECT_NEAR(catalog.at("a").unit_price, 0.0001, 1e-18);
  EXPECT_EQ(catalog.at("b").r_max, 50);
  EXPECT_NEAR(catalog.at("f").unit_price, 0.00004, 1e-18);
  EXPECT_THROW(io::pricing_from_json(json::parse(R"({"configs": [{"id": "x", "kind": "vm"}]})")), ParseError);
  EXPECT_THROW(io::pricing_from_json(json::parse(R"({"configs": [{"id": "x", "kind": "gpu", "unit_price_per_s": 1}]})")),
               ParseError);
}

TEST(IoPlan, RoundTripAndValidation) {
  const DeploymentPlan plan{Setup::kHybrid, "c6i.large", "faas-8845", 5, 58.75, 100};
  const auto back = io::plan_from_json(io::to_json(plan));
  EXPECT_EQ(back.setup, plan.setup);
  EXPECT_EQ(back.theta_i, plan.theta_i);
  EXPECT_EQ(back.cut_id, plan.cut_id);
  EXPECT_EQ(back.t_cip, plan.t_cip);
  EXPECT_TRUE(io::to_json(DeploymentPlan{Setup::kFaaSOnly, std::nullopt, "f", std::nullopt, 100, 100})["theta_i"]
                  .is_null());
  EXPECT_THROW(io::plan_from_json(json::parse(R"({"setup": "Hybrid", "theta_i": "a"})")), ParseError);
}

TEST(IoTrace, ParsesAndReportsLines) {
  const auto trace = io::trace_from_csv("epoch,requests\n0,5\n1,7\r\n# comment\n2,0\n", 6.0, "t.csv");
  EXPECT_EQ(trace.epochs, (std::vector<std::int64_t>{5, 7, 0}));
  EXPECT_EQ(io::trace_from_csv(io::trace_to_csv(trace), 6.0).epochs, trace.epochs);
  auto message = [](const std::string& text) {
    try {
      io::trace_from_csv(text, 6.0, "t.csv");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("epoch,requests\n0,5\n2,1\n").find("t.csv:3"), std::string::npos);
  EXPECT_NE(message("epoch,requests\n0,-5\n").find("t.csv:2"), std::string::npos);
  EXPECT_NE(message("epoch,requests\n0,abc\n").find("t.csv:2"), std::string::npos);
  EXPECT_NE(message("time,count\n0,1\n").find("t.csv:1"), std::string::npos);
  EXPECT_NE(message("epoch,requests\n").find("no epochs"), std::string::npos);
}

TEST(IoFiles, ParseErrorCarriesLine) {
  const auto dir = temp_dir("io");
  const auto path = dir / "bad.json";
  std::ofstream(path) << "{\n  \"slo_seconds\": 6,\n  \"partitions\": [,]\n}\n";
  try {
    io::load_profile(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::load_profile(dir / "missing.json"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST(IoFiles, AtomicWriteReplacesContent) {
  const auto dir = temp_dir("atomic");
  const auto path = dir / "out" / "plan.json";
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  EXPECT_EQ(io::read_file(path), "second");
  for (const auto& entry : std::filesystem::directory_iterator(dir / "out")) {
    EXPECT_EQ(entry.path().filename(), "plan.json");
  }
  std::filesystem::remove_all(dir);
}

TEST(IoCsv, SweepLayout) {
  SweepResult result;
  result.points.resize(2);
  result.points[0].x = 0.5;
  result.points[1].x = 0.6;
  result.points[1].hybrid.total = 0.25;
  result.crossings.push_back({Setup::kHybrid, Setup::kIaaSOnly, 0.55, 1});
  const auto csv = io::sweep_to_csv(result);
  EXPECT_EQ(csv, "x,C_I,C_F,C_H\n0.5,0,0,0\n0.6,0,0,0.25\n# crossing,Hybrid-IaaSOnly,0.55\n");
  const auto tidy = io::sweep_to_tidy_csv(result);
  EXPECT_EQ(tidy.substr(0, tidy.find('\n')), "axis,x,setup,vm_cost,faas_cost,total,vm_count");
  EXPECT_EQ(std::count(tidy.begin(), tidy.end(), '\n'), 7);
}

TEST(IoCsv, FullPrecisionNumbers) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace hybridcost
