#include "scenario.hpp"

#include <stochconv/parallel.hpp>
#include <stochconv/serialization.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

using namespace stochconv;
using namespace stochconv::app;
using nlohmann::json;

namespace {

json fubini_config(std::vector<double> atoms, std::vector<double> weights) {
  return {{"experiment", "fubini"},
          {"seed", 11},
          {"n_paths", 20},
          {"grid", {{"T", 1.0}, {"steps", 100}}},
          {"q", {1.0, 0.5}},
          {"family",
           {{"atoms", atoms},
            {"weights", weights},
            {"operator", {{"kind", "dense"}, {"rows", {{1.0, 0.2}, {0.0, 0.5}}}}}}}};
}

json ou_config() {
  return {{"experiment", "ou-check"},
          {"seed", 5},
          {"n_paths", 2000},
          {"grid", {{"T", 1.0}, {"steps", 200}}},
          {"q", {1.0}},
          {"semigroup", {{"kind", "diagonal"}, {"eigenvalues", {1.0}}}},
          {"export_paths", 2}};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(ParseConfig, Defaults) {
  const auto c = parse_config(json::object());
  EXPECT_EQ(c.u_dim(), 1u);
  EXPECT_EQ(c.h_dim(), 1u);
  EXPECT_EQ(c.grid().steps(), 100u);
  EXPECT_EQ(c.hash(), fnv1a_hex("{}"));
}

TEST(ParseConfig, SchemaViolations) {
  const std::vector<json> bad{
      json::array(),
      {{"n_paths", 0}},
      {{"n_paths", "many"}},
      {{"grid", {{"T", -1.0}}}},
      {{"grid", {{"steps", 0}}}},
      {{"q", json::array()}},
      {{"q", {1.0, -0.5}}},
      {{"beta", 1.0}},
      {{"beta", 0.0}},
      {{"exponents", {{"p", 0.5}}}},
      {{"exponents", {{"r", 1.0}}}},
      {{"semigroup", {{"kind", "dense"}, {"rows", {{1.0, 0.0}}}}}},
      {{"family", {{"weights", {1.0}}}}},
      {{"family", {{"atoms", {0.0, 1.0}}, {"weights", {1.0}}, {"operator", {{"kind", "diagonal"}, {"eigenvalues", {1.0}}}}}}},
      {{"kernel", {{"d2_weights", {1.0}}}}},
  };
  for (const auto& j : bad) {
    EXPECT_THROW(parse_config(j), SchemaError) << j.dump();
  }
}

TEST(ParseConfig, IntegrandKinds) {
  auto j = ou_config();
  j["integrand"] = {{"kind", "constant"}, {"operator", {{"kind", "diagonal"}, {"eigenvalues", {2.0}}}}};
  EXPECT_EQ(parse_config(j).build_integrand().kind(), IntegrandSpec::Kind::constant);
  j["integrand"] = {{"kind", "wiener_feedback"}, {"gain", 0.1}};
  EXPECT_EQ(parse_config(j).build_integrand().kind(), IntegrandSpec::Kind::adapted);
  j["integrand"] = {{"kind", "time_varying"}, {"operators", json::array()}};
  EXPECT_THROW(parse_config(j).build_integrand(), SchemaError);
  j["integrand"] = {{"kind", "mystery"}};
  EXPECT_THROW(parse_config(j).build_integrand(), SchemaError);
  j["integrand"] = {{"kind", "constant"}, {"operator", {{"kind", "diagonal"}, {"eigenvalues", {1.0, 2.0}}}}};
  EXPECT_THROW(parse_config(j).build_integrand(), SchemaError);
}

TEST(RunScenario, Constants) {
  const auto b = run_scenario("constants", parse_config({{"beta", 0.5}}), {.check = true});
  EXPECT_EQ(b.exit_code, kOk);
  EXPECT_EQ(b.primary, "constants.json");
  const json j = json::parse(b.files.at("constants.json"));
  EXPECT_EQ(j["schema"], kSchemaVersion);
  EXPECT_EQ(j["experiment"], "constants");
  EXPECT_NEAR(j["c_beta"].get<double>(), 1.0 / std::numbers::pi, 1e-12);
  EXPECT_LE(j["max_abs_error"].get<double>(), 1e-8);
  EXPECT_TRUE(b.files.count("c_beta.csv"));
}

TEST(RunScenario, FubiniSingleAtomHeadlineIsZero) {
  for (double w : {1.0, 0.3}) {
    const auto b = run_scenario("fubini", parse_config(fubini_config({0.5}, {w})), {.check = true});
    EXPECT_EQ(b.exit_code, kOk);
    EXPECT_EQ(json::parse(b.files.at("fubini.json"))["headline"].get<double>(), 0.0);
  }
  const auto many = run_scenario("fubini", parse_config(fubini_config({0.1, 0.4, 0.9}, {0.2, 0.3, 0.5})), {.check = true});
  EXPECT_LE(json::parse(many.files.at("fubini.json"))["relative"].get<double>(), 1e-10);
}

TEST(RunScenario, OuCheckReport) {
  const auto c = parse_config(ou_config());
  const auto b = run_scenario("ou-check", c, {.check = true});
  EXPECT_EQ(b.exit_code, kOk);
  const json j = json::parse(b.files.at("report.json"));
  EXPECT_EQ(j["config_hash"], c.hash());
  EXPECT_EQ(j["seed"], 5);
  EXPECT_TRUE(j["all_pass"].get<bool>());
  EXPECT_TRUE(b.files.count("variance.csv"));
  EXPECT_TRUE(b.files.count("paths.csv"));
}

TEST(RunScenario, SeedOverrideChangesHashAndOutput) {
  const auto c = parse_config(ou_config());
  const auto a = run_scenario("ou-check", c, {});
  const auto b = run_scenario("ou-check", c, {.seed = 6});
  EXPECT_NE(a.files.at("report.json"), b.files.at("report.json"));
  EXPECT_EQ(json::parse(b.files.at("report.json"))["seed"], 6);
}

TEST(RunScenario, DeterministicAcrossThreadCounts) {
  const auto c = parse_config(ou_config());
  const auto one = run_scenario("ou-check", c, {.threads = 1});
  for (std::size_t t : {2u, 4u, 8u}) {
    EXPECT_EQ(run_scenario("ou-check", c, {.threads = t}).files, one.files) << t;
  }
  set_worker_threads(1);
}

TEST(RunScenario, CheckModeReportsInvariantViolation) {
  const json j = {{"seed", 1},
                  {"n_paths", 50},
                  {"grid", {{"T", 1.0}, {"steps", 8}}},
                  {"levels", {2, 4, 8}},
                  {"semigroup", {{"kind", "diagonal"}, {"eigenvalues", {1.0}}}}};
  const auto c = parse_config(j);
  EXPECT_EQ(run_scenario("factorize-compare", c, {.check = true}).exit_code, kInvariantViolation);
  EXPECT_EQ(run_scenario("factorize-compare", c, {}).exit_code, kOk);
}

TEST(RunScenario, ConfigErrors) {
  EXPECT_THROW(run_scenario("nope", parse_config(json::object()), {}), SchemaError);
  EXPECT_THROW(run_scenario("ou-check", parse_config(json::object()), {}), SchemaError);
  auto j = ou_config();
  j["beta"] = 0.2;
  EXPECT_THROW(run_scenario("convolve", parse_config(j), {.method = "both"}), std::invalid_argument);
  EXPECT_THROW(run_scenario("convolve", parse_config(ou_config()), {.method = "spectral"}), SchemaError);
}

TEST(RunScenario, ConvolveMethods) {
  auto j = ou_config();
  j["n_paths"] = 5;
  const auto c = parse_config(j);
  const auto direct = run_scenario("convolve", c, {.method = "direct"});
  EXPECT_EQ(direct.primary, "direct.csv");
  EXPECT_FALSE(direct.files.count("factorized.csv"));
  const auto both = run_scenario("convolve", c, {.check = true, .method = "both"});
  EXPECT_EQ(both.exit_code, kOk);
  EXPECT_TRUE(both.files.count("discrepancy.json"));
  EXPECT_EQ(both.files.at("direct.csv"), direct.files.at("direct.csv"));
}

TEST(MeasureTrials, NoViolations) {
  const auto res = measure_property_trials(9, 200);
  EXPECT_TRUE(res.ok());
  EXPECT_EQ(res.trials, 200u);
  EXPECT_LE(res.max_holder_ratio, 1.0 + 1e-12);
  EXPECT_LE(res.max_minkowski_ratio, 1.0 + 1e-12);
}

TEST(WriteBundle, DirectoryAndFileTargets) {
  const auto dir = std::filesystem::temp_directory_path() / "stochconv_bundle_test";
  std::filesystem::remove_all(dir);
  ArtifactBundle b;
  b.files["a.json"] = "{}";
  b.files["b.csv"] = "x\n1\n";
  b.primary = "a.json";
  auto written = write_bundle(b, (dir / "out").string());
  EXPECT_EQ(written.size(), 2u);
  EXPECT_EQ(read_file(dir / "out" / "a.json"), "{}");
  written = write_bundle(b, (dir / "single" / "named.json").string());
  EXPECT_EQ(read_file(dir / "single" / "named.json"), "{}");
  EXPECT_EQ(read_file(dir / "single" / "b.csv"), "x\n1\n");
  std::filesystem::remove_all(dir);
}
