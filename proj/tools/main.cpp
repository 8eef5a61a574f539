#include "scenario.hpp"

#include <stochconv/serialization.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  namespace app = stochconv::app;

  CLI::App cli{"stochconv: stochastic convolution experiments"};
  std::string experiment;
  std::string config_path;
  std::string out = ".";
  app::RunOptions opts;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  cli.add_option("experiment", experiment, "experiment or subcommand")
      ->required()
      ->check(CLI::IsMember(app::experiment_names()));
  cli.add_option("--config", config_path, "scenario JSON")->required();
  cli.add_option("--out", out, "output directory, or a .json/.csv file for the main artifact");
  cli.add_flag("--check", opts.check, "exit 2 when an invariant fails");
  auto* seed_opt = cli.add_option("--seed", seed, "override the config seed");
  cli.add_option("--threads", threads, "worker threads (default: hardware)");
  cli.add_option("--method", opts.method, "convolve: direct, factorized or both")
      ->check(CLI::IsMember({"direct", "factorized", "both"}));

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kSchemaViolation;
  }
  if (*seed_opt) {
    opts.seed = seed;
  }
  opts.threads = threads;

  try {
    const app::ScenarioConfig config = app::load_config(config_path);
    const app::ArtifactBundle bundle = app::run_scenario(experiment, config, opts);
    for (const auto& path : app::write_bundle(bundle, out)) {
      std::cout << "wrote " << path << "\n";
    }
    for (const auto& msg : bundle.messages) {
      std::cerr << msg << "\n";
    }
    return bundle.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return app::kSchemaViolation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return app::kSchemaViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
