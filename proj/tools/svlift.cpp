#include "svlift/experiments.h"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Markovian-lift simulator and verifier for stochastic Volterra equations"};
  svlift::RunRequest req;
  std::uint64_t seed = 0;
  app.add_option("subcommand", req.subcommand, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(svlift::subcommands()));
  app.add_option("--config", req.config_path, "Experiment config file")->required();
  app.add_option("--out", req.out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--threads", req.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--assert", req.assert_mode, "Exit with status 4 when the experiment's check fails");
  app.set_version_flag("--version", std::string("svlift ") + svlift::kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : svlift::kExitConfig;
  }
  if (*seed_opt) req.seed = seed;
  return svlift::run_experiment(req, std::cerr);
}
