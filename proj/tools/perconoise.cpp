#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "perconoise/experiments.hpp"
#include "perconoise/oracle_suite.hpp"
#include "perconoise/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"continuum percolation noise experiments"};
  app.require_subcommand(1);

  std::string spec_path, out_dir = "out", report_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = perconoise::default_threads();

  CLI::App* run = app.add_subcommand("run", "run an experiment described by a spec file");
  run->add_option("--spec", spec_path, "experiment spec file")->required();
  run->add_option("--seed", seed, "override the spec's seed")->each([&](const std::string&) {
    seed_given = true;
  });
  run->add_option("--threads", threads, "worker threads");
  run->add_option("--out-dir", out_dir, "output directory");

  CLI::App* oracle = app.add_subcommand(
      "oracle-suite", "run every exact and exhaustive cross-module check");
  oracle->add_option("--threads", threads, "worker threads");
  oracle->add_option("--out", report_path, "also write the report to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto spec = perconoise::ExperimentSpec::parse_file(spec_path);
      perconoise::run_experiment(spec, out_dir, seed, seed_given, threads);
      return 0;
    }
    if (oracle->parsed()) {
      int failures = 0;
      if (!report_path.empty()) {
        std::ofstream file(report_path);
        failures = perconoise::run_oracle_suite(file, threads);
        std::ifstream back(report_path);
        std::cout << back.rdbuf();
      } else {
        failures = perconoise::run_oracle_suite(std::cout, threads);
      }
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
