#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qepi/errors.hpp"
#include "qepi/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qepi: entropy power inequality check suites"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Execute a check suite");
  std::string suite, config_path, out_path, format;
  std::uint64_t seed = 0;
  int trials = 0;
  run->add_option("--suite", suite, "Suite name or 'all'");
  run->add_option("--config", config_path, "Config file (key=value lines)");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--trials", trials, "Trial count");
  run->add_option("--out", out_path, "Report output path");
  run->add_option("--format", format, "Report format: csv or jsonl");

  // describe
  auto* describe = app.add_subcommand("describe", "Summarize a state spec");
  std::string spec;
  int cutoff = 24;
  describe->add_option("spec", spec, "State spec, e.g. \"thermal(1)*vacuum\"")
      ->required();
  describe->add_option("--cutoff", cutoff, "Per-mode Fock cutoff");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      qepi::RunConfig cfg;
      if (!config_path.empty()) cfg = qepi::parse_config_file(config_path);
      // flags override the config file
      if (run->count("--suite")) cfg.suite = suite;
      if (run->count("--seed")) cfg.seed = seed;
      if (run->count("--trials")) cfg.trials = trials;
      if (run->count("--out")) cfg.out = out_path;
      if (run->count("--format")) cfg.format = format;
      const int status = qepi::run_suite(cfg);
      std::cout << "report: " << qepi::output_path(cfg) << "\n";
      std::cout << (status == 0 ? "all normative checks passed"
                                : "normative check failure")
                << "\n";
      return status;
    }
    std::cout << qepi::describe_state(spec, cutoff);
    return 0;
  } catch (const qepi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
