// Command-line driver: run one configuration, a benchmark suite, or plot traces.

#include "metaes/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Distributed LM-CMA meta-ES runner"};
  app.require_subcommand(1);

  std::string profile = "desk";
  app.add_option("--profile", profile, "Defaults to start from: desk, or large (n=2000, 380 workers, hours)")
      ->check(CLI::IsMember({"desk", "large"}));

  std::filesystem::path run_config;
  auto* run = app.add_subcommand("run", "Run one optimizer configuration");
  run->add_option("config", run_config, "YAML run configuration")->required();

  std::filesystem::path suite_config;
  auto* bench = app.add_subcommand("bench", "Run a (function x algorithm x seed) grid");
  bench->add_option("suite", suite_config, "YAML suite configuration")->required();

  std::vector<std::filesystem::path> traces;
  std::filesystem::path svg;
  bool by_time = false;
  auto* plot = app.add_subcommand("plot", "Render convergence traces to SVG");
  plot->add_option("traces", traces, "trace.csv files")->required();
  plot->add_option("-o,--output", svg, "Output SVG path")->required();
  plot->add_flag("--time", by_time, "Use wall-clock seconds on the x axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : metaes::cli::kExitConfig;
  }
  const bool large_profile = profile == "large";

  using namespace metaes::cli;
  if (*run) return cmd_run(run_config, large_profile, std::cout, std::cerr);
  if (*bench) return cmd_bench(suite_config, large_profile, std::cout, std::cerr);
  return cmd_plot(traces, svg, by_time ? metaes::plot::XAxis::wall_seconds : metaes::plot::XAxis::evaluations,
                  std::cout, std::cerr);
}
