#include "metaes/cli.hpp"

#include "metaes/report_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace metaes::cli {
namespace {

std::string hex(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

nlohmann::json json_number(double value) {
  if (std::isfinite(value)) return value;
  return io::format_double(value);
}

RunConfig defaults_for(bool large_profile) {
  RunConfig cfg;
  if (large_profile) apply_large_profile(cfg);
  return cfg;
}

}  // namespace

std::filesystem::path resolve_outdir(const RunConfig& cfg) {
  if (const char* env = std::getenv("METAES_OUTDIR"); env != nullptr && *env != '\0') return env;
  return cfg.outdir;
}

exec::RunReport execute(const RunConfig& cfg) {
  const auto objective = bench::make_objective(cfg.function, cfg.dimension, cfg.objective_seed());
  if (cfg.algorithm == Algorithm::lmcma_serial) return exec::run_serial(*objective, serial_options(cfg));
  return exec::run_meta(*objective, meta_options(cfg));
}

void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg, const exec::RunReport& report) {
  io::write_trace(dir / "trace.csv", io::trace_rows(report, cfg.reproducible));

  std::size_t failed_epochs = 0, failed_slots = 0;
  for (const auto& r : report.records) {
    failed_epochs += r.epoch_failed ? 1 : 0;
    failed_slots += r.failed_slots;
  }
  nlohmann::json summary;
  summary["function"] = bench::name(cfg.function);
  summary["algorithm"] = to_string(cfg.algorithm);
  summary["dimension"] = cfg.dimension;
  summary["seed"] = cfg.seed;
  summary["f_best"] = json_number(report.f_best);
  summary["evals"] = report.evals;
  summary["wall_s"] = report.wall_s;
  summary["records"] = report.records.size();
  summary["reached_threshold"] = report.reached_threshold;
  summary["failed_epochs"] = failed_epochs;
  summary["failed_slots"] = failed_slots;
  summary["config_hash"] = hex(config_hash(cfg));
  summary["config"] = nlohmann::json::parse(canonical_json(cfg));
  summary["x_best"] = std::vector<double>(report.x_best.data(), report.x_best.data() + report.x_best.size());
  io::write_text(dir / "summary.json", summary.dump(2) + "\n");
}

int cmd_run(const std::filesystem::path& config_path, bool large_profile, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path, defaults_for(large_profile));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const std::filesystem::path dir = resolve_outdir(cfg);
    const exec::RunReport report = execute(cfg);
    write_artifacts(dir, cfg, report);
    out << bench::name(cfg.function) << ' ' << to_string(cfg.algorithm) << " f_best=" << io::format_double(report.f_best)
        << " evals=" << report.evals << " -> " << (dir / "trace.csv").string() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "config error: " << config_path.string() << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_bench(const std::filesystem::path& suite_path, bool large_profile, std::ostream& out, std::ostream& err) {
  SuiteConfig suite;
  try {
    suite = load_suite_config(suite_path, defaults_for(large_profile));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::filesystem::path root = resolve_outdir(suite.base);
  std::vector<io::CellOutcome> cells;
  std::size_t failures = 0;
  for (bench::FunctionId function : suite.functions) {
    for (Algorithm algorithm : suite.algorithms) {
      for (std::uint64_t seed : suite.seeds) {
        RunConfig cfg = suite.base;
        cfg.function = function;
        cfg.algorithm = algorithm;
        cfg.seed = seed;
        io::CellOutcome cell{std::string(bench::name(function)), std::string(to_string(algorithm)), seed, false, {}};
        const std::filesystem::path dir = root / cell.function / cell.algorithm / ("seed_" + std::to_string(seed));
        try {
          const exec::RunReport report = execute(cfg);
          write_artifacts(dir, cfg, report);
          cell.rows = io::trace_rows(report, cfg.reproducible);
          out << cell.function << ' ' << cell.algorithm << " seed=" << seed
              << " f_best=" << io::format_double(report.f_best) << '\n';
        } catch (const std::exception& e) {
          cell.failed = true;
          ++failures;
          err << cell.function << ' ' << cell.algorithm << " seed=" << seed << " failed: " << e.what() << '\n';
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  try {
    io::write_text(root / "medians.csv", io::format_medians(io::median_table(cells)));
  } catch (const std::exception& e) {
    err << "cannot write medians: " << e.what() << '\n';
    return kExitRuntime;
  }
  return failures == 0 ? kExitOk : kExitRuntime;
}

int cmd_plot(const std::vector<std::filesystem::path>& traces, const std::filesystem::path& out_svg,
             plot::XAxis x_axis, std::ostream& out, std::ostream& err) {
  if (traces.empty()) {
    err << "plot needs at least one trace\n";
    return kExitConfig;
  }
  std::vector<plot::Series> series;
  try {
    for (const auto& path : traces) {
      // Label by the directory layout when the file is a plain trace.csv.
      std::string label = path.stem().string();
      if (path.filename() == "trace.csv" && path.has_parent_path()) label = path.parent_path().string();
      series.push_back({label, io::read_trace(path)});
    }
  } catch (const io::TraceError& e) {
    err << "bad trace: " << e.what() << '\n';
    return kExitRuntime;
  }
  try {
    io::write_text(out_svg, plot::render_svg(series, x_axis));
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitRuntime;
  }
  out << "wrote " << out_svg.string() << '\n';
  return kExitOk;
}

}  // namespace metaes::cli
