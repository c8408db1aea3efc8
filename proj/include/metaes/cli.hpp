#pragma once

#include "metaes/config.hpp"
#include "metaes/plot.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace metaes::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Output directory after applying the METAES_OUTDIR override.
std::filesystem::path resolve_outdir(const RunConfig& cfg);

/// Builds the objective and runs the configured algorithm.
exec::RunReport execute(const RunConfig& cfg);

/// Writes trace.csv and summary.json into `dir`.
void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg, const exec::RunReport& report);

int cmd_run(const std::filesystem::path& config_path, bool large_profile, std::ostream& out, std::ostream& err);

/// Runs every (function, algorithm, seed) cell sequentially into
/// <outdir>/<function>/<algorithm>/seed_<seed>/ and writes <outdir>/medians.csv.
/// A failing cell is recorded and the suite continues; the exit status is 1
/// if any cell failed.
int cmd_bench(const std::filesystem::path& suite_path, bool large_profile, std::ostream& out, std::ostream& err);

int cmd_plot(const std::vector<std::filesystem::path>& traces, const std::filesystem::path& out_svg,
             plot::XAxis x_axis, std::ostream& out, std::ostream& err);

}  // namespace metaes::cli
