#pragma once

#include "metaes/benchfuncs.hpp"
#include "metaes/exec.hpp"
#include "metaes/meta.hpp"
#include "metaes/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace metaes::cli {

enum class Algorithm { lmcma_serial, dlmcma };

std::string_view to_string(Algorithm algorithm) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view text) noexcept;

/// Invalid configuration. The message names the file, line and key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  bench::FunctionId function = bench::FunctionId::sphere;
  std::size_t dimension = 32;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> instance_seed;  // rotation and shift; defaults to seed
  Algorithm algorithm = Algorithm::dlmcma;
  std::size_t lambda_prime = 8;
  std::optional<std::size_t> mu_prime;
  IsolationBudget isolation{BudgetMode::max_evaluations, 2000.0};
  exec::TotalBudget budget{BudgetMode::max_evaluations, 2e5};
  double threshold = 1e-10;
  std::optional<double> sigma0;
  std::optional<double> sigma_max;
  std::optional<meta::NeRange> ne_range;
  meta::Box init_box;
  std::size_t pool_size = 1;
  meta::Normalizer normalizer = meta::Normalizer::literal;
  std::size_t stagnation_epochs = 0;
  std::size_t inner_lambda = 19;
  bool reproducible = true;  // trace.csv carries no timing; wall-clock budgets rejected
  std::filesystem::path outdir = "out";

  std::uint64_t objective_seed() const noexcept { return instance_seed.value_or(seed); }
};

/// Large-scale defaults: n = 2000, lambda' = 380, 150 s isolation, 3 h total,
/// not reproducible.
void apply_large_profile(RunConfig& cfg);

/// Parses a flat YAML mapping on top of `defaults`. Unknown keys, wrong types
/// and out-of-range values raise ConfigError.
RunConfig parse_run_config(const std::string& text, const std::string& source, RunConfig defaults = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig defaults = {});

struct SuiteConfig {
  std::vector<bench::FunctionId> functions;
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> seeds;
  RunConfig base;  // every cell copies this and sets function, algorithm, seed
};

/// Same keys as a run config plus the lists `functions`, `algorithms` and
/// `seeds` (a list or a count, 0..count-1). `function`, `algorithm` and `seed`
/// are not allowed at the top level.
SuiteConfig parse_suite_config(const std::string& text, const std::string& source, RunConfig defaults = {});
SuiteConfig load_suite_config(const std::filesystem::path& path, RunConfig defaults = {});

/// Checks cross-field constraints; throws ConfigError.
void validate(const RunConfig& cfg, const std::string& source);

/// Canonical JSON text of every resolved field, sorted by key.
std::string canonical_json(const RunConfig& cfg);

/// 64-bit FNV-1a of canonical_json(cfg).
std::uint64_t config_hash(const RunConfig& cfg);

exec::MetaOptions meta_options(const RunConfig& cfg);
exec::SerialOptions serial_options(const RunConfig& cfg);

}  // namespace metaes::cli
