#pragma once

#include "metaes/lmcma.hpp"
#include "metaes/meta.hpp"
#include "metaes/seeding.hpp"
#include "metaes/types.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace metaes::exec {

/// Returns the 1-based evaluation at which slot `index` of `epoch` should
/// throw, or nothing to let it run. Used to exercise failure handling.
using FaultInjector = std::function<std::optional<std::uint64_t>(std::uint64_t epoch, std::size_t index)>;

struct EpochOptions {
  std::size_t pool_size = 1;
  IsolationBudget budget;
  lmcma::RunOptions inner;
  std::uint64_t epoch = 0;  // only passed to the fault injector
  FaultInjector fault;
};

/// Runs every configuration through run_inner on a pool of worker threads.
///
/// Results come back in configuration order. Each run owns its RNG (seeded
/// from its config) so the output does not depend on the pool size. A run
/// that throws is reported as failed: its config is echoed back with
/// f* = +inf and the exception message.
std::vector<InnerResult> run_epoch_parallel(std::span<const InnerConfig> configs, const CostFunction& objective,
                                            const EpochOptions& options);

inline constexpr std::size_t kBranchCount = 5;

struct EpochRecord {
  std::uint64_t epoch = 0;
  std::uint64_t evals = 0;  // cumulative, including the initial point
  double wall_s = 0.0;
  double best_f = 0.0;
  double sigma_prime = 0.0;
  std::array<double, kBranchCount> branch_best{};  // indexed by Branch, +inf when absent
  std::size_t failed_slots = 0;
  bool epoch_failed = false;
};

struct RunReport {
  EpochRecord initial;  // the starting mean before any epoch
  std::vector<EpochRecord> records;
  Vector x_best;
  double f_best = std::numeric_limits<double>::infinity();
  std::uint64_t evals = 0;
  double wall_s = 0.0;
  bool reached_threshold = false;
};

/// Total budget of a run. For run_meta, max_generations counts epochs.
using TotalBudget = IsolationBudget;

struct MetaOptions {
  std::size_t lambda_prime = 8;
  std::optional<std::size_t> mu_prime;  // default max(1, ceil(lambda'/5))
  IsolationBudget isolation{BudgetMode::max_evaluations, 2000.0};
  TotalBudget total{BudgetMode::max_evaluations, 2e5};
  double threshold = 1e-10;
  std::optional<double> sigma0;     // default 0.3 * box width
  std::optional<double> sigma_max;  // default 2 * sigma0
  std::optional<meta::NeRange> ne_range;
  meta::Box init_box;
  std::optional<Vector> initial_mean;  // default: uniform draw from init_box
  std::size_t pool_size = 1;
  meta::Normalizer normalizer = meta::Normalizer::literal;
  std::uint64_t master_seed = 0;
  std::size_t stagnation_epochs = 0;  // 0 disables the re-plan
  lmcma::Settings inner;
  FaultInjector fault;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct SerialOptions {
  TotalBudget total{BudgetMode::max_evaluations, 2e5};
  double threshold = 1e-10;
  std::optional<double> sigma0;
  std::optional<std::size_t> ne;  // default 4 + floor(3 ln n)
  meta::Box init_box;
  std::optional<Vector> initial_mean;
  std::uint64_t master_seed = 0;
  lmcma::Settings inner;
  std::function<void(const EpochRecord&)> on_epoch;
};

/// Default stored-path count for an n-dimensional problem, 4 + floor(3 ln n).
std::size_t default_ne(std::size_t n) noexcept;

/// Default [min, max] range sampled for fresh inner runs.
meta::NeRange default_ne_range(std::size_t n) noexcept;

/// Starting mean shared by the serial and the distributed optimizer for a
/// given master seed: uniform in the box, from its own seed stream.
Vector initial_mean(std::size_t n, const meta::Box& box, std::uint64_t master_seed);

/// The outer loop: plan, run the epoch in parallel, absorb, until the total
/// budget is spent or best f* <= threshold. With an evaluation budget B the
/// last epoch is shortened so the total stays within B + lambda' * lambda.
/// Throws std::invalid_argument on an invalid configuration.
RunReport run_meta(const CostFunction& objective, const MetaOptions& options);

/// A single LM-CMA run over the total budget, with one record per generation
/// (epoch = generation index, sigma_prime = the inner step-size).
RunReport run_serial(const CostFunction& objective, const SerialOptions& options);

}  // namespace metaes::exec
