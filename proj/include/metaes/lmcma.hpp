#pragma once

#include "metaes/benchfuncs.hpp"
#include "metaes/path_pool.hpp"
#include "metaes/types.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace metaes {

using Rng = std::mt19937_64;

namespace lmcma {

/// User-facing tunables of the inner engine. Unset optionals take the
/// dimension-dependent defaults of Parameters::make.
struct Settings {
  std::size_t lambda = 19;
  std::optional<std::size_t> mu;
  std::optional<double> c1;
  std::optional<double> cc;
  std::optional<std::size_t> t_gap;
  double success_target = 0.25;
  double damping = 1.0;
  double success_smoothing = 1.0;
};

/// Fully resolved strategy parameters for a dimension n and path count ne.
struct Parameters {
  std::size_t n = 0;
  std::size_t lambda = 19;
  std::size_t mu = 9;
  std::vector<double> weights;  // w_1 >= ... >= w_mu > 0, sum 1
  double mu_eff = 1.0;          // 1 / sum(w_i^2)
  double c1 = 0.0;
  double cc = 0.0;
  std::size_t t_gap = 1;
  double success_target = 0.25;
  double damping = 1.0;
  double success_smoothing = 1.0;
  std::size_t ne = 1;

  /// Defaults: mu = lambda/2, log-rank weights, c1 = 1/(10 ln(n+1)),
  /// cc = 1/n, t_gap = ceil(n/ne). Throws std::invalid_argument on values
  /// outside the documented ranges.
  static Parameters make(std::size_t n, std::size_t ne, const Settings& settings = {});
};

/// Positive, decreasing log-rank weights w_i ~ ln(mu + 1) - ln(i), summing to 1.
std::vector<double> log_rank_weights(std::size_t mu);

/// Inner optimizer state.
///
/// `pool` holds evolution paths p_c in search space coordinates; these are
/// what the outer level averages across workers. `basis` is derived from the
/// pool by reconstruction_basis() and is what sampling multiplies through.
struct State {
  Parameters params;
  Vector mean;
  double sigma = 1.0;
  Vector path;  // cumulative evolution path p_c
  PathPool pool;
  PathPool basis;
  std::int64_t generation = 0;
  std::vector<double> previous_costs;  // empty before the first tell
  double success_score = 0.0;
  std::uint64_t non_finite_generations = 0;

  /// State seeded from an inner configuration. The pool is cut down to its
  /// newest `cfg.ne` paths, the generation counter resumes after the newest
  /// stamp and p_c starts from the newest stored path (zero if none).
  static State from_config(const InnerConfig& cfg, const Settings& settings = {});
};

/// Applies the product of the rank-one factors ((1 - c1/2) I + (c1/2) p p^T)
/// of the newest `ne` stored paths to `z`, newest factor first. O(ne * n).
Vector apply_reconstruction(const PathPool& pool, std::size_t ne, double c1, const Eigen::Ref<const Vector>& z);

/// Inverse of apply_reconstruction: solves A v = x, oldest factor first.
Vector invert_reconstruction(const PathPool& pool, std::size_t ne, double c1, const Eigen::Ref<const Vector>& x);

/// Maps the newest `ne` stored paths p_1..p_k (oldest first) to the vectors
/// the product form is evaluated with.
///
/// Each path is pulled back through the factors built so far,
/// v_j = A_{j-1}^{-1} p_j, and rescaled so that its factor stretches along v_j
/// by sqrt(1 + c1 |v_j|^2 / (1 - c1)) relative to the orthogonal complement,
/// the ratio of the exact rank-one Cholesky update
/// A_j = A_{j-1} sqrt((1 - c1) I + c1 v_j v_j^T). Without the pull-back the
/// search space paths compound their own stretch; without the rescaling the
/// first-order factor grows linearly in |v|^2 and overshoots on long paths.
PathPool reconstruction_basis(const PathPool& pool, std::size_t ne, double c1);

/// One population: column i of `candidates` is m + sigma * A z_i, column i
/// of `steps` is A z_i and column i of `draws` is z_i.
struct Offspring {
  Matrix candidates;
  Matrix steps;
  Matrix draws;
};

Offspring ask(const State& state, Rng& rng);

enum class TellStatus { updated, all_non_finite };

/// Selection, mean and path update, path storage and the population success
/// rule for sigma. Non-finite costs rank last; a population without a single
/// finite cost leaves the state untouched.
TellStatus tell(State& state, const Offspring& offspring, std::span<const double> costs);

/// Normalized rank gain of `current` over `previous` in their joint ranking,
/// in [-1, 1]; ties share their mean rank.
double rank_gain(std::span<const double> current, std::span<const double> previous);

struct GenerationRecord {
  std::uint64_t generation = 0;
  std::uint64_t evals = 0;
  double elapsed_seconds = 0.0;
  double best_f = 0.0;
  double sigma = 0.0;
};

struct RunOptions {
  Settings settings;
  std::optional<double> target;  // stop once f* <= target
  std::function<void(const GenerationRecord&)> on_generation;
};

/// Runs ask/tell until the budget is spent (checked once per generation) or
/// the target is reached. The mean of `cfg` is evaluated first and counts
/// towards f* and the evaluation total.
InnerResult run_inner(const InnerConfig& cfg, const CostFunction& cost, const IsolationBudget& budget,
                      const RunOptions& options = {});

}  // namespace lmcma
}  // namespace metaes
