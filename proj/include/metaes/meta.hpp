#pragma once

#include "metaes/lmcma.hpp"
#include "metaes/types.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace metaes::meta {

/// Divisor applied to the weighted sums of step-sizes and paths.
/// `literal` is sqrt(sum w) (= 1 for normalized weights), `variance` is
/// sqrt(sum w^2).
enum class Normalizer { literal, variance };

std::string_view to_string(Normalizer normalizer) noexcept;
std::optional<Normalizer> parse_normalizer(std::string_view text) noexcept;

/// Recombination weights over the mu' best inner runs out of lambda'.
struct OuterWeights {
  std::size_t mu_prime = 1;
  std::size_t lambda_prime = 2;
  std::vector<double> w;

  /// Log-rank weights; throws std::invalid_argument unless 1 <= mu' <= lambda'.
  static OuterWeights log_rank(std::size_t mu_prime, std::size_t lambda_prime);

  double divisor(Normalizer normalizer) const;
};

/// Default mu' = max(1, ceil(lambda' / 5)).
std::size_t default_mu_prime(std::size_t lambda_prime) noexcept;

struct NeRange {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct Box {
  double lower = -5.0;
  double upper = 5.0;
};

struct OuterState {
  Vector mean;
  double sigma = 1.0;
  PathPool pool;
  OuterWeights weights;
  double sigma_max = 2.0;
  NeRange ne_range;
  Normalizer normalizer = Normalizer::literal;
  Vector x_best;
  double f_best = std::numeric_limits<double>::infinity();
  std::uint64_t epoch = 0;
  std::uint64_t stale_epochs = 0;  // epochs since f_best last improved
};

/// Raised when no inner run of an epoch produced a finite cost.
class EpochFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ascending by f*, then by fewer evaluations, then by position. Failed and
/// non-finite results rank last. Throws EpochFailed if none is finite.
std::vector<std::size_t> rank_inner(std::span<const InnerResult> results);

/// m' = sum_i w_i m_i over the ranked means (exactly mu' of them).
Vector recombine_means(std::span<const Vector> ranked_means, const OuterWeights& weights);

/// sigma' = sum_i w_i sigma_i / divisor. Throws std::invalid_argument on a
/// non-positive step-size or a count mismatch.
double recombine_sigma(std::span<const double> ranked_sigmas, const OuterWeights& weights,
                       Normalizer normalizer = Normalizer::literal);

/// U(0.3 sigma', 3.3 sigma').
double mutate_sigma(double sigma_prime, Rng& rng);

/// U(eps, sigma_max] with eps = 1e-12 sigma_max, so the result is never zero.
double sample_sigma_uniform(double sigma_max, Rng& rng);

/// Uniform integer on [min, max].
std::size_t sample_ne(NeRange range, Rng& rng);

/// Aligned path recombination.
///
/// With k_i = min(ne_i, |P_i|) and K = max_i k_i, starts from K zero paths and
/// adds (w_i / divisor) times the newest k_i paths of pool i into the last k_i
/// slots, newest aligned with newest. Stamps of the result are 1..K.
PathPool recombine_paths(std::span<const PathPool> ranked_pools, std::span<const std::size_t> ne_list,
                         const OuterWeights& weights, Normalizer normalizer = Normalizer::literal);

/// Sizes of the three planning branches for lambda' runs and mu' elitists:
/// mu' continuations, ceil((lambda' - mu') / 5) mutated step-sizes, the rest
/// uniformly sampled step-sizes.
struct BranchCensus {
  std::size_t elitist = 0;
  std::size_t mutated = 0;
  std::size_t uniform = 0;
};

BranchCensus branch_census(std::size_t lambda_prime, std::size_t mu_prime);

struct PlanOptions {
  std::uint64_t master_seed = 0;
  /// When set, fresh configurations draw their means uniformly from this box
  /// instead of starting at m' (stagnation re-plan).
  std::optional<Box> redraw_means;
};

/// Configurations for the next epoch, one per inner run, in branch order
/// (elitists first). With no survivors every run starts from m' with a
/// uniformly sampled step-size, a sampled ne and an empty pool. Each run gets
/// derive_seed(master, epoch, index). Throws std::invalid_argument when
/// lambda' <= mu' or the survivor count is neither 0 nor mu'.
std::vector<InnerConfig> plan_epoch(const OuterState& state, Rng& rng, std::span<const InnerResult> survivors,
                                    const PlanOptions& options);

struct Absorbed {
  OuterState state;
  std::vector<InnerResult> survivors;  // best mu' results, best first
  std::vector<std::size_t> order;      // full ranking of the input
  bool improved = false;
};

/// Ranks the epoch's results and recombines the best mu' of them into the
/// next outer state. Propagates EpochFailed without touching `state`.
Absorbed absorb_epoch(const OuterState& state, std::span<const InnerResult> results);

}  // namespace metaes::meta
