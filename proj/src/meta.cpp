#include "metaes/meta.hpp"

#include "metaes/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace metaes::meta {

std::string_view to_string(Normalizer normalizer) noexcept {
  return normalizer == Normalizer::literal ? "literal" : "variance";
}

std::optional<Normalizer> parse_normalizer(std::string_view text) noexcept {
  if (text == "literal") return Normalizer::literal;
  if (text == "variance") return Normalizer::variance;
  return std::nullopt;
}

OuterWeights OuterWeights::log_rank(std::size_t mu_prime, std::size_t lambda_prime) {
  if (mu_prime < 1 || mu_prime > lambda_prime) throw std::invalid_argument("outer weights need 1 <= mu' <= lambda'");
  return {mu_prime, lambda_prime, lmcma::log_rank_weights(mu_prime)};
}

double OuterWeights::divisor(Normalizer normalizer) const {
  double total = 0.0;
  for (double wi : w) total += normalizer == Normalizer::literal ? wi : wi * wi;
  return std::sqrt(total);
}

std::size_t default_mu_prime(std::size_t lambda_prime) noexcept {
  return std::max<std::size_t>(1, (lambda_prime + 4) / 5);
}

std::vector<std::size_t> rank_inner(std::span<const InnerResult> results) {
  if (results.empty()) throw std::invalid_argument("cannot rank an empty epoch");
  const auto key = [&](std::size_t i) {
    const InnerResult& r = results[i];
    return (r.failed || !std::isfinite(r.f_star)) ? std::numeric_limits<double>::infinity() : r.f_star;
  };
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double fa = key(a);
    const double fb = key(b);
    if (fa != fb) return fa < fb;
    return results[a].evals < results[b].evals;
  });
  if (!std::isfinite(key(order.front()))) throw EpochFailed("no inner run produced a finite cost");
  return order;
}

Vector recombine_means(std::span<const Vector> ranked_means, const OuterWeights& weights) {
  if (ranked_means.size() != weights.w.size()) throw std::invalid_argument("expected exactly mu' means");
  Vector mean = Vector::Zero(ranked_means.front().size());
  for (std::size_t i = 0; i < ranked_means.size(); ++i) {
    if (ranked_means[i].size() != mean.size()) throw std::invalid_argument("mean dimensions disagree");
    mean += weights.w[i] * ranked_means[i];
  }
  return mean;
}

double recombine_sigma(std::span<const double> ranked_sigmas, const OuterWeights& weights, Normalizer normalizer) {
  if (ranked_sigmas.size() != weights.w.size()) throw std::invalid_argument("expected exactly mu' step-sizes");
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked_sigmas.size(); ++i) {
    if (!(ranked_sigmas[i] > 0.0)) throw std::invalid_argument("step-sizes must be positive");
    sum += weights.w[i] * ranked_sigmas[i];
  }
  return sum / weights.divisor(normalizer);
}

double mutate_sigma(double sigma_prime, Rng& rng) {
  return std::uniform_real_distribution<double>(0.3 * sigma_prime, 3.3 * sigma_prime)(rng);
}

double sample_sigma_uniform(double sigma_max, Rng& rng) {
  const double floor = 1e-12 * sigma_max;
  // uniform_real_distribution draws from [a, b); flipping it gives (a, b].
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return sigma_max - u * (sigma_max - floor);
}

std::size_t sample_ne(NeRange range, Rng& rng) {
  if (range.min < 1 || range.min > range.max) throw std::invalid_argument("ne range must satisfy 1 <= min <= max");
  return std::uniform_int_distribution<std::size_t>(range.min, range.max)(rng);
}

PathPool recombine_paths(std::span<const PathPool> ranked_pools, std::span<const std::size_t> ne_list,
                         const OuterWeights& weights, Normalizer normalizer) {
  if (ranked_pools.size() != weights.w.size() || ne_list.size() != weights.w.size()) {
    throw std::invalid_argument("expected exactly mu' pools and path counts");
  }
  std::size_t slots = 0;
  Eigen::Index n = 0;
  for (std::size_t i = 0; i < ranked_pools.size(); ++i) {
    const std::size_t used = std::min(ne_list[i], ranked_pools[i].size());
    slots = std::max(slots, used);
    if (used > 0) n = ranked_pools[i].paths().back().size();
  }
  if (slots == 0) return PathPool(0);

  std::vector<Vector> merged(slots, Vector::Zero(n));
  const double divisor = weights.divisor(normalizer);
  for (std::size_t i = 0; i < ranked_pools.size(); ++i) {
    const auto& paths = ranked_pools[i].paths();
    const std::size_t used = std::min(ne_list[i], paths.size());
    const double scale = weights.w[i] / divisor;
    for (std::size_t k = 1; k <= used; ++k) {
      const Vector& p = paths[paths.size() - k];
      if (p.size() != n) throw std::invalid_argument("path dimensions disagree");
      merged[slots - k] += scale * p;
    }
  }

  PathPool pool(slots);
  for (std::size_t k = 0; k < slots; ++k) pool.insert(std::move(merged[k]), static_cast<std::int64_t>(k + 1));
  return pool;
}

BranchCensus branch_census(std::size_t lambda_prime, std::size_t mu_prime) {
  if (lambda_prime <= mu_prime) throw std::invalid_argument("lambda' must exceed mu'");
  const std::size_t fresh = lambda_prime - mu_prime;
  const std::size_t mutated = (fresh + 4) / 5;
  return {mu_prime, mutated, fresh - mutated};
}

std::vector<InnerConfig> plan_epoch(const OuterState& state, Rng& rng, std::span<const InnerResult> survivors,
                                    const PlanOptions& options) {
  const std::size_t lambda_prime = state.weights.lambda_prime;
  const std::size_t mu_prime = state.weights.mu_prime;
  const BranchCensus census = branch_census(lambda_prime, mu_prime);
  const bool bootstrap = survivors.empty();
  if (!bootstrap && survivors.size() != mu_prime) throw std::invalid_argument("expected exactly mu' survivors");

  const auto fresh_mean = [&]() -> Vector {
    if (!options.redraw_means) return state.mean;
    std::uniform_real_distribution<double> uniform(options.redraw_means->lower, options.redraw_means->upper);
    Vector mean(state.mean.size());
    for (Eigen::Index i = 0; i < mean.size(); ++i) mean(i) = uniform(rng);
    return mean;
  };

  std::vector<InnerConfig> configs;
  configs.reserve(lambda_prime);
  for (std::size_t i = 0; i < lambda_prime; ++i) {
    InnerConfig cfg;
    cfg.seed = exec::derive_seed(options.master_seed, state.epoch, i);
    if (bootstrap) {
      cfg.mean = state.mean;
      cfg.sigma = sample_sigma_uniform(state.sigma_max, rng);
      cfg.ne = sample_ne(state.ne_range, rng);
      cfg.pool = PathPool(cfg.ne);
      cfg.branch = Branch::bootstrap;
    } else if (i < census.elitist) {
      const InnerResult& survivor = survivors[i];
      cfg.mean = survivor.mean;
      cfg.sigma = survivor.sigma;
      cfg.pool = survivor.pool;
      cfg.ne = survivor.ne;
      cfg.continuation = true;
      cfg.branch = Branch::elitist;
    } else {
      const bool mutated = i < census.elitist + census.mutated;
      cfg.sigma = mutated ? mutate_sigma(state.sigma, rng) : sample_sigma_uniform(state.sigma_max, rng);
      cfg.ne = sample_ne(state.ne_range, rng);
      cfg.mean = fresh_mean();
      cfg.pool = state.pool;
      cfg.branch = mutated ? Branch::mutated : Branch::uniform;
    }
    configs.push_back(std::move(cfg));
  }
  return configs;
}

Absorbed absorb_epoch(const OuterState& state, std::span<const InnerResult> results) {
  Absorbed out;
  out.order = rank_inner(results);
  out.state = state;
  OuterState& next = out.state;

  const std::size_t mu_prime = std::min(state.weights.mu_prime, results.size());
  OuterWeights weights = state.weights;
  if (mu_prime != weights.mu_prime) weights = OuterWeights::log_rank(mu_prime, std::max(mu_prime, weights.lambda_prime));

  std::vector<Vector> means;
  std::vector<double> sigmas;
  std::vector<PathPool> pools;
  std::vector<std::size_t> ne_list;
  for (std::size_t r = 0; r < mu_prime; ++r) {
    const InnerResult& result = results[out.order[r]];
    means.push_back(result.mean);
    sigmas.push_back(result.sigma);
    pools.push_back(result.pool);
    ne_list.push_back(result.ne);
    out.survivors.push_back(result);
  }

  next.mean = recombine_means(means, weights);
  next.sigma = std::min(recombine_sigma(sigmas, weights, state.normalizer), state.sigma_max);
  next.pool = recombine_paths(pools, ne_list, weights, state.normalizer);

  for (const InnerResult& result : results) {
    if (!result.failed && std::isfinite(result.f_star) && result.f_star < next.f_best) {
      next.f_best = result.f_star;
      next.x_best = result.x_star;
      out.improved = true;
    }
  }
  next.stale_epochs = out.improved ? 0 : state.stale_epochs + 1;
  ++next.epoch;
  return out;
}

}  // namespace metaes::meta
