#include "metaes/lmcma.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace metaes {

std::int64_t PathPool::last_stamp() const {
  if (stamps_.empty()) throw std::logic_error("empty path pool has no stamp");
  return stamps_.back();
}

void PathPool::insert(Vector path, std::int64_t stamp) {
  if (!stamps_.empty() && stamp <= stamps_.back()) throw std::invalid_argument("path stamps must increase");
  if (!path.allFinite()) throw std::invalid_argument("non-finite evolution path");
  if (capacity_ == 0) return;
  if (paths_.size() >= capacity_) evict_one();
  paths_.push_back(std::move(path));
  stamps_.push_back(stamp);
}

void PathPool::evict_one() {
  std::size_t victim = 0;
  if (paths_.size() > 1) {
    std::int64_t smallest = std::numeric_limits<std::int64_t>::max();
    for (std::size_t j = 0; j + 1 < stamps_.size(); ++j) {
      const std::int64_t gap = stamps_[j + 1] - stamps_[j];
      if (gap < smallest) {
        smallest = gap;
        victim = j;
      }
    }
  }
  paths_.erase(paths_.begin() + static_cast<std::ptrdiff_t>(victim));
  stamps_.erase(stamps_.begin() + static_cast<std::ptrdiff_t>(victim));
}

void PathPool::set_capacity(std::size_t capacity) {
  capacity_ = capacity;
  if (paths_.size() > capacity_) {
    const auto drop = static_cast<std::ptrdiff_t>(paths_.size() - capacity_);
    paths_.erase(paths_.begin(), paths_.begin() + drop);
    stamps_.erase(stamps_.begin(), stamps_.begin() + drop);
  }
}

PathPool PathPool::newest(std::size_t count) const {
  PathPool out(count);
  const std::size_t keep = std::min(count, paths_.size());
  const std::size_t first = paths_.size() - keep;
  out.paths_.assign(paths_.begin() + static_cast<std::ptrdiff_t>(first), paths_.end());
  out.stamps_.assign(stamps_.begin() + static_cast<std::ptrdiff_t>(first), stamps_.end());
  return out;
}

bool IsolationBudget::exhausted(std::uint64_t evals, std::uint64_t generations,
                                double elapsed_seconds) const noexcept {
  switch (mode) {
    case BudgetMode::wall_clock_seconds:
      return elapsed_seconds >= amount;
    case BudgetMode::max_evaluations:
      return static_cast<double>(evals) >= amount;
    case BudgetMode::max_generations:
      return static_cast<double>(generations) >= amount;
  }
  return true;
}

std::string_view to_string(BudgetMode mode) noexcept {
  switch (mode) {
    case BudgetMode::wall_clock_seconds:
      return "seconds";
    case BudgetMode::max_evaluations:
      return "evaluations";
    case BudgetMode::max_generations:
      return "generations";
  }
  return "unknown";
}

std::string_view to_string(Branch branch) noexcept {
  switch (branch) {
    case Branch::bootstrap:
      return "bootstrap";
    case Branch::elitist:
      return "elitist";
    case Branch::mutated:
      return "mutated";
    case Branch::uniform:
      return "uniform";
    case Branch::serial:
      return "serial";
  }
  return "unknown";
}

namespace lmcma {

std::vector<double> log_rank_weights(std::size_t mu) {
  if (mu == 0) throw std::invalid_argument("need at least one parent");
  std::vector<double> w(mu);
  const double top = std::log(static_cast<double>(mu) + 1.0);
  for (std::size_t i = 0; i < mu; ++i) w[i] = top - std::log(static_cast<double>(i) + 1.0);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& wi : w) wi /= sum;
  return w;
}

Parameters Parameters::make(std::size_t n, std::size_t ne, const Settings& settings) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (ne < 1) throw std::invalid_argument("ne must be >= 1");
  if (settings.lambda < 2) throw std::invalid_argument("lambda must be >= 2");

  Parameters p;
  p.n = n;
  p.ne = ne;
  p.lambda = settings.lambda;
  p.mu = settings.mu.value_or(p.lambda / 2);
  if (p.mu < 1 || p.mu > p.lambda) throw std::invalid_argument("mu must lie in [1, lambda]");
  p.weights = log_rank_weights(p.mu);
  double squares = 0.0;
  for (double w : p.weights) squares += w * w;
  p.mu_eff = 1.0 / squares;

  const double nd = static_cast<double>(n);
  p.c1 = settings.c1.value_or(1.0 / (10.0 * std::log(nd + 1.0)));
  p.cc = settings.cc.value_or(1.0 / nd);
  p.t_gap = settings.t_gap.value_or((n + ne - 1) / ne);
  p.success_target = settings.success_target;
  p.damping = settings.damping;
  p.success_smoothing = settings.success_smoothing;

  if (!(p.c1 > 0.0 && p.c1 < 1.0)) throw std::invalid_argument("c1 must lie in (0, 1)");
  if (!(p.cc > 0.0 && p.cc <= 1.0)) throw std::invalid_argument("cc must lie in (0, 1]");
  if (p.t_gap < 1) throw std::invalid_argument("t_gap must be >= 1");
  if (!(p.damping > 0.0)) throw std::invalid_argument("damping must be positive");
  if (!(p.success_smoothing > 0.0 && p.success_smoothing <= 1.0)) {
    throw std::invalid_argument("success smoothing must lie in (0, 1]");
  }
  return p;
}

State State::from_config(const InnerConfig& cfg, const Settings& settings) {
  const auto n = static_cast<std::size_t>(cfg.mean.size());
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");

  State s;
  s.params = Parameters::make(n, cfg.ne, settings);
  s.mean = cfg.mean;
  s.sigma = cfg.sigma;
  s.pool = cfg.pool.newest(cfg.ne);
  for (const Vector& p : s.pool.paths()) {
    if (p.size() != cfg.mean.size()) throw std::invalid_argument("path dimension does not match the mean");
  }
  if (s.pool.empty()) {
    s.path = Vector::Zero(cfg.mean.size());
    s.generation = 0;
  } else {
    s.path = s.pool.paths().back();
    s.generation = s.pool.last_stamp() + 1;
  }
  s.basis = reconstruction_basis(s.pool, s.params.ne, s.params.c1);
  return s;
}

Vector apply_reconstruction(const PathPool& pool, std::size_t ne, double c1, const Eigen::Ref<const Vector>& z) {
  Vector v = z;
  const std::size_t used = std::min(ne, pool.size());
  const double keep = 1.0 - 0.5 * c1;
  const double rank_one = 0.5 * c1;
  const auto& paths = pool.paths();
  for (std::size_t k = 0; k < used; ++k) {
    const Vector& p = paths[paths.size() - 1 - k];
    const double projection = p.dot(v);
    v = keep * v + (rank_one * projection) * p;
  }
  return v;
}

Vector invert_reconstruction(const PathPool& pool, std::size_t ne, double c1, const Eigen::Ref<const Vector>& x) {
  Vector v = x;
  const std::size_t used = std::min(ne, pool.size());
  const double keep = 1.0 - 0.5 * c1;
  const double rank_one = 0.5 * c1;
  const auto& paths = pool.paths();
  for (std::size_t k = used; k-- > 0;) {
    const Vector& p = paths[paths.size() - 1 - k];
    const double scale = rank_one / (keep + rank_one * p.squaredNorm());
    v = (v - (scale * p.dot(v)) * p) / keep;
  }
  return v;
}

PathPool reconstruction_basis(const PathPool& pool, std::size_t ne, double c1) {
  const PathPool recent = pool.newest(ne);
  PathPool basis(recent.size());
  for (std::size_t j = 0; j < recent.size(); ++j) {
    Vector v = invert_reconstruction(basis, basis.size(), c1, recent.path(j));
    const double length2 = v.squaredNorm();
    if (length2 > 0.0) {
      // (1 - c1/2) + (c1/2)|u|^2 = (1 - c1/2) sqrt(1 + c1 |v|^2 / (1 - c1))
      const double target = (2.0 - c1) / c1 * (std::sqrt(1.0 + c1 * length2 / (1.0 - c1)) - 1.0);
      v *= std::sqrt(target / length2);
    }
    basis.insert(std::move(v), recent.stamps()[j]);
  }
  return basis;
}

Offspring ask(const State& state, Rng& rng) {
  const Eigen::Index n = state.mean.size();
  const auto lambda = static_cast<Eigen::Index>(state.params.lambda);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Offspring out{Matrix(n, lambda), Matrix(n, lambda), Matrix(n, lambda)};
  for (Eigen::Index k = 0; k < lambda; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) out.draws(i, k) = gauss(rng);
    out.steps.col(k) = apply_reconstruction(state.basis, state.params.ne, state.params.c1, out.draws.col(k));
    out.candidates.col(k) = state.mean + state.sigma * out.steps.col(k);
  }
  return out;
}

namespace {

double sanitize(double cost) {
  return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

// Ascending order by cost with non-finite values last; ties keep index order.
std::vector<std::size_t> argsort(std::span<const double> costs) {
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sanitize(costs[a]) < sanitize(costs[b]); });
  return order;
}

}  // namespace

double rank_gain(std::span<const double> current, std::span<const double> previous) {
  const std::size_t lambda = current.size();
  std::vector<double> mixed;
  mixed.reserve(current.size() + previous.size());
  for (double c : current) mixed.push_back(sanitize(c));
  for (double c : previous) mixed.push_back(sanitize(c));

  const auto order = argsort(mixed);
  std::vector<double> rank(mixed.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && mixed[order[j + 1]] == mixed[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }

  double current_mean = 0.0;
  double previous_mean = 0.0;
  for (std::size_t i = 0; i < lambda; ++i) current_mean += rank[i];
  for (std::size_t i = lambda; i < rank.size(); ++i) previous_mean += rank[i];
  current_mean /= static_cast<double>(lambda);
  previous_mean /= static_cast<double>(previous.size());
  return (previous_mean - current_mean) / static_cast<double>(lambda);
}

TellStatus tell(State& state, const Offspring& offspring, std::span<const double> costs) {
  const Parameters& par = state.params;
  if (costs.size() != par.lambda || static_cast<std::size_t>(offspring.candidates.cols()) != par.lambda) {
    throw std::invalid_argument("tell expects exactly lambda candidates and costs");
  }
  if (std::none_of(costs.begin(), costs.end(), [](double c) { return std::isfinite(c); })) {
    ++state.non_finite_generations;
    return TellStatus::all_non_finite;
  }

  // Working with the weighted step y_w = (m_new - m_old) / sigma directly
  // avoids the cancellation in m_new - m_old once sigma is small, and keeps
  // the path independent of where the mean sits.
  const auto order = argsort(costs);
  Vector step = Vector::Zero(state.mean.size());
  for (std::size_t i = 0; i < par.mu; ++i) {
    step += par.weights[i] * offspring.steps.col(static_cast<Eigen::Index>(order[i]));
  }
  state.mean += state.sigma * step;

  state.path = (1.0 - par.cc) * state.path + std::sqrt(par.cc * (2.0 - par.cc) * par.mu_eff) * step;

  if (state.pool.empty() ||
      state.generation - state.pool.last_stamp() >= static_cast<std::int64_t>(par.t_gap)) {
    state.pool.insert(state.path, state.generation);
    state.basis = reconstruction_basis(state.pool, par.ne, par.c1);
  }

  if (!state.previous_costs.empty()) {
    const double gain = rank_gain(costs, state.previous_costs);
    state.success_score = (1.0 - par.success_smoothing) * state.success_score +
                          par.success_smoothing * (gain - par.success_target);
    state.sigma *= std::exp(state.success_score / par.damping);
  }
  state.previous_costs.assign(costs.begin(), costs.end());
  for (double& c : state.previous_costs) c = sanitize(c);

  ++state.generation;
  return TellStatus::updated;
}

InnerResult run_inner(const InnerConfig& cfg, const CostFunction& cost, const IsolationBudget& budget,
                      const RunOptions& options) {
  if (static_cast<std::size_t>(cfg.mean.size()) != cost.dimension()) {
    throw std::invalid_argument("inner configuration dimension does not match the objective");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  State state = State::from_config(cfg, options.settings);
  Rng rng(cfg.seed);

  InnerResult result;
  result.ne = cfg.ne;
  result.branch = cfg.branch;
  result.x_star = cfg.mean;
  result.f_star = sanitize(cost.evaluate(cfg.mean));
  result.evals = 1;

  if (options.on_generation) options.on_generation({0, result.evals, elapsed(), result.f_star, state.sigma});

  const auto reached = [&] { return options.target && result.f_star <= *options.target; };
  std::vector<double> costs(state.params.lambda);
  while (!reached() && !budget.exhausted(result.evals, result.generations, elapsed())) {
    const Offspring offspring = ask(state, rng);
    for (std::size_t k = 0; k < costs.size(); ++k) {
      const auto col = offspring.candidates.col(static_cast<Eigen::Index>(k));
      costs[k] = cost.evaluate(col);
      if (sanitize(costs[k]) < result.f_star) {
        result.f_star = costs[k];
        result.x_star = col;
      }
    }
    result.evals += costs.size();
    tell(state, offspring, costs);
    ++result.generations;
    if (options.on_generation) {
      options.on_generation({result.generations, result.evals, elapsed(), result.f_star, state.sigma});
    }
  }

  result.mean = std::move(state.mean);
  result.sigma = state.sigma;
  result.pool = std::move(state.pool);
  return result;
}

}  // namespace lmcma
}  // namespace metaes
