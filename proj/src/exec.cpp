#include "metaes/exec.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace metaes::exec {
namespace {

constexpr std::uint64_t kSetupEpoch = std::numeric_limits<std::uint64_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-slot view of the shared objective that counts the evaluations made
/// through it and optionally throws at a chosen one.
class SlotCost final : public CostFunction {
 public:
  SlotCost(const CostFunction& inner, std::optional<std::uint64_t> fail_at) : inner_(inner), fail_at_(fail_at) {}

  std::size_t dimension() const override { return inner_.dimension(); }

  double evaluate(const Eigen::Ref<const Vector>& x) const override {
    // Only completed evaluations count, so the totals agree with the objective.
    if (fail_at_ && count_ + 1 >= *fail_at_) throw std::runtime_error("injected worker fault");
    const double f = inner_.evaluate(x);
    ++count_;
    return f;
  }

  std::uint64_t count() const noexcept { return count_; }

 private:
  const CostFunction& inner_;
  std::optional<std::uint64_t> fail_at_;
  mutable std::uint64_t count_ = 0;
};

InnerResult failed_result(const InnerConfig& cfg, std::uint64_t evals, std::string error) {
  InnerResult r;
  r.mean = cfg.mean;
  r.sigma = cfg.sigma;
  r.pool = cfg.pool;
  r.x_star = cfg.mean;
  r.f_star = kInf;
  r.evals = evals;
  r.ne = cfg.ne;
  r.branch = cfg.branch;
  r.failed = true;
  r.error = std::move(error);
  return r;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate_total(const TotalBudget& total) {
  if (!(total.amount > 0.0) || !std::isfinite(total.amount)) {
    throw std::invalid_argument("total budget must be a positive finite amount");
  }
}

}  // namespace

std::vector<InnerResult> run_epoch_parallel(std::span<const InnerConfig> configs, const CostFunction& objective,
                                            const EpochOptions& options) {
  if (options.pool_size < 1) throw std::invalid_argument("pool_size must be at least 1");
  std::vector<InnerResult> results(configs.size());
  std::atomic<std::size_t> next{0};

  const auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < configs.size(); i = next.fetch_add(1)) {
      const std::optional<std::uint64_t> fail_at =
          options.fault ? options.fault(options.epoch, i) : std::optional<std::uint64_t>{};
      SlotCost cost(objective, fail_at);
      try {
        results[i] = lmcma::run_inner(configs[i], cost, options.budget, options.inner);
      } catch (const std::exception& e) {
        results[i] = failed_result(configs[i], cost.count(), e.what());
      } catch (...) {
        results[i] = failed_result(configs[i], cost.count(), "unknown worker failure");
      }
    }
  };

  const std::size_t workers = std::min(options.pool_size, configs.size());
  if (workers <= 1) {
    work();
    return results;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
  threads.clear();  // joins
  return results;
}

std::size_t default_ne(std::size_t n) noexcept {
  return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 1)))));
}

meta::NeRange default_ne_range(std::size_t n) noexcept { return {std::min<std::size_t>(2, default_ne(n)), default_ne(n)}; }

Vector initial_mean(std::size_t n, const meta::Box& box, std::uint64_t master_seed) {
  Rng rng(derive_seed(master_seed, kSetupEpoch, 0));
  std::uniform_real_distribution<double> uniform(box.lower, box.upper);
  Vector mean(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < mean.size(); ++i) mean(i) = uniform(rng);
  return mean;
}

RunReport run_meta(const CostFunction& objective, const MetaOptions& options) {
  const std::size_t n = objective.dimension();
  const std::size_t mu_prime = options.mu_prime.value_or(meta::default_mu_prime(options.lambda_prime));
  if (options.lambda_prime <= mu_prime) throw std::invalid_argument("lambda' must exceed mu'");
  if (!(options.init_box.lower < options.init_box.upper)) throw std::invalid_argument("init box must have lower < upper");
  if (!(options.isolation.amount > 0.0)) throw std::invalid_argument("isolation budget must be positive");
  if (options.pool_size < 1) throw std::invalid_argument("pool_size must be at least 1");
  validate_total(options.total);

  const double sigma0 = options.sigma0.value_or(0.3 * (options.init_box.upper - options.init_box.lower));
  const double sigma_max = options.sigma_max.value_or(2.0 * sigma0);
  if (!(sigma0 > 0.0) || !(sigma_max >= sigma0)) throw std::invalid_argument("need 0 < sigma0 <= sigma_max");
  const meta::NeRange ne_range = options.ne_range.value_or(default_ne_range(n));
  if (ne_range.min < 1 || ne_range.min > ne_range.max) throw std::invalid_argument("ne range must satisfy 1 <= min <= max");

  meta::OuterState state;
  state.mean = options.initial_mean.value_or(initial_mean(n, options.init_box, options.master_seed));
  if (static_cast<std::size_t>(state.mean.size()) != n) throw std::invalid_argument("initial mean has the wrong dimension");
  state.sigma = sigma0;
  state.sigma_max = sigma_max;
  state.weights = meta::OuterWeights::log_rank(mu_prime, options.lambda_prime);
  state.ne_range = ne_range;
  state.normalizer = options.normalizer;
  // Validate the inner settings before any work is done.
  (void)lmcma::Parameters::make(n, ne_range.max, options.inner);

  Rng rng(derive_seed(options.master_seed, kSetupEpoch, 1));
  const auto start = Clock::now();

  RunReport report;
  state.x_best = state.mean;
  state.f_best = objective.evaluate(state.mean);
  if (!std::isfinite(state.f_best)) state.f_best = kInf;
  report.evals = 1;
  report.initial = {0, 1, seconds_since(start), state.f_best, state.sigma, {}, 0, false};
  report.initial.branch_best.fill(kInf);

  const TotalBudget& total = options.total;
  const auto spent = [&] {
    return total.exhausted(report.evals, report.records.size(), seconds_since(start));
  };

  std::vector<InnerResult> survivors;
  std::uint64_t epoch_index = 0;
  while (state.f_best > options.threshold && !spent()) {
    ++epoch_index;
    meta::PlanOptions plan;
    plan.master_seed = options.master_seed;
    if (options.stagnation_epochs > 0 && state.stale_epochs >= options.stagnation_epochs) {
      plan.redraw_means = options.init_box;
      state.stale_epochs = 0;
    }
    const std::vector<InnerConfig> configs = meta::plan_epoch(state, rng, survivors, plan);

    EpochOptions epoch;
    epoch.pool_size = options.pool_size;
    epoch.budget = options.isolation;
    epoch.inner.settings = options.inner;
    epoch.inner.target = options.threshold;
    epoch.epoch = state.epoch;
    epoch.fault = options.fault;
    const double lp = static_cast<double>(options.lambda_prime);
    if (total.mode == BudgetMode::max_evaluations) {
      const double share = (total.amount - static_cast<double>(report.evals)) / lp;
      if (epoch.budget.mode == BudgetMode::max_evaluations) {
        epoch.budget.amount = std::min(epoch.budget.amount, share);
      } else if (epoch.budget.mode == BudgetMode::max_generations) {
        const double lambda = static_cast<double>(lmcma::Parameters::make(n, 1, options.inner).lambda);
        epoch.budget.amount = std::min(epoch.budget.amount, std::max(0.0, std::ceil((share - 1.0) / lambda)));
      }
    } else if (total.mode == BudgetMode::wall_clock_seconds && epoch.budget.mode == BudgetMode::wall_clock_seconds) {
      epoch.budget.amount = std::min(epoch.budget.amount, total.amount - seconds_since(start));
    }

    const std::vector<InnerResult> results = run_epoch_parallel(configs, objective, epoch);

    EpochRecord record;
    record.epoch = epoch_index;
    record.branch_best.fill(kInf);
    for (const InnerResult& r : results) {
      report.evals += r.evals;
      if (r.failed) {
        ++record.failed_slots;
        continue;
      }
      double& slot = record.branch_best[static_cast<std::size_t>(r.branch)];
      if (std::isfinite(r.f_star)) slot = std::min(slot, r.f_star);
    }

    try {
      meta::Absorbed absorbed = meta::absorb_epoch(state, results);
      state = std::move(absorbed.state);
      survivors = std::move(absorbed.survivors);
    } catch (const meta::EpochFailed&) {
      // Keep the previous state but move to fresh seeds.
      record.epoch_failed = true;
      ++state.epoch;
      ++state.stale_epochs;
    }

    record.evals = report.evals;
    record.wall_s = seconds_since(start);
    record.best_f = state.f_best;
    record.sigma_prime = state.sigma;
    report.records.push_back(record);
    if (options.on_epoch) options.on_epoch(record);
  }

  report.x_best = state.x_best;
  report.f_best = state.f_best;
  report.wall_s = seconds_since(start);
  report.reached_threshold = state.f_best <= options.threshold;
  return report;
}

RunReport run_serial(const CostFunction& objective, const SerialOptions& options) {
  const std::size_t n = objective.dimension();
  if (!(options.init_box.lower < options.init_box.upper)) throw std::invalid_argument("init box must have lower < upper");
  validate_total(options.total);
  const double sigma0 = options.sigma0.value_or(0.3 * (options.init_box.upper - options.init_box.lower));
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");

  InnerConfig cfg;
  cfg.mean = options.initial_mean.value_or(initial_mean(n, options.init_box, options.master_seed));
  if (static_cast<std::size_t>(cfg.mean.size()) != n) throw std::invalid_argument("initial mean has the wrong dimension");
  cfg.sigma = sigma0;
  cfg.ne = options.ne.value_or(default_ne(n));
  if (cfg.ne < 1) throw std::invalid_argument("ne must be at least 1");
  cfg.pool = PathPool(cfg.ne);
  cfg.seed = derive_seed(options.master_seed, kSetupEpoch, 2);
  cfg.branch = Branch::serial;

  RunReport report;
  lmcma::RunOptions run;
  run.settings = options.inner;
  run.target = options.threshold;
  run.on_generation = [&](const lmcma::GenerationRecord& g) {
    EpochRecord record;
    record.epoch = g.generation;
    record.evals = g.evals;
    record.wall_s = g.elapsed_seconds;
    record.best_f = g.best_f;
    record.sigma_prime = g.sigma;
    record.branch_best.fill(kInf);
    record.branch_best[static_cast<std::size_t>(Branch::serial)] = g.best_f;
    if (g.generation == 0) {
      report.initial = record;
      return;
    }
    report.records.push_back(record);
    if (options.on_epoch) options.on_epoch(record);
  };

  const auto start = Clock::now();
  InnerResult result = lmcma::run_inner(cfg, objective, options.total, run);
  report.wall_s = seconds_since(start);

  report.x_best = std::move(result.x_star);
  report.f_best = result.f_star;
  report.evals = result.evals;
  report.reached_threshold = result.f_star <= options.threshold;
  return report;
}

}  // namespace metaes::exec
