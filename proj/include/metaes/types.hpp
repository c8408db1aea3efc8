#pragma once

#include "metaes/benchfuncs.hpp"
#include "metaes/path_pool.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace metaes {

enum class BudgetMode { wall_clock_seconds, max_evaluations, max_generations };

/// How long one inner optimizer runs before it reports back.
struct IsolationBudget {
  BudgetMode mode = BudgetMode::max_evaluations;
  double amount = 0.0;

  bool deterministic() const noexcept { return mode != BudgetMode::wall_clock_seconds; }
  bool exhausted(std::uint64_t evals, std::uint64_t generations, double elapsed_seconds) const noexcept;
};

std::string_view to_string(BudgetMode mode) noexcept;

/// Which line of the outer planner produced a configuration.
enum class Branch { bootstrap, elitist, mutated, uniform, serial };

std::string_view to_string(Branch branch) noexcept;

/// Starting point handed to one inner optimizer.
struct InnerConfig {
  Vector mean;
  double sigma = 1.0;
  PathPool pool;
  std::size_t ne = 1;
  std::uint64_t seed = 0;
  bool continuation = false;
  Branch branch = Branch::bootstrap;
};

/// What one inner optimizer hands back after its isolation budget.
struct InnerResult {
  Vector mean;
  double sigma = 1.0;
  PathPool pool;
  Vector x_star;
  double f_star = std::numeric_limits<double>::infinity();
  std::uint64_t evals = 0;
  std::uint64_t generations = 0;
  std::size_t ne = 1;
  Branch branch = Branch::bootstrap;
  bool failed = false;
  std::string error;
};

}  // namespace metaes
