#pragma once

#include <Eigen/Dense>

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

namespace metaes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Black-box cost interface shared by the inner optimizers.
///
/// Implementations must be safe to call concurrently from several workers.
class CostFunction {
 public:
  virtual ~CostFunction() = default;
  virtual std::size_t dimension() const = 0;
  virtual double evaluate(const Eigen::Ref<const Vector>& x) const = 0;
};

namespace bench {

enum class FunctionId {
  sphere,
  cigar,
  discus,
  ellipsoid,
  different_powers,
  schwefel221,
  step,
  schwefel12,
  ackley,
  rastrigin,
  michalewicz,
  salomon,
  scaled_rastrigin,
};

enum class Modality { unimodal, multimodal };

inline constexpr std::array<FunctionId, 13> kAllFunctions = {
    FunctionId::sphere,      FunctionId::cigar,           FunctionId::discus,
    FunctionId::ellipsoid,   FunctionId::different_powers, FunctionId::schwefel221,
    FunctionId::step,        FunctionId::schwefel12,      FunctionId::ackley,
    FunctionId::rastrigin,   FunctionId::michalewicz,     FunctionId::salomon,
    FunctionId::scaled_rastrigin,
};

Modality modality(FunctionId id) noexcept;

/// Lowercase identifier used in config files and on the command line,
/// e.g. "differentpowers" or "scaledrastrigin".
std::string_view name(FunctionId id) noexcept;
std::optional<FunctionId> parse_function(std::string_view name) noexcept;

/// Untransformed benchmark value at `y`.
///
/// Throws std::domain_error when `y` has fewer than two entries or any entry
/// is non-finite.
double eval_base(FunctionId id, const Eigen::Ref<const Vector>& y);

/// f(x) = f_base(R (x - s)) with an orthogonal R and a shift s.
///
/// The rotation and shift are immutable after construction; only the
/// evaluation counter changes, atomically, so one instance can be shared by
/// every worker of a run.
class Objective final : public CostFunction {
 public:
  Objective(FunctionId base, Matrix rotation, Vector shift);

  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  FunctionId base() const noexcept { return base_; }
  std::size_t dimension() const override { return static_cast<std::size_t>(shift_.size()); }
  const Matrix& rotation() const noexcept { return rotation_; }
  const Vector& shift() const noexcept { return shift_; }

  /// Throws std::domain_error on a dimension mismatch or non-finite input.
  double evaluate(const Eigen::Ref<const Vector>& x) const override;

  std::uint64_t evaluations() const noexcept { return evaluations_.load(std::memory_order_relaxed); }

 private:
  FunctionId base_;
  Matrix rotation_;
  Vector shift_;
  mutable std::atomic<std::uint64_t> evaluations_{0};
};

/// Seeded random instance: R is the Q factor of a Gaussian matrix with the
/// sign convention diag(R_qr) > 0, and s ~ U[-2, 2]^n.
std::shared_ptr<const Objective> make_objective(FunctionId id, std::size_t n, std::uint64_t seed);

/// Same instance, with the optimum moved by `offset` (s' = s + offset).
std::shared_ptr<const Objective> shifted(const Objective& objective, const Eigen::Ref<const Vector>& offset);

}  // namespace bench
}  // namespace metaes
