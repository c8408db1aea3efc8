#include "metaes/benchfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace metaes::bench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

struct NameEntry {
  FunctionId id;
  std::string_view name;
};

constexpr std::array<NameEntry, 13> kNames = {{
    {FunctionId::sphere, "sphere"},
    {FunctionId::cigar, "cigar"},
    {FunctionId::discus, "discus"},
    {FunctionId::ellipsoid, "ellipsoid"},
    {FunctionId::different_powers, "differentpowers"},
    {FunctionId::schwefel221, "schwefel221"},
    {FunctionId::step, "step"},
    {FunctionId::schwefel12, "schwefel12"},
    {FunctionId::ackley, "ackley"},
    {FunctionId::rastrigin, "rastrigin"},
    {FunctionId::michalewicz, "michalewicz"},
    {FunctionId::salomon, "salomon"},
    {FunctionId::scaled_rastrigin, "scaledrastrigin"},
}};

// (i - 1) / (n - 1) for the one-based index i, written with zero-based i.
inline double ramp(Eigen::Index i, Eigen::Index n) {
  return static_cast<double>(i) / static_cast<double>(n - 1);
}

double rastrigin_term(double v) { return v * v - 10.0 * std::cos(2.0 * kPi * v); }

}  // namespace

Modality modality(FunctionId id) noexcept {
  switch (id) {
    case FunctionId::ackley:
    case FunctionId::rastrigin:
    case FunctionId::michalewicz:
    case FunctionId::salomon:
    case FunctionId::scaled_rastrigin:
      return Modality::multimodal;
    default:
      return Modality::unimodal;
  }
}

std::string_view name(FunctionId id) noexcept {
  for (const auto& entry : kNames) {
    if (entry.id == id) return entry.name;
  }
  return "unknown";
}

std::optional<FunctionId> parse_function(std::string_view text) noexcept {
  for (const auto& entry : kNames) {
    if (entry.name == text) return entry.id;
  }
  return std::nullopt;
}

double eval_base(FunctionId id, const Eigen::Ref<const Vector>& y) {
  const Eigen::Index n = y.size();
  if (n < 2) throw std::domain_error("benchmark functions need dimension >= 2");
  if (!y.allFinite()) throw std::domain_error("non-finite coordinate passed to " + std::string(name(id)));

  switch (id) {
    case FunctionId::sphere:
      return y.squaredNorm();
    case FunctionId::cigar:
      return y(0) * y(0) + 1e6 * y.tail(n - 1).squaredNorm();
    case FunctionId::discus:
      return 1e6 * y(0) * y(0) + y.tail(n - 1).squaredNorm();
    case FunctionId::ellipsoid: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) sum += std::pow(10.0, 6.0 * ramp(i, n)) * y(i) * y(i);
      return sum;
    }
    case FunctionId::different_powers: {
      // Exponent (2 + 4(i - 1)) / (n - 1), as tabulated.
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double exponent = (2.0 + 4.0 * static_cast<double>(i)) / static_cast<double>(n - 1);
        sum += std::pow(std::abs(y(i)), exponent);
      }
      return sum;
    }
    case FunctionId::schwefel221:
      return y.cwiseAbs().maxCoeff();
    case FunctionId::step: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double r = std::floor(y(i) + 0.5);
        sum += r * r;
      }
      return sum;
    }
    case FunctionId::schwefel12: {
      double sum = 0.0;
      double partial = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        partial += y(i);
        sum += partial * partial;
      }
      return sum;
    }
    case FunctionId::ackley: {
      const double nd = static_cast<double>(n);
      double cos_sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) cos_sum += std::cos(2.0 * kPi * y(i));
      return -20.0 * std::exp(-0.2 * std::sqrt(y.squaredNorm() / nd)) - std::exp(cos_sum / nd) + 20.0 + kE;
    }
    case FunctionId::rastrigin: {
      double sum = 10.0 * static_cast<double>(n);
      for (Eigen::Index i = 0; i < n; ++i) sum += rastrigin_term(y(i));
      return sum;
    }
    case FunctionId::michalewicz: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double inner = std::sin(static_cast<double>(i + 1) * y(i) * y(i) / kPi);
        sum += std::sin(y(i)) * std::pow(inner, 20);
      }
      return 600.0 - sum;
    }
    case FunctionId::salomon: {
      const double norm = y.norm();
      return 1.0 - std::cos(2.0 * kPi * norm) + 0.1 * norm;
    }
    case FunctionId::scaled_rastrigin: {
      double sum = 10.0 * static_cast<double>(n);
      for (Eigen::Index i = 0; i < n; ++i) sum += rastrigin_term(std::pow(10.0, ramp(i, n)) * y(i));
      return sum;
    }
  }
  throw std::domain_error("unknown benchmark function");
}

Objective::Objective(FunctionId base, Matrix rotation, Vector shift)
    : base_(base), rotation_(std::move(rotation)), shift_(std::move(shift)) {
  if (rotation_.rows() != shift_.size() || rotation_.cols() != shift_.size()) {
    throw std::invalid_argument("rotation and shift dimensions disagree");
  }
  if (shift_.size() < 2) throw std::invalid_argument("objective dimension must be >= 2");
}

double Objective::evaluate(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != shift_.size()) {
    throw std::domain_error("dimension mismatch: objective has n = " + std::to_string(shift_.size()) +
                            ", got " + std::to_string(x.size()));
  }
  evaluations_.fetch_add(1, std::memory_order_relaxed);
  const Vector y = rotation_ * (x - shift_);
  return eval_base(base_, y);
}

std::shared_ptr<const Objective> make_objective(FunctionId id, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("objective dimension must be >= 2");
  const auto dim = static_cast<Eigen::Index>(n);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix gaussian(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) gaussian(i, j) = gauss(rng);
  }

  const Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ();
  const Matrix& packed = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (packed(j, j) < 0.0) q.col(j) = -q.col(j);
  }

  std::uniform_real_distribution<double> uniform(-2.0, 2.0);
  Vector shift(dim);
  for (Eigen::Index i = 0; i < dim; ++i) shift(i) = uniform(rng);

  return std::make_shared<const Objective>(id, std::move(q), std::move(shift));
}

std::shared_ptr<const Objective> shifted(const Objective& objective, const Eigen::Ref<const Vector>& offset) {
  if (offset.size() != objective.shift().size()) throw std::invalid_argument("offset dimension mismatch");
  return std::make_shared<const Objective>(objective.base(), objective.rotation(), objective.shift() + offset);
}

}  // namespace metaes::bench
