#include "metaes/benchfuncs.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

using namespace metaes;
using bench::FunctionId;

namespace {

Vector filled(Eigen::Index n, double value) { return Vector::Constant(n, value); }

}  // namespace

TEST_CASE("point values at simple inputs") {
  CHECK(bench::eval_base(FunctionId::sphere, filled(5, 0.0)) == 0.0);
  CHECK(bench::eval_base(FunctionId::cigar, filled(5, 1.0)) == doctest::Approx(1.0 + 4e6).epsilon(1e-15));
  CHECK(std::abs(bench::eval_base(FunctionId::ackley, filled(5, 0.0))) <= 1e-14);
  CHECK(bench::eval_base(FunctionId::michalewicz, filled(5, 0.0)) == 600.0);
  Vector y(3);
  y << 0.4, -0.4, 0.49;
  CHECK(bench::eval_base(FunctionId::step, y) == 0.0);
}

TEST_CASE("every function matches the tabulated formula") {
  std::mt19937_64 rng(11);
  for (FunctionId id : bench::kAllFunctions) {
    for (Eigen::Index n : {2, 3, 7, 20}) {
      const Vector y = oracle::gaussian(n, rng, 2.0);
      const std::vector<double> yv(y.data(), y.data() + n);
      const double want = oracle::formula(id, yv);
      const double got = bench::eval_base(id, y);
      CAPTURE(bench::name(id));
      CAPTURE(n);
      CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("unimodal functions vanish at the origin, michalewicz sits at its offset") {
  for (FunctionId id : bench::kAllFunctions) {
    const double f0 = bench::eval_base(id, Vector::Zero(6));
    CAPTURE(bench::name(id));
    if (id == FunctionId::michalewicz) {
      CHECK(f0 == 600.0);
    } else {
      CHECK(std::abs(f0) <= 1e-14);
    }
  }
}

TEST_CASE("modality groups") {
  int multimodal = 0;
  for (FunctionId id : bench::kAllFunctions) multimodal += bench::modality(id) == bench::Modality::multimodal;
  CHECK(multimodal == 5);
  CHECK(bench::modality(FunctionId::schwefel12) == bench::Modality::unimodal);
  CHECK(bench::modality(FunctionId::salomon) == bench::Modality::multimodal);
}

TEST_CASE("names round-trip") {
  for (FunctionId id : bench::kAllFunctions) CHECK(bench::parse_function(bench::name(id)) == id);
  CHECK(bench::parse_function("differentpowers") == FunctionId::different_powers);
  CHECK(bench::parse_function("scaledrastrigin") == FunctionId::scaled_rastrigin);
  CHECK_FALSE(bench::parse_function("Sphere").has_value());
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bench::eval_base(FunctionId::sphere, Vector::Zero(1)), std::domain_error);
  Vector bad = Vector::Zero(3);
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bench::eval_base(FunctionId::rastrigin, bad), std::domain_error);
  bad(1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(bench::eval_base(FunctionId::sphere, bad), std::domain_error);
  const auto obj = bench::make_objective(FunctionId::sphere, 4, 1);
  CHECK_THROWS_AS(obj->evaluate(Vector::Zero(5)), std::domain_error);
}

TEST_CASE("objective construction is seeded, orthogonal and shifted within range") {
  const auto a = bench::make_objective(FunctionId::sphere, 4, 7);
  const auto b = bench::make_objective(FunctionId::sphere, 4, 7);
  CHECK(a->rotation() == b->rotation());
  CHECK(a->shift() == b->shift());
  const auto c = bench::make_objective(FunctionId::sphere, 4, 8);
  CHECK(a->rotation() != c->rotation());

  for (std::size_t n : {2, 5, 17, 64}) {
    const auto obj = bench::make_objective(FunctionId::ellipsoid, n, 3 + n);
    const Matrix& r = obj->rotation();
    const double err = (r * r.transpose() - Matrix::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff();
    CHECK(err <= 1e-10);
    CHECK(obj->shift().cwiseAbs().maxCoeff() <= 2.0);
  }
}

TEST_CASE("rotation comes from a QR factorization with a positive triangular diagonal") {
  // Rebuild the Gaussian matrix from R_qr = Q^T G: its diagonal must be
  // positive and its strict lower part zero.
  const std::size_t n = 6;
  const auto obj = bench::make_objective(FunctionId::sphere, n, 99);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = gauss(rng);
  }
  const Matrix upper = obj->rotation().transpose() * g;
  for (Eigen::Index i = 0; i < upper.rows(); ++i) {
    CHECK(upper(i, i) > 0.0);
    for (Eigen::Index j = 0; j < i; ++j) CHECK(std::abs(upper(i, j)) <= 1e-12);
  }
}

TEST_CASE("evaluate matches an explicit transform then the formula") {
  std::mt19937_64 rng(5);
  for (FunctionId id : bench::kAllFunctions) {
    const auto obj = bench::make_objective(id, 6, 40);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x = oracle::gaussian(6, rng, 2.0);
      const double want = oracle::formula(id, oracle::transform(obj->rotation(), obj->shift(), x));
      const double got = obj->evaluate(x);
      CAPTURE(bench::name(id));
      CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("optimum sits at the shift") {
  const auto obj = bench::make_objective(FunctionId::ellipsoid, 8, 1);
  CHECK(obj->evaluate(obj->shift()) == 0.0);
  for (FunctionId id : bench::kAllFunctions) {
    const auto o = bench::make_objective(id, 5, 2);
    CHECK(o->evaluate(o->shift()) == bench::eval_base(id, Vector::Zero(5)));
  }
}

TEST_CASE("identity transform reduces to the base function") {
  std::mt19937_64 rng(9);
  const Vector y = oracle::gaussian(5, rng);
  for (FunctionId id : bench::kAllFunctions) {
    const bench::Objective obj(id, Matrix::Identity(5, 5), Vector::Zero(5));
    CHECK(obj.evaluate(y) == bench::eval_base(id, y));
  }
}

TEST_CASE("sphere is rotation invariant") {
  std::mt19937_64 rng(13);
  const auto obj = bench::make_objective(FunctionId::sphere, 30, 77);
  for (int t = 0; t < 20; ++t) {
    const Vector x = oracle::gaussian(30, rng, 3.0);
    const double want = (x - obj->shift()).squaredNorm();
    CHECK(obj->evaluate(x) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("shifted instance moves the optimum") {
  const auto obj = bench::make_objective(FunctionId::rastrigin, 5, 4);
  const Vector offset = Vector::LinSpaced(5, -1.0, 1.0);
  const auto moved = bench::shifted(*obj, offset);
  CHECK(moved->rotation() == obj->rotation());
  CHECK(moved->shift() == obj->shift() + offset);
  CHECK(moved->evaluate(obj->shift() + offset) == 0.0);
}

TEST_CASE("evaluation counter is exact under concurrent use") {
  const auto obj = bench::make_objective(FunctionId::sphere, 8, 1);
  const Vector x = Vector::Ones(8);
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&] {
        for (int i = 0; i < 2500; ++i) (void)obj->evaluate(x);
      });
    }
  }
  CHECK(obj->evaluations() == 10000);
  CHECK_THROWS(obj->evaluate(Vector::Ones(3)));
  CHECK(obj->evaluations() == 10000);
}
