#include "metaes/path_pool.hpp"

#include <doctest.h>

#include <random>

using metaes::PathPool;
using metaes::Vector;

namespace {

Vector unit(double v) { return Vector::Constant(3, v); }

}  // namespace

TEST_CASE("insertion keeps paths oldest first") {
  PathPool pool(4);
  pool.insert(unit(1), 0);
  pool.insert(unit(2), 3);
  CHECK(pool.size() == 2);
  CHECK(pool.last_stamp() == 3);
  CHECK(pool.path(0)(0) == 1.0);
  CHECK(pool.path(1)(0) == 2.0);
}

TEST_CASE("stamps must increase and paths must be finite") {
  PathPool pool(3);
  pool.insert(unit(1), 5);
  CHECK_THROWS_AS(pool.insert(unit(1), 5), std::invalid_argument);
  CHECK_THROWS_AS(pool.insert(unit(1), 4), std::invalid_argument);
  CHECK_THROWS_AS(pool.insert(unit(std::numeric_limits<double>::infinity()), 6), std::invalid_argument);
  CHECK(pool.size() == 1);
  CHECK_THROWS_AS(PathPool(2).last_stamp(), std::logic_error);
}

TEST_CASE("full pool evicts the older member of the closest pair") {
  PathPool pool(3);
  pool.insert(unit(0), 0);
  pool.insert(unit(1), 10);
  pool.insert(unit(2), 12);
  pool.insert(unit(3), 30);  // gaps 10, 2 -> drop stamp 10
  CHECK(pool.stamps() == std::vector<std::int64_t>{0, 12, 30});
}

TEST_CASE("equal gaps evict first in first out") {
  PathPool pool(2);
  pool.insert(unit(0), 0);
  pool.insert(unit(1), 1);
  pool.insert(unit(2), 2);
  CHECK(pool.stamps() == std::vector<std::int64_t>{1, 2});
  PathPool one(1);
  one.insert(unit(0), 0);
  one.insert(unit(1), 7);
  CHECK(one.stamps() == std::vector<std::int64_t>{7});
}

TEST_CASE("zero capacity stores nothing") {
  PathPool pool(0);
  pool.insert(unit(1), 1);
  CHECK(pool.empty());
}

TEST_CASE("newest and set_capacity keep the most recent paths") {
  PathPool pool(5);
  for (int t = 0; t < 5; ++t) pool.insert(unit(t), t);
  const PathPool tail = pool.newest(2);
  CHECK(tail.capacity() == 2);
  CHECK(tail.stamps() == std::vector<std::int64_t>{3, 4});
  CHECK(pool.newest(9).size() == 5);
  pool.set_capacity(3);
  CHECK(pool.stamps() == std::vector<std::int64_t>{2, 3, 4});
}

TEST_CASE("stamps stay strictly increasing under random insertions") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> step(1, 9);
  std::uniform_int_distribution<std::size_t> cap(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    PathPool pool(cap(rng));
    std::int64_t t = 0;
    for (int k = 0; k < 40; ++k) {
      t += step(rng);
      pool.insert(unit(static_cast<double>(t)), t);
      REQUIRE(pool.size() <= pool.capacity());
      for (std::size_t j = 1; j < pool.size(); ++j) REQUIRE(pool.stamps()[j - 1] < pool.stamps()[j]);
      REQUIRE(pool.last_stamp() == t);
    }
  }
}
