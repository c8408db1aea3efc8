#pragma once

#include "metaes/benchfuncs.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace metaes {

/// Stored evolution paths, oldest first, each tagged with the generation it
/// was recorded at.
///
/// Stamps are strictly increasing with position. When the pool is full an
/// insertion evicts the older member of the adjacent pair whose stamps are
/// closest together, which keeps the stored paths spread out in time (and
/// degrades to first-in first-out when all gaps are equal).
class PathPool {
 public:
  PathPool() = default;
  explicit PathPool(std::size_t capacity) : capacity_(capacity) {}

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return paths_.size(); }
  bool empty() const noexcept { return paths_.empty(); }

  const std::vector<Vector>& paths() const noexcept { return paths_; }
  const std::vector<std::int64_t>& stamps() const noexcept { return stamps_; }
  const Vector& path(std::size_t i) const { return paths_.at(i); }
  std::int64_t last_stamp() const;

  /// Throws std::invalid_argument if `stamp` does not exceed the last stamp or
  /// the path is non-finite.
  void insert(Vector path, std::int64_t stamp);

  /// Shrinks (or grows) the capacity, dropping the oldest paths if needed.
  void set_capacity(std::size_t capacity);

  /// Pool holding only the newest `count` paths (all of them if fewer exist).
  PathPool newest(std::size_t count) const;

 private:
  void evict_one();

  std::size_t capacity_ = 0;
  std::vector<Vector> paths_;
  std::vector<std::int64_t> stamps_;
};

}  // namespace metaes
