#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dimlab/geometry.hpp"

namespace dimlab {

/// Occupied dyadic cubes of a cloud for levels 0..max_level, stored in
/// depth-first (Morton) order so that the points of every cube, and its
/// descendants at any finer level, are contiguous ranges.
class DyadicTree {
 public:
  DyadicTree(const PointCloud& cloud, int max_level);

  int dim() const noexcept { return dim_; }
  int max_level() const noexcept { return max_level_; }
  std::size_t point_count() const noexcept { return order_.size(); }

  std::size_t node_count(int level) const { return levels_[level].begin.size() - 1; }

  std::span<const std::int64_t> key(int level, std::size_t node) const {
    return {levels_[level].key.data() + node * dim_, static_cast<std::size_t>(dim_)};
  }

  /// Points of a cube, as positions in tree order.
  std::pair<std::size_t, std::size_t> point_range(int level, std::size_t node) const {
    return {levels_[level].begin[node], levels_[level].begin[node + 1]};
  }

  /// Children of a cube at level + 1, as a node range.
  std::pair<std::size_t, std::size_t> children(int level, std::size_t node) const {
    return {levels_[level].child_begin[node], levels_[level].child_begin[node + 1]};
  }

  std::size_t parent(int level, std::size_t node) const { return levels_[level].parent[node]; }

  /// Descendants of a cube at a finer level, as a node range.
  std::pair<std::size_t, std::size_t> descendants(int level, std::size_t node, int finer) const;

  /// Coordinates of the point at tree position `pos`.
  std::span<const double> point(std::size_t pos) const {
    return {coords_.data() + pos * dim_, static_cast<std::size_t>(dim_)};
  }
  std::size_t original_index(std::size_t pos) const { return order_[pos]; }

  double min_dist2(int level, std::size_t node, std::span<const double> x) const;
  double max_dist2(int level, std::size_t node, std::span<const double> x) const;

 private:
  struct Level {
    std::vector<std::uint32_t> begin;        // point offsets, size nodes + 1
    std::vector<std::int64_t> key;           // dim entries per node
    std::vector<std::uint32_t> child_begin;  // size nodes + 1 (empty at max level)
    std::vector<std::uint32_t> parent;       // empty at level 0
  };

  int dim_;
  int max_level_;
  std::vector<std::size_t> order_;
  std::vector<double> coords_;
  std::vector<Level> levels_;
};

}  // namespace dimlab
