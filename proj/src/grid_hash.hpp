#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace dimlab::detail {

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : key) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Uniform hash grid with cell side `cell`; neighbour queries scan the 3^d block.
class GridHash {
 public:
  GridHash(int dim, double cell) : dim_(dim), inv_cell_(1.0 / cell) {}

  void cell_of(std::span<const double> p, std::vector<std::int64_t>& out) const {
    for (int k = 0; k < dim_; ++k) out[k] = static_cast<std::int64_t>(std::floor(p[k] * inv_cell_));
  }

  void insert(const std::vector<std::int64_t>& cell, std::size_t id) { cells_[cell].push_back(id); }

  template <class F>
  void for_each_neighbor(const std::vector<std::int64_t>& cell, std::vector<std::int64_t>& probe, F&& f) const {
    visit(cell, probe, 0, f);
  }

 private:
  template <class F>
  void visit(const std::vector<std::int64_t>& cell, std::vector<std::int64_t>& probe, int k, F& f) const {
    if (k == dim_) {
      auto it = cells_.find(probe);
      if (it == cells_.end()) return;
      for (std::size_t id : it->second) f(id);
      return;
    }
    for (int off = -1; off <= 1; ++off) {
      probe[k] = cell[k] + off;
      visit(cell, probe, k + 1, f);
    }
  }

  int dim_;
  double inv_cell_;
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash> cells_;
};

}  // namespace dimlab::detail
