#include "dimlab/dyadic_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

// Morton order without materialising interleaved codes: the dimension whose
// coordinates differ in the highest bit decides.
bool less_msb(std::uint64_t a, std::uint64_t b) { return a < b && a < (a ^ b); }

}  // namespace

DyadicTree::DyadicTree(const PointCloud& cloud, int max_level) : dim_(cloud.dim()), max_level_(max_level) {
  if (max_level < 0 || max_level > 40)
    throw Error(ErrorKind::invalid_argument, "dyadic tree: max level must be in [0, 40]");
  const std::size_t n = cloud.size();
  if (n >= std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::invalid_argument, "dyadic tree: too many points");
  const int d = dim_;
  const int L = max_level;

  std::vector<std::int64_t> raw(n * d);
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cloud.point(i);
    for (int k = 0; k < d; ++k) {
      const auto v = cube_index(p[k], L);
      raw[i * d + k] = v;
      lo = std::min(lo, v);
    }
  }
  // Bias by whole level-0 cubes so shifting stays aligned with the level keys.
  const std::int64_t bias = (lo >> L) << L;
  std::vector<std::uint64_t> u(n * d);
  for (std::size_t i = 0; i < n * d; ++i) u[i] = static_cast<std::uint64_t>(raw[i] - bias);

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    const std::uint64_t* x = &u[a * d];
    const std::uint64_t* y = &u[b * d];
    int best = 0;
    std::uint64_t best_xor = 0;
    for (int k = 0; k < d; ++k) {
      const std::uint64_t diff = x[k] ^ y[k];
      if (less_msb(best_xor, diff)) {
        best = k;
        best_xor = diff;
      }
    }
    return x[best] < y[best];
  });

  coords_.resize(n * d);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto p = cloud.point(order_[pos]);
    std::copy(p.begin(), p.end(), coords_.begin() + pos * d);
  }

  levels_.resize(L + 1);
  for (int l = 0; l <= L; ++l) {
    Level& lev = levels_[l];
    const int shift = L - l;
    const std::uint64_t* prev = nullptr;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::uint64_t* cur = &u[order_[pos] * d];
      bool fresh = prev == nullptr;
      if (!fresh)
        for (int k = 0; k < d; ++k)
          if ((cur[k] >> shift) != (prev[k] >> shift)) {
            fresh = true;
            break;
          }
      if (fresh) {
        lev.begin.push_back(static_cast<std::uint32_t>(pos));
        for (int k = 0; k < d; ++k)
          lev.key.push_back(static_cast<std::int64_t>(cur[k] >> shift) + (bias >> shift));
      }
      prev = cur;
    }
    lev.begin.push_back(static_cast<std::uint32_t>(n));
  }

  for (int l = 0; l < L; ++l) {
    Level& up = levels_[l];
    Level& down = levels_[l + 1];
    const std::size_t nu = up.begin.size() - 1;
    const std::size_t nd = down.begin.size() - 1;
    up.child_begin.resize(nu + 1);
    down.parent.resize(nd);
    std::size_t c = 0;
    for (std::size_t i = 0; i < nu; ++i) {
      up.child_begin[i] = static_cast<std::uint32_t>(c);
      while (c < nd && down.begin[c] < up.begin[i + 1]) down.parent[c++] = static_cast<std::uint32_t>(i);
    }
    up.child_begin[nu] = static_cast<std::uint32_t>(nd);
  }
}

std::pair<std::size_t, std::size_t> DyadicTree::descendants(int level, std::size_t node, int finer) const {
  const auto [b, e] = point_range(level, node);
  const auto& starts = levels_[finer].begin;
  const auto first = std::lower_bound(starts.begin(), starts.end() - 1, b) - starts.begin();
  const auto last = std::lower_bound(starts.begin(), starts.end() - 1, e) - starts.begin();
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

double DyadicTree::min_dist2(int level, std::size_t node, std::span<const double> x) const {
  const double h = std::ldexp(1.0, -level);
  const auto k = key(level, node);
  double acc = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double a = static_cast<double>(k[i]) * h;
    const double b = a + h;
    const double t = x[i] < a ? a - x[i] : (x[i] > b ? x[i] - b : 0.0);
    acc += t * t;
  }
  return acc;
}

double DyadicTree::max_dist2(int level, std::size_t node, std::span<const double> x) const {
  const double h = std::ldexp(1.0, -level);
  const auto k = key(level, node);
  double acc = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double a = static_cast<double>(k[i]) * h;
    const double t = std::max(std::abs(x[i] - a), std::abs(x[i] - a - h));
    acc += t * t;
  }
  return acc;
}

}  // namespace dimlab
