#include "dimlab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

struct Line {
  double slope, intercept, r2;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy <= 1e-300 * std::max(1.0, n)) return {0.0, my, 1.0};
  if (sxx <= 0.0) return {0.0, my, 0.0};
  const double slope = sxy / sxx;
  const double r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return {slope, my - slope * mx, r2};
}

std::size_t count_unique_keys(const PointCloud& cloud, int level, const std::vector<std::size_t>& subset) {
  const int d = cloud.dim();
  std::vector<std::int64_t> keys(subset.size() * d);
  for (std::size_t t = 0; t < subset.size(); ++t) {
    const auto p = cloud.point(subset[t]);
    for (int k = 0; k < d; ++k) keys[t * d + k] = cube_index(p[k], level);
  }
  std::vector<std::size_t> order(subset.size());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(&keys[a * d], &keys[a * d] + d, &keys[b * d], &keys[b * d] + d);
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t count = 0;
  for (std::size_t t = 0; t < order.size(); ++t)
    if (t == 0 || less(order[t - 1], order[t])) ++count;
  return count;
}

struct LocalCounter {
  const DyadicTree& tree;
  std::span<const double> c;
  double R2;
  int level;

  bool has_point_within(int l, std::size_t node) const {
    if (tree.min_dist2(l, node, c) > R2) return false;
    if (tree.max_dist2(l, node, c) <= R2) return true;
    if (l == tree.max_level()) {
      const auto [b, e] = tree.point_range(l, node);
      for (std::size_t pos = b; pos < e; ++pos) {
        const auto p = tree.point(pos);
        double acc = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) acc += (p[k] - c[k]) * (p[k] - c[k]);
        if (acc <= R2) return true;
      }
      return false;
    }
    const auto [cb, ce] = tree.children(l, node);
    for (std::size_t ch = cb; ch < ce; ++ch)
      if (has_point_within(l + 1, ch)) return true;
    return false;
  }

  std::size_t count(int l, std::size_t node) const {
    if (tree.min_dist2(l, node, c) > R2) return 0;
    if (l == level) return has_point_within(l, node) ? 1 : 0;
    if (tree.max_dist2(l, node, c) <= R2) {
      const auto [b, e] = tree.descendants(l, node, level);
      return e - b;
    }
    std::size_t total = 0;
    const auto [cb, ce] = tree.children(l, node);
    for (std::size_t ch = cb; ch < ce; ++ch) total += count(l + 1, ch);
    return total;
  }
};

struct MeshCounter {
  const DyadicTree& tree;
  std::span<const double> c;
  double R2;
  int level;

  std::size_t count(int l, std::size_t node) const {
    if (tree.min_dist2(l, node, c) > R2) return 0;
    if (l == level) {
      const double h = std::ldexp(1.0, -l);
      const auto k = tree.key(l, node);
      double acc = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double t = (static_cast<double>(k[i]) + 0.5) * h - c[i];
        acc += t * t;
      }
      return acc <= R2 ? 1 : 0;
    }
    if (tree.max_dist2(l, node, c) <= R2) {
      const auto [b, e] = tree.descendants(l, node, level);
      return e - b;
    }
    std::size_t total = 0;
    const auto [cb, ce] = tree.children(l, node);
    for (std::size_t ch = cb; ch < ce; ++ch) total += count(l + 1, ch);
    return total;
  }
};

}  // namespace

void to_json(nlohmann::json& j, const SlopeFit& fit) {
  j = nlohmann::json{{"slope", fit.slope},         {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
                     {"r_min", fit.r_min},         {"r_max", fit.r_max},         {"chord_min", fit.chord_min},
                     {"chord_max", fit.chord_max}, {"n_points", fit.n_points}};
}

SlopeFit fit_line(std::span<const double> x, std::span<const double> y, std::size_t window) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::insufficient_scales, "slope fit needs at least two matching samples");
  const Line all = least_squares(x, y);
  SlopeFit fit;
  fit.slope = all.slope;
  fit.intercept = all.intercept;
  fit.r_squared = all.r2;
  fit.n_points = x.size();
  fit.chord_min = fit.chord_max = all.slope;
  if (window >= 2 && x.size() > window) {
    fit.chord_min = std::numeric_limits<double>::infinity();
    fit.chord_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + window <= x.size(); ++i) {
      const Line w = least_squares(x.subspan(i, window), y.subspan(i, window));
      fit.chord_min = std::min(fit.chord_min, w.slope);
      fit.chord_max = std::max(fit.chord_max, w.slope);
    }
  }
  return fit;
}

void write_csv(std::ostream& out, const CountCurve& curve) {
  out << "r,count\n";
  for (std::size_t i = 0; i < curve.scales.size(); ++i)
    out << fmt::format("{:.17g},{}\n", curve.scales[i], curve.counts[i]);
}

std::size_t box_count(const PointCloud& cloud, double r) {
  if (r < cloud.resolution())
    throw Error(ErrorKind::resolution_exceeded,
                fmt::format("box count at r={} below resolution {}", r, cloud.resolution()));
  std::vector<std::size_t> all(cloud.size());
  std::iota(all.begin(), all.end(), 0);
  return count_unique_keys(cloud, level_for_scale(r), all);
}

std::size_t box_count(const DyadicTree& tree, int level) {
  if (level < 0 || level > tree.max_level())
    throw Error(ErrorKind::invalid_argument, fmt::format("level {} outside tree depth {}", level, tree.max_level()));
  return tree.node_count(level);
}

std::size_t local_box_count(const PointCloud& cloud, std::span<const double> center, double R, double r) {
  if (static_cast<int>(center.size()) != cloud.dim())
    throw Error(ErrorKind::dimension_mismatch, "local box count: center dimension differs from cloud");
  if (!(r < R)) throw Error(ErrorKind::invalid_argument, "local box count: need r < R");
  if (r < cloud.resolution())
    throw Error(ErrorKind::resolution_exceeded,
                fmt::format("local box count at r={} below resolution {}", r, cloud.resolution()));
  const int d = cloud.dim();
  bool member = false;
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    double acc = 0.0;
    bool same = true;
    for (int k = 0; k < d; ++k) {
      acc += (p[k] - center[k]) * (p[k] - center[k]);
      same = same && p[k] == center[k];
    }
    member = member || same;
    if (acc <= R * R) inside.push_back(i);
  }
  if (!member) throw Error(ErrorKind::invalid_argument, "local box count: center must be a cloud point");
  return count_unique_keys(cloud, level_for_scale(r), inside);
}

std::size_t local_box_count(const DyadicTree& tree, std::span<const double> center, double R, int level) {
  if (static_cast<int>(center.size()) != tree.dim())
    throw Error(ErrorKind::dimension_mismatch, "local box count: center dimension differs from tree");
  if (level < 0 || level > tree.max_level())
    throw Error(ErrorKind::invalid_argument, fmt::format("level {} outside tree depth {}", level, tree.max_level()));
  const LocalCounter counter{tree, center, R * R, level};
  std::size_t total = 0;
  for (std::size_t node = 0; node < tree.node_count(0); ++node) total += counter.count(0, node);
  return total;
}

std::size_t local_mesh_count(const DyadicTree& tree, std::span<const double> center, double R, int level) {
  if (static_cast<int>(center.size()) != tree.dim())
    throw Error(ErrorKind::dimension_mismatch, "local mesh count: center dimension differs from tree");
  if (level < 0 || level > tree.max_level())
    throw Error(ErrorKind::invalid_argument, fmt::format("level {} outside tree depth {}", level, tree.max_level()));
  const MeshCounter counter{tree, center, R * R, level};
  std::size_t total = 0;
  for (std::size_t node = 0; node < tree.node_count(0); ++node) total += counter.count(0, node);
  return total;
}

double local_shifted_count(const DyadicTree& tree, std::span<const double> center, double R, int level, int q) {
  if (q == 0) return static_cast<double>(local_mesh_count(tree, center, R, level));
  if (static_cast<int>(center.size()) != tree.dim())
    throw Error(ErrorKind::dimension_mismatch, "local shifted count: center dimension differs from tree");
  const int fine = level + q;
  if (level < 0 || q < 0 || fine > tree.max_level())
    throw Error(ErrorKind::invalid_argument, fmt::format("level {}+{} outside tree depth {}", level, q, tree.max_level()));
  const int d = tree.dim();
  const double r = std::ldexp(1.0, -level);
  const double reach2 = (R + r) * (R + r);

  // Occupied fine cells close enough to matter for any shift.
  std::vector<std::int64_t> keys;
  std::vector<std::pair<int, std::size_t>> stack;
  for (std::size_t node = 0; node < tree.node_count(0); ++node) stack.emplace_back(0, node);
  while (!stack.empty()) {
    const auto [l, node] = stack.back();
    stack.pop_back();
    if (tree.min_dist2(l, node, center) > reach2) continue;
    if (l == fine) {
      const auto k = tree.key(l, node);
      keys.insert(keys.end(), k.begin(), k.end());
      continue;
    }
    const auto [cb, ce] = tree.children(l, node);
    for (std::size_t ch = cb; ch < ce; ++ch) stack.emplace_back(l + 1, ch);
  }
  const std::size_t n = keys.size() / d;
  const std::int64_t span = std::int64_t{1} << q;
  const double hf = std::ldexp(1.0, -fine);
  const double R2 = R * R;

  std::vector<std::int64_t> shift(d, 0), coarse(n * d);
  std::vector<std::size_t> order(n);
  std::size_t total = 0;
  for (;;) {
    for (std::size_t t = 0; t < n; ++t)
      for (int k = 0; k < d; ++k) {
        const std::int64_t v = keys[t * d + k] - shift[k];
        coarse[t * d + k] = (v >= 0 ? v : v - span + 1) / span;
      }
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(&coarse[a * d], &coarse[a * d] + d, &coarse[b * d], &coarse[b * d] + d);
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t t = 0; t < n; ++t) {
      if (t > 0 && !less(order[t - 1], order[t])) continue;
      double acc = 0.0;
      for (int k = 0; k < d; ++k) {
        const double mid = (static_cast<double>(coarse[order[t] * d + k] * span + shift[k]) + 0.5 * span) * hf;
        acc += (mid - center[k]) * (mid - center[k]);
      }
      if (acc <= R2) ++total;
    }
    int k = 0;
    while (k < d && ++shift[k] == span) shift[k++] = 0;
    if (k == d) break;
  }
  return static_cast<double>(total) / std::ldexp(1.0, q * d);
}

int shift_refinement(double rho, int level, int max_level) {
  int q = 0;
  while (q < 3 && rho * std::ldexp(1.0, q) < 8.0) ++q;
  return std::min(q, max_level - level);
}

SlopeFit fit_loglog(const CountCurve& curve) {
  if (curve.scales.size() < 3 || curve.scales.size() != curve.counts.size())
    throw Error(ErrorKind::insufficient_scales, "log-log fit needs at least three scales");
  std::vector<double> x(curve.scales.size()), y(curve.scales.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = -std::log(curve.scales[i]);
    y[i] = std::log(static_cast<double>(curve.counts[i]));
  }
  SlopeFit fit = fit_line(x, y);
  const auto [lo, hi] = std::minmax_element(curve.scales.begin(), curve.scales.end());
  fit.r_min = *lo;
  fit.r_max = *hi;
  return fit;
}

int tree_depth(const PointCloud& cloud) { return std::clamp(finest_level(cloud.resolution()), 0, 40); }

BoxDimensionEstimate estimate_box_dimension(const PointCloud& cloud) {
  const DyadicTree tree(cloud, tree_depth(cloud));
  return estimate_box_dimension(cloud, tree);
}

BoxDimensionEstimate estimate_box_dimension(const PointCloud& cloud, const DyadicTree& tree) {
  const int J = finest_level(cloud.resolution());
  if (J - 1 - 2 + 1 < 4 || J > tree.max_level())
    throw Error(ErrorKind::insufficient_scales,
                fmt::format("box dimension needs at least 4 dyadic levels above resolution {}", cloud.resolution()));
  BoxDimensionEstimate est;
  for (int j = 2; j <= J - 1; ++j) {
    est.curve.scales.push_back(std::ldexp(1.0, -j));
    est.curve.counts.push_back(tree.node_count(j));
  }
  est.fit = fit_loglog(est.curve);
  const double d = cloud.dim();
  est.fit.slope = std::clamp(est.fit.slope, 0.0, d);
  est.lower = std::clamp(est.fit.chord_min, 0.0, d);
  est.upper = std::clamp(est.fit.chord_max, 0.0, d);
  return est;
}

}  // namespace dimlab
