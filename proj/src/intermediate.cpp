#include "dimlab/intermediate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

struct Dp {
  std::vector<std::vector<double>> cost;  // per level, per node
  std::vector<double> total;              // per top level
};

Dp run_dp(const DyadicTree& tree, int bottom, double s) {
  Dp dp;
  dp.cost.resize(bottom + 1);
  dp.total.assign(bottom + 1, 0.0);
  dp.cost[bottom].assign(tree.node_count(bottom), std::exp2(-bottom * s));
  dp.total[bottom] = dp.cost[bottom].front() * static_cast<double>(tree.node_count(bottom));
  for (int l = bottom - 1; l >= 0; --l) {
    const double own = std::exp2(-l * s);
    auto& cur = dp.cost[l];
    const auto& below = dp.cost[l + 1];
    cur.resize(tree.node_count(l));
    double sum = 0.0;
    for (std::size_t node = 0; node < cur.size(); ++node) {
      const auto [cb, ce] = tree.children(l, node);
      double kids = 0.0;
      for (std::size_t c = cb; c < ce; ++c) kids += below[c];
      cur[node] = std::min(own, kids);
      sum += cur[node];
    }
    dp.total[l] = sum;
  }
  return dp;
}

void collect_witness(const DyadicTree& tree, const Dp& dp, int l, std::size_t node, int bottom, double s,
                     std::map<int, std::size_t>& hist) {
  if (l == bottom || dp.cost[l][node] >= std::exp2(-l * s)) {
    ++hist[l];
    return;
  }
  const auto [cb, ce] = tree.children(l, node);
  for (std::size_t c = cb; c < ce; ++c) collect_witness(tree, dp, l + 1, c, bottom, s, hist);
}

// log cost at fractional top level t for one bottom level.
double log_cost_at(const std::vector<double>& totals, double t) {
  const int lo = static_cast<int>(std::floor(t));
  const double f = t - lo;
  const double a = std::log(totals[lo]);
  if (f <= 0.0 || lo + 1 >= static_cast<int>(totals.size())) return a;
  return (1.0 - f) * a + f * std::log(totals[lo + 1]);
}

struct SlopeProblem {
  const DyadicTree& tree;
  double theta;
  std::vector<int> bottoms;

  SlopeFit fit(double s) const {
    std::vector<double> x, y;
    for (int b : bottoms) {
      const auto totals = cover_costs_by_top(tree, b, s);
      const double t = theta * b;
      x.push_back(t * std::log(2.0));
      y.push_back(log_cost_at(totals, t));
    }
    return fit_line(x, y);
  }
};

// Root in [0, d] of a decreasing function by bisection to 1e-4.
template <class F>
double bisect(F&& g, double lo, double hi, bool& bracketed) {
  const double glo = g(lo), ghi = g(hi);
  bracketed = true;
  if (glo <= 0.0) {
    bracketed = glo == 0.0;
    return lo;
  }
  if (ghi >= 0.0) {
    bracketed = ghi == 0.0;
    return hi;
  }
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void to_json(nlohmann::json& j, const CoverCost& c) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [level, n] : c.witness_levels) hist[std::to_string(level)] = n;
  j = nlohmann::json{{"r", c.r},
                     {"theta", c.theta},
                     {"s", c.s},
                     {"top_level", c.top_level},
                     {"bottom_level", c.bottom_level},
                     {"cost", c.cost},
                     {"witness_levels", hist}};
}

int bottom_level(int top_level, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_argument, "theta must lie in (0, 1]");
  // Guard against j/theta landing a hair above an integer.
  return static_cast<int>(std::ceil(top_level / theta - 1e-9));
}

std::vector<double> cover_costs_by_top(const DyadicTree& tree, int bottom, double s) {
  if (bottom < 0 || bottom > tree.max_level())
    throw Error(ErrorKind::resolution_exceeded,
                fmt::format("cover bottom level {} beyond tree depth {}", bottom, tree.max_level()));
  return run_dp(tree, bottom, s).total;
}

CoverCost optimal_cover_cost(const DyadicTree& tree, int top_level, double theta, double s) {
  if (s < 0.0 || s > tree.dim()) throw Error(ErrorKind::invalid_argument, "cover exponent must lie in [0, d]");
  if (top_level < 0) throw Error(ErrorKind::invalid_argument, "top level must be >= 0");
  CoverCost c;
  c.theta = theta;
  c.s = s;
  c.top_level = top_level;
  c.bottom_level = bottom_level(top_level, theta);
  c.r = std::ldexp(1.0, -top_level);
  if (c.bottom_level > tree.max_level())
    throw Error(ErrorKind::resolution_exceeded,
                fmt::format("r^(1/theta) = 2^-{} is finer than the tree depth {}", c.bottom_level, tree.max_level()));
  const Dp dp = run_dp(tree, c.bottom_level, s);
  c.cost = dp.total[top_level];
  for (std::size_t node = 0; node < tree.node_count(top_level); ++node)
    collect_witness(tree, dp, top_level, node, c.bottom_level, s, c.witness_levels);
  return c;
}

CoverCost optimal_cover_cost(const PointCloud& cloud, double r, double theta, double s) {
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::invalid_argument, "cover scale r must lie in (0, 1]");
  int e = 0;
  if (std::frexp(r, &e) != 0.5) throw Error(ErrorKind::invalid_argument, fmt::format("cover scale {} is not dyadic", r));
  const int top = 1 - e;
  const int bottom = bottom_level(top, theta);
  if (std::ldexp(1.0, -bottom) < cloud.resolution())
    throw Error(ErrorKind::resolution_exceeded,
                fmt::format("r^(1/theta) = 2^-{} is below resolution {}", bottom, cloud.resolution()));
  const DyadicTree tree(cloud, bottom);
  return optimal_cover_cost(tree, top, theta, s);
}

void to_json(nlohmann::json& j, const IntermediateEstimate& e) {
  j = nlohmann::json{{"theta", e.theta},   {"estimate", e.estimate}, {"lower", e.lower},
                     {"upper", e.upper},   {"bracketed", e.bracketed}, {"fit", e.fit}};
}

IntermediateEstimate intermediate_dimension(const PointCloud& cloud, double theta, const IntermediateOptions& opt) {
  const DyadicTree tree(cloud, tree_depth(cloud));
  return intermediate_dimension(cloud, tree, theta, opt);
}

IntermediateEstimate intermediate_dimension(const PointCloud& cloud, const DyadicTree& tree, double theta,
                                            const IntermediateOptions& opt) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_argument, "theta must lie in (0, 1]");
  const int J = finest_level(cloud.resolution());
  if (J - 2 < 4 || J > tree.max_level())
    throw Error(ErrorKind::insufficient_scales,
                fmt::format("intermediate dimension needs at least 4 dyadic levels above resolution {}",
                            cloud.resolution()));
  if (opt.fit_levels < 3) throw Error(ErrorKind::invalid_argument, "intermediate fit needs at least 3 levels");
  SlopeProblem prob{tree, theta, {}};
  for (int b = std::max(2, J - opt.fit_levels); b <= J - 1; ++b) prob.bottoms.push_back(b);
  const double d = cloud.dim();

  IntermediateEstimate est;
  est.theta = theta;
  est.estimate = bisect([&](double s) { return prob.fit(s).slope; }, 0.0, d, est.bracketed);
  est.fit = prob.fit(est.estimate);
  bool ok = true;
  est.lower = bisect([&](double s) { return prob.fit(s).chord_min; }, 0.0, d, ok);
  est.upper = bisect([&](double s) { return prob.fit(s).chord_max; }, 0.0, d, ok);
  return est;
}

IntermediateCurve intermediate_curve(const PointCloud& cloud, std::span<const double> thetas,
                                     const IntermediateOptions& opt) {
  const DyadicTree tree(cloud, tree_depth(cloud));
  return intermediate_curve(cloud, tree, thetas, opt);
}

IntermediateCurve intermediate_curve(const PointCloud& cloud, const DyadicTree& tree, std::span<const double> thetas,
                                     const IntermediateOptions& opt) {
  IntermediateCurve out;
  out.curve.dim = cloud.dim();
  double prev = 0.0;
  for (double theta : thetas) {
    if (!out.points.empty() && !(theta > prev))
      throw Error(ErrorKind::invalid_argument, "intermediate curve: thetas must increase");
    prev = theta;
    out.points.push_back(intermediate_dimension(cloud, tree, theta, opt));
    out.curve.thetas.push_back(theta);
    out.curve.raw_values.push_back(out.points.back().estimate);
    out.curve.fit_r2.push_back(out.points.back().fit.r_squared);
    out.curve.n_anchors.push_back(out.points.back().fit.n_points);
  }
  out.curve.values = isotonic_fit(out.curve.raw_values);
  for (std::size_t i = 0; i < out.curve.size(); ++i)
    out.adjustment = std::max(out.adjustment, std::abs(out.curve.values[i] - out.curve.raw_values[i]));
  return out;
}

double hausdorff_proxy(const SpectrumCurve& curve) {
  if (curve.size() == 0) throw Error(ErrorKind::insufficient_scales, "hausdorff proxy needs a non-empty curve");
  if (curve.size() < 3) return curve.values.front();
  const std::span<const double> x(curve.thetas.data(), 3), y(curve.values.data(), 3);
  const SlopeFit fit = fit_line(x, y);
  return std::clamp(fit.intercept, 0.0, curve.values.front());
}

void write_csv(std::ostream& out, const IntermediateCurve& curve) {
  out << "theta,estimate,fit_r2\n";
  for (std::size_t i = 0; i < curve.curve.size(); ++i)
    out << fmt::format("{:.17g},{:.17g},{:.17g}\n", curve.curve.thetas[i], curve.curve.values[i],
                       curve.curve.fit_r2[i]);
}

std::vector<double> default_theta_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

}  // namespace dimlab
