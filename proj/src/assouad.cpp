#include "dimlab/assouad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

// Nets keyed by the dyadic level of their scale, shared across anchors.
class CenterCache {
 public:
  CenterCache(const PointCloud& cloud, std::size_t cap) : cloud_(cloud), cap_(cap) {}

  // Capped net for balls of radius R, and the scale it ended up at.
  const std::pair<std::vector<std::size_t>, double>& coarse(int level) {
    auto it = coarse_.find(level);
    if (it == coarse_.end()) {
      double scale = std::ldexp(1.0, -level);
      auto net = greedy_net_indices(cloud_, scale);
      while (net.size() > cap_) {
        scale *= 2.0;
        net = greedy_net_indices(cloud_, scale);
      }
      it = coarse_.emplace(level, std::make_pair(std::move(net), scale)).first;
    }
    return it->second;
  }

  const std::vector<std::size_t>& full(int level) {
    auto it = full_.find(level);
    if (it == full_.end()) it = full_.emplace(level, greedy_net_indices(cloud_, std::ldexp(1.0, -level))).first;
    return it->second;
  }

  std::size_t cap() const { return cap_; }

 private:
  const PointCloud& cloud_;
  std::size_t cap_;
  std::map<int, std::pair<std::vector<std::size_t>, double>> coarse_;
  std::map<int, std::vector<std::size_t>> full_;
};

constexpr std::size_t kRefine = 16;

// Max over a capped net, then over the full R/2-net near the best capped centers.
double max_count(const PointCloud& cloud, const DyadicTree& tree, CenterCache& cache, double R, int level) {
  const int q = shift_refinement(R * std::ldexp(1.0, level), level, tree.max_level());
  auto count = [&](std::span<const double> c) { return local_shifted_count(tree, c, R, level, q); };
  const int net_level = level_for_scale(R / 2.0);
  const auto& [coarse, scale] = cache.coarse(net_level);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(coarse.size());
  for (std::size_t i : coarse) scored.emplace_back(count(cloud.point(i)), i);
  double best = 0;
  for (const auto& [n, i] : scored) best = std::max(best, n);
  if (scale <= std::ldexp(1.0, -net_level)) return best;

  const std::size_t keep = std::min(kRefine, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(), std::greater<>());
  const int d = cloud.dim();
  for (std::size_t i : cache.full(net_level)) {
    const auto p = cloud.point(i);
    bool near = false;
    for (std::size_t t = 0; t < keep && !near; ++t) {
      const auto q = cloud.point(scored[t].second);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += (p[k] - q[k]) * (p[k] - q[k]);
      near = acc <= scale * scale;
    }
    if (near) best = std::max(best, count(p));
  }
  return best;
}

}  // namespace

TwoScaleSample two_scale_sample(const DyadicTree& tree, std::span<const double> center, double R, int level) {
  TwoScaleSample s;
  s.center.assign(center.begin(), center.end());
  s.R = R;
  s.r = std::ldexp(1.0, -level);
  if (!(s.r < R)) throw Error(ErrorKind::invalid_argument, "two-scale sample needs r < R");
  s.count = local_box_count(tree, center, R, level);
  s.normalized_exponent = std::max(0.0, std::log(static_cast<double>(s.count)) / std::log(R / s.r));
  return s;
}

std::vector<std::size_t> center_net(const PointCloud& cloud, double scale, std::size_t cap) {
  if (cap == 0) throw Error(ErrorKind::invalid_argument, "center cap must be positive");
  auto net = greedy_net_indices(cloud, scale);
  while (net.size() > cap) {
    scale *= 2.0;
    net = greedy_net_indices(cloud, scale);
  }
  return net;
}

double max_local_count(const PointCloud& cloud, const DyadicTree& tree, double R, int level, std::size_t cap) {
  CenterCache cache(cloud, cap);
  return max_count(cloud, tree, cache, R, level);
}

SpectrumCurve assouad_spectrum(const PointCloud& cloud, std::span<const double> thetas, const AssouadOptions& opt) {
  const DyadicTree tree(cloud, tree_depth(cloud));
  const auto box = estimate_box_dimension(cloud, tree);
  return assouad_spectrum(cloud, tree, box.fit.slope, thetas, opt);
}

SpectrumCurve assouad_spectrum(const PointCloud& cloud, const DyadicTree& tree, double box_upper,
                               std::span<const double> thetas, const AssouadOptions& opt) {
  const int J = finest_level(cloud.resolution());
  if (J > tree.max_level()) throw Error(ErrorKind::invalid_argument, "tree shallower than cloud resolution");
  const double d = cloud.dim();
  SpectrumCurve curve;
  curve.dim = cloud.dim();
  CenterCache cache(cloud, opt.max_centers);
  double prev = 0.0;
  for (double theta : thetas) {
    if (!(theta > 0.0 && theta < 1.0))
      throw Error(ErrorKind::invalid_argument, fmt::format("assouad spectrum: theta {} outside (0,1)", theta));
    if (!curve.thetas.empty() && !(theta > prev))
      throw Error(ErrorKind::invalid_argument, "assouad spectrum: thetas must increase");
    prev = theta;

    // Covering scale r = 2^-j, ball radius R = r^theta.
    std::vector<double> x, y;
    for (int j = 2; j <= J - 1; ++j) {
      const double log2_ratio = (1.0 - theta) * j;
      if (log2_ratio < opt.min_log2_ratio) continue;
      const double R = std::exp2(-theta * j);
      const double n = max_count(cloud, tree, cache, R, j);
      x.push_back(log2_ratio * std::log(2.0));
      y.push_back(std::log(n));
    }
    if (x.size() < opt.min_anchors) {
      curve.skipped.push_back(theta);
      continue;
    }
    const SlopeFit fit = fit_line(x, y);
    curve.thetas.push_back(theta);
    curve.raw_values.push_back(fit.slope);
    curve.values.push_back(std::clamp(fit.slope, std::min(box_upper, d), d));
    curve.fit_r2.push_back(fit.r_squared);
    curve.n_anchors.push_back(x.size());
  }
  if (curve.thetas.empty())
    throw Error(ErrorKind::no_valid_scale_pairs,
                fmt::format("assouad spectrum: no theta has {} usable scale pairs at resolution {}", opt.min_anchors,
                            cloud.resolution()));
  return curve;
}

SpectrumCurve upper_assouad_spectrum(const SpectrumCurve& curve) {
  SpectrumCurve out = curve;
  for (std::size_t i = 1; i < out.size(); ++i) out.values[i] = std::max(out.values[i], out.values[i - 1]);
  return out;
}

double quasi_assouad(const SpectrumCurve& curve) {
  const SpectrumCurve upper = upper_assouad_spectrum(curve);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < upper.size(); ++i)
    if (upper.thetas[i] >= 0.7) {
      x.push_back(1.0 - upper.thetas[i]);
      y.push_back(upper.values[i]);
    }
  if (x.size() < 3)
    throw Error(ErrorKind::insufficient_tail, "quasi-Assouad needs at least three spectrum values with theta >= 0.7");
  const SlopeFit fit = fit_line(x, y);
  const double top = *std::max_element(upper.values.begin(), upper.values.end());
  return std::clamp(fit.intercept, top, std::max(top, static_cast<double>(curve.dim)));
}

void to_json(nlohmann::json& j, const AssouadEstimate& est) {
  j = nlohmann::json{{"value", est.value},
                     {"raw_slope", est.raw_slope},
                     {"max_exponent", est.max_exponent},
                     {"stabilized_exponent", est.stabilized_exponent},
                     {"fit", est.fit},
                     {"log2_ratios", est.log2_ratios},
                     {"envelope", est.envelope}};
}

AssouadEstimate assouad_dimension(const PointCloud& cloud, const AssouadOptions& opt) {
  const DyadicTree tree(cloud, tree_depth(cloud));
  const auto box = estimate_box_dimension(cloud, tree);
  return assouad_dimension(cloud, tree, box.upper, opt);
}

AssouadEstimate assouad_dimension(const PointCloud& cloud, const DyadicTree& tree, double box_upper,
                                  const AssouadOptions& opt) {
  const int J = finest_level(cloud.resolution());
  if (J < 5 || J > tree.max_level())
    throw Error(ErrorKind::insufficient_scales,
                fmt::format("assouad dimension needs at least 5 dyadic levels above resolution {}", cloud.resolution()));
  // Pairs with log R / log r > 1/2 only: R/r = 2^m at r = 2^-j needs j > 2m.
  const int top = (J - 2) / 2;
  CenterCache cache(cloud, opt.max_centers);
  AssouadEstimate est;
  std::vector<double> x, y;
  for (int m = 2; m <= top; ++m) {
    double best = 0;
    for (int j = 2 * m + 1; j <= J - 1; ++j) best = std::max(best, max_count(cloud, tree, cache, std::ldexp(1.0, m - j), j));
    if (best == 0) break;
    est.log2_ratios.push_back(m);
    est.envelope.push_back(best);
    x.push_back(m * std::log(2.0));
    y.push_back(std::log(best));
    const double e = y.back() / x.back();
    est.max_exponent = std::max(est.max_exponent, e);
    if (m >= 4) est.stabilized_exponent = std::max(est.stabilized_exponent, e);
  }
  if (x.size() < 2)
    throw Error(ErrorKind::insufficient_scales, "assouad dimension: fewer than two usable scale ratios");
  est.fit = fit_line(x, y);
  est.raw_slope = est.fit.slope;
  const double d = cloud.dim();
  est.value = std::clamp(est.raw_slope, std::min(box_upper, d), d);
  return est;
}

}  // namespace dimlab
