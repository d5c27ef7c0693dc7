#include "dimlab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

constexpr std::size_t kDenseLimit = 8192;
// Exact support solves are cubic; beyond this the first-order iterate stands.
constexpr std::size_t kPolishLimit = 512;

Eigen::MatrixXd kernel_matrix(const PointCloud& cloud, const KernelSpec& spec) {
  const std::size_t n = cloud.size();
  const int d = cloud.dim();
  Eigen::MatrixXd K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    const auto a = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = cloud.point(j);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
      K(i, j) = K(j, i) = kernel_eval(spec, std::sqrt(acc));
    }
  }
  return K;
}

// Exact optimality system on a support: K_S v = 1, w = v / sum v. Grows or
// shrinks the support until weights are positive and no outside potential
// undercuts the energy. Returns false if that does not settle.
bool polish(const Eigen::MatrixXd& K, std::vector<double>& w) {
  const std::size_t n = w.size();
  const double wmax = *std::max_element(w.begin(), w.end());
  std::vector<std::size_t> S;
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] > 1e-10 * wmax) S.push_back(i);
  if (S.size() > kPolishLimit) return false;

  for (int round = 0; round < 64 && !S.empty(); ++round) {
    const auto m = static_cast<Eigen::Index>(S.size());
    Eigen::MatrixXd KS(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) KS(a, b) = K(S[a], S[b]);
    const Eigen::VectorXd v = KS.colPivHouseholderQr().solve(Eigen::VectorXd::Ones(m));
    const double total = v.sum();
    if (!std::isfinite(total) || total <= 0.0) return false;
    Eigen::Index worst = 0;
    if (v.minCoeff(&worst) <= 0.0) {
      S.erase(S.begin() + worst);
      continue;
    }
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index a = 0; a < m; ++a) full(S[a]) = v(a) / total;
    const Eigen::VectorXd p = K * full;
    const double gamma = full.dot(p);
    Eigen::Index low = 0;
    if (p.minCoeff(&low) < gamma * (1.0 - 1e-12)) {
      S.push_back(static_cast<std::size_t>(low));
      std::sort(S.begin(), S.end());
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) w[i] = full(static_cast<Eigen::Index>(i));
    return true;
  }
  return false;
}

void summarize(const Eigen::MatrixXd& K, Equilibrium& eq) {
  const auto n = static_cast<Eigen::Index>(eq.weights.size());
  const Eigen::Map<const Eigen::VectorXd> w(eq.weights.data(), n);
  const Eigen::VectorXd p = K * w;
  eq.energy = w.dot(p);
  eq.gap = 2.0 * (eq.energy - p.minCoeff());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  eq.support_size = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (w(i) > 0.0) {
      ++eq.support_size;
      lo = std::min(lo, p(i));
      hi = std::max(hi, p(i));
    }
  eq.support_spread = hi - lo;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(PointCloud support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (weights_.size() != support_.size())
    throw Error(ErrorKind::invalid_argument,
                fmt::format("measure has {} weights for {} points", weights_.size(), support_.size()));
  double total = 0.0;
  for (double v : weights_) {
    if (!(v >= 0.0)) throw Error(ErrorKind::invalid_argument, "measure weights must be non-negative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorKind::invalid_argument, fmt::format("measure weights sum to {}, not 1", total));
}

DiscreteMeasure DiscreteMeasure::uniform(PointCloud support) {
  const std::size_t n = support.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  // Put the rounding residue on one atom so the sum is 1 to the last bit.
  double rest = 1.0;
  for (std::size_t i = 1; i < n; ++i) rest -= w[i];
  w[0] = rest;
  return DiscreteMeasure(std::move(support), std::move(w));
}

DiscreteMeasure DiscreteMeasure::point_mass(std::vector<double> x, double resolution) {
  const int d = static_cast<int>(x.size());
  return DiscreteMeasure(PointCloud(d, resolution, std::move(x), "point"), {1.0});
}

void write_csv(std::ostream& out, const DiscreteMeasure& mu) {
  const int d = mu.dim();
  for (int k = 0; k < d; ++k) out << 'x' << k << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double v : mu.support().point(i)) out << fmt::format("{:.17g},", v);
    out << fmt::format("{:.17g}\n", mu.weights()[i]);
  }
}

KernelSpec KernelSpec::box(double r, double s) {
  KernelSpec k;
  k.family = Family::box_profile;
  k.r = r;
  k.s = s;
  k.validate();
  return k;
}

KernelSpec KernelSpec::intermediate(double r, double theta, double s, int k) {
  KernelSpec spec;
  spec.family = Family::intermediate_profile;
  spec.r = r;
  spec.theta = theta;
  spec.s = s;
  spec.k = k;
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::invalid_argument, fmt::format("kernel scale r={} outside (0,1)", r));
  if (!(s >= 0.0)) throw Error(ErrorKind::invalid_argument, "kernel exponent s must be >= 0");
  if (family == Family::intermediate_profile) {
    if (k < 1) throw Error(ErrorKind::invalid_argument, "kernel k must be >= 1");
    if (s > k) throw Error(ErrorKind::invalid_argument, fmt::format("kernel needs s <= k, got s={} k={}", s, k));
    if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_argument, "kernel theta must lie in (0,1]");
  }
}

double kernel_eval(const KernelSpec& spec, double dist) {
  const double r = spec.r;
  if (dist <= r) return 1.0;
  if (spec.family == KernelSpec::Family::box_profile) return std::pow(r / dist, spec.s);
  const double outer = std::pow(r, spec.theta);
  if (dist < outer) return std::pow(r / dist, spec.s);
  return std::pow(r, spec.theta * (spec.k - spec.s) + spec.s) / std::pow(dist, spec.k);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return kernel_eval(spec, std::sqrt(acc));
}

double energy(const DiscreteMeasure& mu, const KernelSpec& spec) {
  spec.validate();
  const auto& cloud = mu.support();
  const auto& w = mu.weights();
  const int d = cloud.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    total += w[i] * w[i];
    const auto a = cloud.point(i);
    double row = 0.0;
    for (std::size_t j = i + 1; j < mu.size(); ++j) {
      const auto b = cloud.point(j);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
      row += w[j] * kernel_eval(spec, std::sqrt(acc));
    }
    total += 2.0 * w[i] * row;
  }
  return total;
}

namespace {

// Frank-Wolfe with away steps on w (p = K w kept in step). Stops once the
// gap drops to tol * energy or the budget runs out; returns iterations used.
std::size_t frank_wolfe(const Eigen::MatrixXd& K, Eigen::Map<Eigen::VectorXd>& w, double tol, std::size_t budget,
                        bool& converged) {
  Eigen::VectorXd p = K * w;
  double gamma = w.dot(p);
  converged = false;
  std::size_t it = 0;
  for (; it < budget; ++it) {
    if (it % 1000 == 999) {
      p = K * w;
      gamma = w.dot(p);
    }
    Eigen::Index fw = 0;
    const double pmin = p.minCoeff(&fw);
    if (2.0 * (gamma - pmin) <= tol * gamma) {
      converged = true;
      break;
    }
    Eigen::Index away = -1;
    double pmax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (w(i) > 0.0 && p(i) > pmax) {
        pmax = p(i);
        away = i;
      }
    const bool use_away = away >= 0 && w(away) < 1.0 && pmax - gamma > gamma - pmin;
    // Along the step direction: energy(t) = gamma + 2 t slope + t^2 curv.
    double slope, curv, tmax;
    if (use_away) {
      slope = gamma - pmax;
      curv = gamma - 2.0 * pmax + K(away, away);
      tmax = w(away) / (1.0 - w(away));
    } else {
      slope = pmin - gamma;
      curv = K(fw, fw) - 2.0 * pmin + gamma;
      tmax = 1.0;
    }
    const double t = curv > 0.0 ? std::min(tmax, -slope / curv) : tmax;
    if (use_away) {
      w *= 1.0 + t;
      w(away) -= t;
      if (t == tmax) w(away) = 0.0;
      p = (1.0 + t) * p - t * K.col(away);
    } else {
      w *= 1.0 - t;
      w(fw) += t;
      p = (1.0 - t) * p + t * K.col(fw);
    }
    gamma += 2.0 * t * slope + t * t * curv;
  }
  return it;
}

// One descent: coarse Frank-Wolfe, exact solve on the support, and more
// Frank-Wolfe only if the solve does not land on a KKT point.
Equilibrium descend(const Eigen::MatrixXd& K, std::vector<double> start, const EquilibriumOptions& opt) {
  Equilibrium eq;
  eq.weights = std::move(start);
  Eigen::Map<Eigen::VectorXd> w(eq.weights.data(), static_cast<Eigen::Index>(eq.weights.size()));
  const double coarse = opt.polish ? std::max(opt.tol, 1e-4) : opt.tol;
  for (const double tol : {coarse, opt.tol}) {
    bool conv = false;
    eq.iterations += frank_wolfe(K, w, tol, opt.max_iter - eq.iterations, conv);
    eq.converged = conv && tol == opt.tol;
    if (opt.polish) {
      std::vector<double> trial = eq.weights;
      if (polish(K, trial)) {
        const Eigen::Map<const Eigen::VectorXd> tw(trial.data(), w.size());
        if (tw.dot(K * tw) <= w.dot(K * w) * (1.0 + 1e-9)) {
          eq.weights = std::move(trial);
          eq.converged = true;
          break;
        }
      }
    }
    if (eq.converged) break;
  }
  summarize(K, eq);
  return eq;
}

}  // namespace

Equilibrium equilibrium(const PointCloud& cloud, const KernelSpec& spec, const EquilibriumOptions& opt,
                        std::optional<std::span<const double>> start) {
  spec.validate();
  const std::size_t n = cloud.size();
  if (n > kDenseLimit)
    throw Error(ErrorKind::invalid_argument,
                fmt::format("equilibrium solver takes at most {} points, got {}; subsample first", kDenseLimit, n));
  const Eigen::MatrixXd K = kernel_matrix(cloud, spec);

  std::vector<double> w0(n, 1.0 / static_cast<double>(n));
  if (start) {
    if (start->size() != n) throw Error(ErrorKind::invalid_argument, "warm start has the wrong length");
    // Mix in a little uniform mass so atoms dropped earlier can come back.
    const double total = std::accumulate(start->begin(), start->end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorKind::invalid_argument, "warm start has no mass");
    for (std::size_t i = 0; i < n; ++i) w0[i] = 0.9 * (*start)[i] / total + 0.1 / static_cast<double>(n);
  }
  Equilibrium best = descend(K, std::move(w0), opt);

  // The kernel matrix is indefinite, so the descent can stop in a local
  // minimum; restart from sparse random points and keep the lowest energy.
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t total_iter = best.iterations;
  for (int k = 0; k < opt.restarts && n > 1; ++k) {
    std::vector<double> r(n, 0.0);
    double sum = 0.0;
    for (auto& v : r) {
      if (unif(rng) < 0.3) v = unif(rng);
      sum += v;
    }
    r[rng() % n] += 1.0;
    sum += 1.0;
    for (auto& v : r) v /= sum;
    Equilibrium eq = descend(K, std::move(r), opt);
    total_iter += eq.iterations;
    if ((eq.converged || !best.converged) && eq.energy < best.energy * (1.0 - 1e-12)) best = std::move(eq);
  }
  best.iterations = total_iter;
  return best;
}

DiscreteMeasure equilibrium_measure(const PointCloud& cloud, const KernelSpec& spec, double tol) {
  EquilibriumOptions opt;
  opt.tol = tol;
  return equilibrium_measure(cloud, spec, opt);
}

DiscreteMeasure equilibrium_measure(const PointCloud& cloud, const KernelSpec& spec, const EquilibriumOptions& opt) {
  auto eq = equilibrium(cloud, spec, opt);
  double total = std::accumulate(eq.weights.begin(), eq.weights.end(), 0.0);
  for (double& v : eq.weights) v /= total;
  // Land the normalisation residue on the heaviest atom.
  const auto big = std::max_element(eq.weights.begin(), eq.weights.end()) - eq.weights.begin();
  total = 0.0;
  for (std::size_t i = 0; i < eq.weights.size(); ++i)
    if (static_cast<std::ptrdiff_t>(i) != big) total += eq.weights[i];
  eq.weights[big] = 1.0 - total;
  return DiscreteMeasure(cloud, std::move(eq.weights));
}

double capacity(const PointCloud& cloud, const KernelSpec& spec, const EquilibriumOptions& opt) {
  return 1.0 / equilibrium(cloud, spec, opt).energy;
}

void write_csv(std::ostream& out, const CapacityCurve& curve) {
  out << "r,capacity\n";
  for (std::size_t i = 0; i < curve.scales.size(); ++i)
    out << fmt::format("{:.17g},{:.17g}\n", curve.scales[i], curve.capacities[i]);
}

ScaleLadder scale_ladder(const PointCloud& cloud, const CapacityOptions& opt) {
  if (!(opt.net_factor > 0.0 && opt.net_factor <= 1.0))
    throw Error(ErrorKind::invalid_argument, "capacity net factor must lie in (0, 1]");
  ScaleLadder ladder;
  for (int j = 1; j <= 40; ++j) {
    const double h = opt.net_factor * std::ldexp(1.0, -j);
    if (h < cloud.resolution()) break;
    PointCloud net = maximal_separated_subset(cloud, h);
    if (net.size() > opt.max_support) break;
    ladder.levels.push_back(j);
    ladder.subsamples.push_back(std::move(net));
  }
  if (static_cast<int>(ladder.levels.size()) < opt.min_scales)
    throw Error(ErrorKind::insufficient_scales,
                fmt::format("only {} capacity scales fit in {} support points at resolution {}", ladder.levels.size(),
                            opt.max_support, cloud.resolution()));
  return ladder;
}

namespace {

CapacityCurve curve_with_warm(const ScaleLadder& ladder, const KernelSpec& shape, const CapacityOptions& opt,
                              std::vector<std::vector<double>>* warm) {
  CapacityCurve curve;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ladder.levels.size(); ++i) {
    KernelSpec spec = shape;
    spec.r = std::ldexp(1.0, -ladder.levels[i]);
    std::optional<std::span<const double>> start;
    if (warm && !(*warm)[i].empty()) start = std::span<const double>((*warm)[i]);
    const Equilibrium eq = equilibrium(ladder.subsamples[i], spec, opt.solver, start);
    if (warm) (*warm)[i] = eq.weights;
    curve.scales.push_back(spec.r);
    curve.capacities.push_back(1.0 / eq.energy);
    curve.support_sizes.push_back(ladder.subsamples[i].size());
    x.push_back(-std::log(spec.r));
    y.push_back(-std::log(eq.energy));
  }
  const std::size_t used = std::min<std::size_t>(x.size(), static_cast<std::size_t>(std::max(opt.fit_levels, 2)));
  const std::size_t first = x.size() - used;
  curve.fit = fit_line(std::span<const double>(x).subspan(first), std::span<const double>(y).subspan(first));
  curve.fit.r_min = curve.scales.back();
  curve.fit.r_max = curve.scales[first];
  return curve;
}

}  // namespace

CapacityCurve capacity_curve(const ScaleLadder& ladder, const KernelSpec& shape, const CapacityOptions& opt) {
  return curve_with_warm(ladder, shape, opt, nullptr);
}

void to_json(nlohmann::json& j, const ProfileEstimate& p) {
  j = nlohmann::json{{"estimate", p.estimate},
                     {"bracketed", p.bracketed},
                     {"scales", p.curve.scales},
                     {"capacities", p.curve.capacities},
                     {"support_sizes", p.curve.support_sizes},
                     {"fit", p.curve.fit}};
}

ProfileEstimate box_dimension_profile(const PointCloud& cloud, double s, const CapacityOptions& opt) {
  return box_dimension_profile(scale_ladder(cloud, opt), cloud.dim(), s, opt);
}

ProfileEstimate box_dimension_profile(const ScaleLadder& ladder, int dim, double s, const CapacityOptions& opt) {
  if (!(s > 0.0)) throw Error(ErrorKind::invalid_argument, "box profile needs s > 0");
  ProfileEstimate est;
  est.curve = capacity_curve(ladder, KernelSpec::box(0.5, s), opt);
  est.estimate = std::clamp(est.curve.fit.slope, 0.0, static_cast<double>(dim));
  return est;
}

ProfileEstimate intermediate_dimension_profile(const PointCloud& cloud, double theta, int k,
                                               const CapacityOptions& opt) {
  if (k < 1 || k > cloud.dim()) throw Error(ErrorKind::invalid_argument, "profile needs 1 <= k <= d");
  return intermediate_dimension_profile(scale_ladder(cloud, opt), theta, k, opt);
}

ProfileEstimate intermediate_dimension_profile(const ScaleLadder& ladder, double theta, int k,
                                               const CapacityOptions& opt) {
  if (k < 1) throw Error(ErrorKind::invalid_argument, "profile needs k >= 1");
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_argument, "theta must lie in (0, 1]");
  std::vector<std::vector<double>> warm(ladder.levels.size());
  auto h = [&](double s, CapacityCurve* keep) {
    CapacityCurve c = curve_with_warm(ladder, KernelSpec::intermediate(0.5, theta, s, k), opt, &warm);
    const double v = c.fit.slope - s;
    if (keep) *keep = std::move(c);
    return v;
  };
  ProfileEstimate est;
  if (theta == 1.0) {
    // No middle range: the kernel does not depend on s, so neither does the slope.
    est.curve = curve_with_warm(ladder, KernelSpec::intermediate(0.5, 1.0, 0.0, k), opt, &warm);
    est.estimate = std::clamp(est.curve.fit.slope, 0.0, static_cast<double>(k));
    est.bracketed = est.curve.fit.slope >= 0.0 && est.curve.fit.slope <= k;
    return est;
  }
  double lo = 0.0, hi = static_cast<double>(k);
  const double hlo = h(lo, nullptr);
  const double hhi = h(hi, nullptr);
  if (hlo <= 0.0) {
    est.bracketed = hlo == 0.0;
    est.estimate = lo;
  } else if (hhi >= 0.0) {
    est.bracketed = hhi == 0.0;
    est.estimate = hi;
  } else {
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      (h(mid, nullptr) > 0.0 ? lo : hi) = mid;
    }
    est.estimate = 0.5 * (lo + hi);
  }
  h(est.estimate, &est.curve);
  return est;
}

}  // namespace dimlab
