#include "dimlab/projections.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <regex>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "dimlab/assouad.hpp"
#include "dimlab/covering.hpp"
#include "dimlab/error.hpp"
#include "dimlab/fourier.hpp"
#include "dimlab/intermediate.hpp"

namespace dimlab {

namespace {

std::vector<double> snapped_images(const PointCloud& cloud, const Subspace& V) {
  if (cloud.dim() != V.ambient_dim())
    throw Error(ErrorKind::dimension_mismatch,
                fmt::format("projection from R^{} applied to a cloud in R^{}", V.ambient_dim(), cloud.dim()));
  const double h = cloud.resolution() / 4.0;
  const int k = V.dim();
  std::vector<double> out(cloud.size() * k);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto y = V.coordinates(cloud.point(i));
    for (int a = 0; a < k; ++a) out[i * k + a] = std::round(y[a] / h) * h;
  }
  return out;
}

// Similar copy with bounding box [0, 1]^k, so coarse grid levels are not
// wasted on an image much smaller than the unit cube.
PointCloud to_unit_extent(const PointCloud& c) {
  const int k = c.dim();
  std::vector<double> lo(k, INFINITY), hi(k, -INFINITY);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int a = 0; a < k; ++a) {
      lo[a] = std::min(lo[a], c.point(i)[a]);
      hi[a] = std::max(hi[a], c.point(i)[a]);
    }
  double extent = 0.0;
  for (int a = 0; a < k; ++a) extent = std::max(extent, hi[a] - lo[a]);
  if (!(extent > 0.0)) return c;
  std::vector<double> out(c.coords().size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int a = 0; a < k; ++a) out[i * k + a] = std::min((c.point(i)[a] - lo[a]) / extent, 1.0);
  return PointCloud(k, c.resolution() / extent, std::move(out), c.label());
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

Subspace::Subspace(int d, int k, std::vector<double> frame) : d_(d), k_(k), frame_(std::move(frame)) {
  if (k < 1 || k >= d) throw Error(ErrorKind::invalid_argument, fmt::format("subspace needs 1 <= k < d, got k={} d={}", k, d));
  if (frame_.size() != static_cast<std::size_t>(d) * k)
    throw Error(ErrorKind::invalid_argument, "subspace frame must hold k rows of d numbers");
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += frame_[a * d + i] * frame_[b * d + i];
      if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-12)
        throw Error(ErrorKind::invalid_argument, "subspace frame is not orthonormal");
    }
}

Subspace Subspace::line(double phi) { return Subspace(2, 1, {std::cos(phi), std::sin(phi)}); }

std::vector<double> Subspace::coordinates(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(d_))
    throw Error(ErrorKind::dimension_mismatch, fmt::format("point has {} coordinates, subspace lives in R^{}", x.size(), d_));
  std::vector<double> y(k_, 0.0);
  for (int a = 0; a < k_; ++a)
    for (int i = 0; i < d_; ++i) y[a] += frame_[a * d_ + i] * x[i];
  return y;
}

std::vector<double> Subspace::embed(std::span<const double> y) const {
  if (y.size() != static_cast<std::size_t>(k_))
    throw Error(ErrorKind::dimension_mismatch, fmt::format("frequency has {} coordinates, subspace has dimension {}", y.size(), k_));
  std::vector<double> z(d_, 0.0);
  for (int a = 0; a < k_; ++a)
    for (int i = 0; i < d_; ++i) z[i] += frame_[a * d_ + i] * y[a];
  return z;
}

std::uint64_t Subspace::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : frame_) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

Subspace sample_grassmannian(int d, int k, std::uint64_t seed) {
  if (k < 1 || k >= d) throw Error(ErrorKind::invalid_argument, fmt::format("G({},{}) needs 1 <= k < d", d, k));
  for (std::uint64_t sub = 0;; ++sub) {
    std::mt19937_64 rng(seed + sub * 0xD1B54A32D192ED03ULL);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd G(d, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < d; ++r) G(r, c) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    bool degenerate = false;
    for (int c = 0; c < k; ++c) degenerate |= std::abs(R(c, c)) < 1e-12;
    if (degenerate) continue;
    const Eigen::MatrixXd Q = qr.householderQ();
    std::vector<double> frame(static_cast<std::size_t>(d) * k);
    for (int c = 0; c < k; ++c) {
      // Fix the sign so the frame is a function of G alone.
      const double sign = R(c, c) < 0.0 ? -1.0 : 1.0;
      Eigen::VectorXd col = sign * Q.col(c);
      col /= col.norm();
      for (int r = 0; r < d; ++r) frame[c * d + r] = col(r);
    }
    // Re-orthogonalise once so the frame passes the 1e-12 check exactly.
    for (int c = 0; c < k; ++c) {
      for (int b = 0; b < c; ++b) {
        double dot = 0.0;
        for (int r = 0; r < d; ++r) dot += frame[c * d + r] * frame[b * d + r];
        for (int r = 0; r < d; ++r) frame[c * d + r] -= dot * frame[b * d + r];
      }
      double norm = 0.0;
      for (int r = 0; r < d; ++r) norm += frame[c * d + r] * frame[c * d + r];
      norm = std::sqrt(norm);
      for (int r = 0; r < d; ++r) frame[c * d + r] /= norm;
    }
    return Subspace(d, k, std::move(frame));
  }
}

PointCloud project_cloud(const PointCloud& cloud, const Subspace& V) {
  return PointCloud(V.dim(), cloud.resolution(), snapped_images(cloud, V), cloud.label().empty() ? "" : "P(" + cloud.label() + ")");
}

DiscreteMeasure pushforward_measure(const DiscreteMeasure& mu, const Subspace& V) {
  const auto images = snapped_images(mu.support(), V);
  const int k = V.dim();
  std::map<std::vector<double>, double> mass;
  for (std::size_t i = 0; i < mu.size(); ++i)
    mass[std::vector<double>(images.begin() + i * k, images.begin() + (i + 1) * k)] += mu.weights()[i];
  std::vector<double> coords;
  for (const auto& entry : mass) coords.insert(coords.end(), entry.first.begin(), entry.first.end());
  PointCloud support(k, mu.support().resolution(), std::move(coords));
  std::vector<double> w;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto x = support.point(i);
    w.push_back(mass.at(std::vector<double>(x.begin(), x.end())));
  }
  double total = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) total += w[i];
  w[0] = 1.0 - total;
  return DiscreteMeasure(std::move(support), std::move(w));
}

SweepEstimator SweepEstimator::parse(const std::string& text) {
  static const std::regex with_theta(R"(^\s*(assouad_spectrum|intermediate|fourier)\s*\(\s*([0-9.eE+-]+)\s*\)\s*$)");
  SweepEstimator e;
  std::smatch m;
  if (std::regex_match(text, std::regex(R"(^\s*box\s*$)"))) return e;
  if (!std::regex_match(text, m, with_theta))
    throw Error(ErrorKind::invalid_config,
                fmt::format("estimator '{}': expected box, assouad_spectrum(t), intermediate(t) or fourier(t)", text));
  const std::string name = m[1];
  e.kind = name == "assouad_spectrum" ? Kind::assouad_spectrum : name == "intermediate" ? Kind::intermediate : Kind::fourier;
  e.theta = std::stod(m[2]);
  const bool zero_ok = e.kind == Kind::fourier;
  if (!(e.theta <= 1.0 && (e.theta > 0.0 || (zero_ok && e.theta == 0.0))))
    throw Error(ErrorKind::invalid_config, fmt::format("estimator '{}': theta out of range", text));
  if (e.kind == Kind::assouad_spectrum && e.theta >= 1.0)
    throw Error(ErrorKind::invalid_config, fmt::format("estimator '{}': Assouad spectrum needs theta < 1", text));
  return e;
}

std::string SweepEstimator::id() const {
  switch (kind) {
    case Kind::box: return "box";
    case Kind::assouad_spectrum: return fmt::format("assouad_spectrum({})", theta);
    case Kind::intermediate: return fmt::format("intermediate({})", theta);
    case Kind::fourier: return fmt::format("fourier({})", theta);
  }
  return "?";
}

double SweepEstimator::apply(const PointCloud& projected) const {
  switch (kind) {
    case Kind::box: return estimate_box_dimension(projected).fit.slope;
    case Kind::assouad_spectrum: {
      const double t[] = {theta};
      const SpectrumCurve c = assouad_spectrum(projected, t);
      if (c.size() == 0)
        throw Error(ErrorKind::no_valid_scale_pairs, fmt::format("no scale pairs for theta {}", theta));
      return c.values.front();
    }
    case Kind::intermediate: return intermediate_dimension(projected, theta).estimate;
    case Kind::fourier: {
      const DiscreteMeasure mu = DiscreteMeasure::uniform(projected);
      return theta == 0.0 ? fourier_dimension_point(mu).estimate : fourier_spectrum_point(mu, theta).estimate;
    }
  }
  return 0.0;
}

SweepResult direction_sweep(const PointCloud& cloud, int k, const SweepEstimator& estimator, const SweepOptions& opt) {
  const int d = cloud.dim();
  if (k < 1 || k >= d) throw Error(ErrorKind::invalid_argument, fmt::format("sweep needs 1 <= k < d, got k={} d={}", k, d));
  if (opt.n_dirs == 0) throw Error(ErrorKind::invalid_argument, "sweep needs at least one direction");
  SweepResult res;
  res.ambient_dim = d;
  res.dim = k;
  res.estimator_id = estimator.id();

  std::vector<std::pair<Subspace, std::pair<double, bool>>> dirs;
  const bool grid = d == 2 && k == 1 && !opt.random;
  if (grid) {
    if (opt.include_axes) {
      dirs.push_back({Subspace::line(0.0), {0.0, true}});
      dirs.push_back({Subspace(2, 1, {0.0, 1.0}), {std::numbers::pi / 2.0, true}});
    }
    for (std::size_t i = 0; i < opt.n_dirs; ++i) {
      const double phi = (static_cast<double>(i) + 0.5) * std::numbers::pi / static_cast<double>(opt.n_dirs);
      dirs.push_back({Subspace::line(phi), {phi, false}});
    }
  } else {
    for (std::size_t i = 0; i < opt.n_dirs; ++i)
      dirs.push_back({sample_grassmannian(d, k, opt.seed + 0x9E3779B97F4A7C15ULL * i), {-1.0, false}});
  }

  std::vector<double> generic;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    SweepDirection dir;
    dir.index = i;
    dir.angle = dirs[i].second.first;
    dir.axis = dirs[i].second.second;
    dir.frame_hash = dirs[i].first.hash();
    try {
      PointCloud image = project_cloud(cloud, dirs[i].first);
      if (opt.normalize) image = to_unit_extent(image);
      dir.estimate = std::clamp(estimator.apply(image), 0.0, static_cast<double>(k));
      if (!dir.axis) generic.push_back(dir.estimate);
    } catch (const Error& e) {
      dir.ok = false;
      dir.error = e.what();
    }
    res.directions.push_back(std::move(dir));
  }
  if (!generic.empty()) {
    res.median = quantile(generic, 0.5);
    res.q1 = quantile(generic, 0.25);
    res.q3 = quantile(generic, 0.75);
  }
  return res;
}

double exceptional_fraction(const SweepResult& sweep, double u) {
  if (!(u >= 0.0 && u <= sweep.dim))
    throw Error(ErrorKind::invalid_argument, fmt::format("threshold {} outside [0, {}]", u, sweep.dim));
  std::size_t total = 0, below = 0;
  for (const auto& d : sweep.directions)
    if (d.ok && !d.axis) {
      ++total;
      below += d.estimate < u;
    }
  return total == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(total);
}

void write_csv(std::ostream& out, const SweepResult& sweep) {
  out << "dir_index,angle_or_frame_hash,estimate\n";
  for (const auto& d : sweep.directions) {
    const std::string key = d.angle >= 0.0 ? fmt::format("{:.17g}", d.angle) : fmt::format("{:016x}", d.frame_hash);
    out << d.index << ',' << key << ',' << (d.ok ? fmt::format("{:.17g}", d.estimate) : std::string("nan")) << '\n';
  }
}

void to_json(nlohmann::json& j, const SweepResult& sweep) {
  nlohmann::json axes = nlohmann::json::array();
  nlohmann::json failed = nlohmann::json::array();
  std::size_t ok = 0;
  for (const auto& d : sweep.directions) {
    if (d.axis && d.ok) axes.push_back({{"angle", d.angle}, {"estimate", d.estimate}});
    if (!d.ok) failed.push_back({{"dir_index", d.index}, {"error", d.error}});
    ok += d.ok;
  }
  j = nlohmann::json{{"estimator", sweep.estimator_id},
                     {"d", sweep.ambient_dim},
                     {"k", sweep.dim},
                     {"directions", sweep.directions.size()},
                     {"succeeded", ok},
                     {"median", sweep.median},
                     {"q1", sweep.q1},
                     {"q3", sweep.q3},
                     {"axes", axes},
                     {"failed", failed}};
}

}  // namespace dimlab
