#include "dimlab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Sample counts grow like R^(d-1); past this the default stops adding shells.
constexpr double kDefaultCutoff = 4096.0;

double modulus(const DiscreteMeasure& mu, std::span<const double> z) { return std::abs(ft_measure(mu, z)); }

std::vector<double> sample_one_shell(const DiscreteMeasure& mu, double R, std::size_t floor_count,
                                     std::mt19937_64& rng) {
  const int d = mu.dim();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out;
  std::vector<double> z(d);
  if (d == 1) {
    const auto n = std::max<std::size_t>(floor_count, static_cast<std::size_t>(std::ceil(8.0 * R)));
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[0] = R + (static_cast<double>(i) + unif(rng)) * R / static_cast<double>(n);
      out.push_back(modulus(mu, z));
    }
  } else if (d == 2) {
    // Arc spacing at the outer radius is at most 1/8, so unit-width strips
    // through the origin are always hit.
    constexpr std::size_t n_rad = 4;
    auto n_ang = static_cast<std::size_t>(std::ceil(16.0 * kTwoPi * R));
    n_ang = std::max(n_ang, (floor_count + n_rad - 1) / n_rad);
    out.reserve(n_ang * n_rad);
    for (std::size_t a = 0; a < n_ang; ++a)
      for (std::size_t b = 0; b < n_rad; ++b) {
        const double phi = kTwoPi * (static_cast<double>(a) + unif(rng)) / static_cast<double>(n_ang);
        // Equal-area radial strata of [R, 2R).
        const double u = (static_cast<double>(b) + unif(rng)) / static_cast<double>(n_rad);
        const double rad = R * std::sqrt(1.0 + 3.0 * u);
        z[0] = rad * std::cos(phi);
        z[1] = rad * std::sin(phi);
        out.push_back(modulus(mu, z));
      }
  } else {
    std::normal_distribution<double> gauss;
    out.reserve(floor_count);
    for (std::size_t i = 0; i < floor_count; ++i) {
      double norm = 0.0;
      for (auto& v : z) {
        v = gauss(rng);
        norm += v * v;
      }
      norm = std::sqrt(norm);
      const double rad = R * std::pow(1.0 + unif(rng) * (std::exp2(d) - 1.0), 1.0 / d);
      for (auto& v : z) v *= rad / norm;
      out.push_back(modulus(mu, z));
    }
  }
  return out;
}

FourierPoint fit_decay(std::span<const double> radii, std::span<const double> values, double theta) {
  const std::size_t n = radii.size();
  const std::size_t first = n / 2;
  std::vector<double> x, y;
  for (std::size_t i = first; i < n; ++i) {
    x.push_back(std::log(radii[i]));
    // Underflow guard for tiny theta.
    y.push_back(std::log(std::max(values[i], 1e-300)));
  }
  FourierPoint p;
  p.theta = theta;
  p.fit = fit_line(x, y);
  p.fit.r_min = radii[first];
  p.fit.r_max = radii.back();
  p.rho = -p.fit.slope;
  return p;
}

}  // namespace

std::complex<double> ft_measure(const DiscreteMeasure& mu, std::span<const double> z) {
  const int d = mu.dim();
  if (static_cast<int>(z.size()) != d)
    throw Error(ErrorKind::dimension_mismatch, fmt::format("frequency has {} coordinates, measure lives in R^{}", z.size(), d));
  const auto& w = mu.weights();
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const auto x = mu.support().point(j);
    double phase = 0.0;
    for (int k = 0; k < d; ++k) phase += z[k] * x[k];
    phase *= kTwoPi;
    re += w[j] * std::cos(phase);
    im -= w[j] * std::sin(phase);
  }
  return {re, im};
}

ShellSamples sample_shells(const DiscreteMeasure& mu, const ShellOptions& opt) {
  const double limit = 1.0 / (4.0 * mu.support().resolution());
  const double zmax = opt.z_max > 0.0 ? opt.z_max : std::min(limit, kDefaultCutoff);
  if (zmax > limit * (1.0 + 1e-12))
    throw Error(ErrorKind::cutoff_exceeds_resolution,
                fmt::format("frequency cutoff {} exceeds 1/(4 resolution) = {}", zmax, limit));
  ShellSamples out;
  out.dim = mu.dim();
  out.cutoff = zmax;
  for (int m = 0; std::ldexp(1.0, m + 1) <= zmax; ++m) out.radii.push_back(std::ldexp(1.0, m));
  if (out.radii.size() < 5)
    throw Error(ErrorKind::insufficient_scales,
                fmt::format("cutoff {} leaves {} dyadic shells, need 5", zmax, out.radii.size()));
  for (std::size_t m = 0; m < out.radii.size(); ++m) {
    std::mt19937_64 rng(opt.seed + 0x9E3779B97F4A7C15ULL * (m + 1));
    out.modulus.push_back(sample_one_shell(mu, out.radii[m], opt.samples_per_shell, rng));
  }
  return out;
}

ShellEnergyCurve shell_energies(const ShellSamples& samples, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_argument, "theta must lie in (0, 1]");
  ShellEnergyCurve c;
  c.theta = theta;
  c.cutoff = samples.cutoff;
  c.radii = samples.radii;
  for (std::size_t m = 0; m < samples.radii.size(); ++m) {
    const auto& v = samples.modulus[m];
    double acc = 0.0;
    for (double a : v) acc += std::pow(a, 2.0 / theta);
    c.values.push_back(std::pow(samples.radii[m], samples.dim) * acc / static_cast<double>(v.size()));
    c.n_samples.push_back(v.size());
  }
  return c;
}

ShellEnergyCurve shell_energies(const DiscreteMeasure& mu, double theta, const ShellOptions& opt) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_argument, "theta must lie in (0, 1]");
  return shell_energies(sample_shells(mu, opt), theta);
}

void write_csv(std::ostream& out, const ShellEnergyCurve& curve) {
  out << "R,value,n_samples\n";
  for (std::size_t i = 0; i < curve.radii.size(); ++i)
    out << fmt::format("{:.17g},{:.17g},{}\n", curve.radii[i], curve.values[i], curve.n_samples[i]);
}

void to_json(nlohmann::json& j, const FourierPoint& p) {
  j = nlohmann::json{{"theta", p.theta}, {"estimate", p.estimate}, {"rho", p.rho}, {"fit", p.fit}};
}

FourierPoint fourier_spectrum_point(const ShellSamples& samples, double theta) {
  const ShellEnergyCurve c = shell_energies(samples, theta);
  FourierPoint p = fit_decay(c.radii, c.values, theta);
  p.estimate = std::max(0.0, theta * (samples.dim + p.rho));
  return p;
}

FourierPoint fourier_spectrum_point(const DiscreteMeasure& mu, double theta, const ShellOptions& opt) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_argument, "theta must lie in (0, 1]");
  return fourier_spectrum_point(sample_shells(mu, opt), theta);
}

FourierPoint fourier_dimension_point(const ShellSamples& samples) {
  std::vector<double> peaks;
  for (const auto& v : samples.modulus) {
    const double a = *std::max_element(v.begin(), v.end());
    peaks.push_back(a * a);
  }
  FourierPoint p = fit_decay(samples.radii, peaks, 0.0);
  p.estimate = std::max(0.0, p.rho);
  return p;
}

FourierPoint fourier_dimension_point(const DiscreteMeasure& mu, const ShellOptions& opt) {
  return fourier_dimension_point(sample_shells(mu, opt));
}

void write_csv(std::ostream& out, const FourierCurve& curve) {
  out << "theta,estimate,rho,fit_r2\n";
  for (const auto& p : curve.points)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", p.theta, p.estimate, p.rho, p.fit.r_squared);
}

void to_json(nlohmann::json& j, const FourierCurve& curve) {
  j = nlohmann::json{{"points", curve.points}};
  if (!curve.witness.empty()) j["witness"] = curve.witness;
}

FourierCurve fourier_curve(const DiscreteMeasure& mu, std::span<const double> thetas, const ShellOptions& opt) {
  std::vector<double> grid{0.0, 1.0};
  for (double t : thetas) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::invalid_argument, fmt::format("theta {} outside [0, 1]", t));
    grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const ShellSamples samples = sample_shells(mu, opt);
  FourierCurve c;
  for (double t : grid) c.points.push_back(t == 0.0 ? fourier_dimension_point(samples) : fourier_spectrum_point(samples, t));
  return c;
}

FourierCurve witness_fourier_curve(const PointCloud& cloud, std::span<const double> thetas, const ShellOptions& opt) {
  const double d = cloud.dim();
  // Set-level values cap each measure at d.
  auto clip = [d](FourierCurve c) {
    for (auto& p : c.points) p.estimate = std::min(p.estimate, d);
    return c;
  };
  FourierCurve best = clip(fourier_curve(DiscreteMeasure::uniform(cloud), thetas, opt));
  best.witness.assign(best.points.size(), "uniform");

  // Equilibrium measure of the finest net that stays small.
  CapacityOptions cap;
  cap.max_support = 1024;
  cap.min_scales = 1;
  ScaleLadder ladder;
  try {
    ladder = scale_ladder(cloud, cap);
  } catch (const Error&) {
    return best;
  }
  const int j = ladder.levels.back();
  EquilibriumOptions solver;
  solver.tol = 1e-4;
  solver.restarts = 0;
  const DiscreteMeasure eq = equilibrium_measure(ladder.subsamples.back(),
                                                 KernelSpec::box(std::ldexp(1.0, -j), cloud.dim()), solver);
  ShellOptions eopt = opt;
  eopt.z_max = 0.0;
  try {
    const FourierCurve other = clip(fourier_curve(eq, thetas, eopt));
    for (std::size_t i = 0; i < best.points.size(); ++i)
      if (other.points[i].estimate > best.points[i].estimate) {
        best.points[i] = other.points[i];
        best.witness[i] = "equilibrium";
      }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::insufficient_scales) throw;
  }
  return best;
}

}  // namespace dimlab
