#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimlab/capacity.hpp"
#include "dimlab/covering.hpp"

namespace dimlab {

/// sum_j w_j exp(-2 pi i z . x_j)
std::complex<double> ft_measure(const DiscreteMeasure& mu, std::span<const double> z);

struct ShellOptions {
  double z_max = 0.0;  // 0: min(1 / (4 resolution), 4096)
  std::size_t samples_per_shell = 512;
  std::uint64_t seed = 1;
};

/// |mu^| sampled on the dyadic shells R <= |z| < 2R, R = 1, 2, ..., 2R <= z_max.
/// Samples are stratified: in d = 1 one jittered point per stratum of [R, 2R)
/// (the transform is even in modulus), in d = 2 a jittered polar grid fine
/// enough to resolve unit-scale features at radius 2R, in d >= 3 plain
/// uniform draws. Sample counts never drop below `samples_per_shell`.
struct ShellSamples {
  int dim = 1;
  double cutoff = 0.0;
  std::vector<double> radii;
  std::vector<std::vector<double>> modulus;  // |mu^(z)| per shell
};

ShellSamples sample_shells(const DiscreteMeasure& mu, const ShellOptions& opt = {});

struct ShellEnergyCurve {
  double theta = 1.0;
  double cutoff = 0.0;
  std::vector<double> radii;
  std::vector<double> values;  // R^d * mean |mu^|^(2/theta)
  std::vector<std::size_t> n_samples;
};

ShellEnergyCurve shell_energies(const ShellSamples& samples, double theta);
ShellEnergyCurve shell_energies(const DiscreteMeasure& mu, double theta, const ShellOptions& opt = {});

void write_csv(std::ostream& out, const ShellEnergyCurve& curve);

struct FourierPoint {
  double theta = 1.0;
  double estimate = 0.0;
  double rho = 0.0;  // decay exponent: shell values ~ R^-rho
  SlopeFit fit;      // log shell value against log R, upper half of the shells
};

void to_json(nlohmann::json& j, const FourierPoint& p);

/// Shell sums R^(s/theta - d) S_R converge iff s < theta (d + rho), which is
/// the estimate. Not clipped to d.
FourierPoint fourier_spectrum_point(const ShellSamples& samples, double theta);
FourierPoint fourier_spectrum_point(const DiscreteMeasure& mu, double theta, const ShellOptions& opt = {});

/// theta = 0: decay exponent of the shell maxima of |mu^|^2.
FourierPoint fourier_dimension_point(const ShellSamples& samples);
FourierPoint fourier_dimension_point(const DiscreteMeasure& mu, const ShellOptions& opt = {});

struct FourierCurve {
  std::vector<FourierPoint> points;  // increasing theta, always includes 0 and 1
  std::vector<std::string> witness;  // set-level curves: measure behind each value
};

void write_csv(std::ostream& out, const FourierCurve& curve);
void to_json(nlohmann::json& j, const FourierCurve& curve);

FourierCurve fourier_curve(const DiscreteMeasure& mu, std::span<const double> thetas, const ShellOptions& opt = {});

/// Set-level lower bound: pointwise max of the curves of a few measures on
/// the cloud (uniform, and the box-kernel equilibrium measure of a net).
FourierCurve witness_fourier_curve(const PointCloud& cloud, std::span<const double> thetas,
                                   const ShellOptions& opt = {});

}  // namespace dimlab
