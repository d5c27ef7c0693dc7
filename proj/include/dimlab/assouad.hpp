#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "dimlab/covering.hpp"
#include "dimlab/dyadic_tree.hpp"
#include "dimlab/geometry.hpp"
#include "dimlab/spectrum.hpp"

namespace dimlab {

struct TwoScaleSample {
  std::vector<double> center;
  double R = 0.0;
  double r = 0.0;
  std::size_t count = 0;
  double normalized_exponent = 0.0;  // log(count) / log(R/r)
};

struct AssouadOptions {
  std::size_t max_centers = 4096;
  double min_log2_ratio = 0.5;  // anchors need R/r >= 2^this
  std::size_t min_anchors = 3;
};

/// Local count at covering level `level` of the ball B(center, R), as a sample.
TwoScaleSample two_scale_sample(const DyadicTree& tree, std::span<const double> center, double R, int level);

/// Cloud indices of a lexicographic greedy net at `scale`, coarsened by
/// doubling until it has at most `cap` points.
std::vector<std::size_t> center_net(const PointCloud& cloud, double scale, std::size_t cap);

/// Largest shift-averaged local count over a capped R/2-net, refined on the
/// full R/2-net around the best capped centers.
double max_local_count(const PointCloud& cloud, const DyadicTree& tree, double R, int level, std::size_t cap);

SpectrumCurve assouad_spectrum(const PointCloud& cloud, std::span<const double> thetas, const AssouadOptions& opt = {});
SpectrumCurve assouad_spectrum(const PointCloud& cloud, const DyadicTree& tree, double box_upper,
                               std::span<const double> thetas, const AssouadOptions& opt = {});

/// Running maximum over theta.
SpectrumCurve upper_assouad_spectrum(const SpectrumCurve& curve);

/// Limit as theta -> 1 from a linear fit of the upper spectrum against
/// (1 - theta) over theta >= 0.7.
double quasi_assouad(const SpectrumCurve& curve);

struct AssouadEstimate {
  double value = 0.0;
  double raw_slope = 0.0;            // envelope slope before clipping
  double max_exponent = 0.0;         // largest log N / log(R/r) over pairs with R/r >= 4
  double stabilized_exponent = 0.0;  // same over R/r >= 16
  SlopeFit fit;
  std::vector<int> log2_ratios;
  std::vector<double> envelope;  // max count per ratio
};

void to_json(nlohmann::json& j, const AssouadEstimate& est);

/// Slope of the max-count envelope N*(2^m) = max over scales and centers of
/// local counts at ratio R/r = 2^m, over pairs with r = 2^-j, j > 2m, and
/// fitted for 2 <= m <= (J - 2) / 2.
AssouadEstimate assouad_dimension(const PointCloud& cloud, const AssouadOptions& opt = {});
AssouadEstimate assouad_dimension(const PointCloud& cloud, const DyadicTree& tree, double box_upper,
                                  const AssouadOptions& opt = {});

}  // namespace dimlab
