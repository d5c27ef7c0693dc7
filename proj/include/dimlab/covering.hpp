#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "dimlab/dyadic_tree.hpp"
#include "dimlab/geometry.hpp"

namespace dimlab {

/// Least-squares line through (x, y) plus windowed slope extremes.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double r_min = 0.0;  // scale range the fit used
  double r_max = 0.0;
  double chord_min = 0.0;  // extremes of sliding-window slopes
  double chord_max = 0.0;
  std::size_t n_points = 0;
};

void to_json(nlohmann::json& j, const SlopeFit& fit);

/// Ordinary least squares of y on x. Constant y gives slope 0 and r^2 = 1.
/// `window` sets the sliding-window length for chord_min/chord_max.
SlopeFit fit_line(std::span<const double> x, std::span<const double> y, std::size_t window = 4);

struct CountCurve {
  enum class Kind { global, local };

  std::vector<double> scales;        // decreasing
  std::vector<std::size_t> counts;   // non-decreasing
  Kind kind = Kind::global;
  std::vector<double> center;        // local curves only
  double outer_radius = 0.0;         // local curves only
};

void write_csv(std::ostream& out, const CountCurve& curve);

/// Occupied level-ceil(log2(1/r)) dyadic cubes. Requires r >= resolution.
std::size_t box_count(const PointCloud& cloud, double r);
std::size_t box_count(const DyadicTree& tree, int level);

/// Occupied level-ceil(log2(1/r)) cubes among cloud points within distance R
/// of `center`, which must itself be a cloud point.
std::size_t local_box_count(const PointCloud& cloud, std::span<const double> center, double R, double r);

/// Exact tree-accelerated variant; `center` may be any point of R^d.
std::size_t local_box_count(const DyadicTree& tree, std::span<const double> center, double R, int level);

/// Occupied level cubes whose midpoint lies within R of `center`. Unlike
/// local_box_count there is no systematic boundary layer, so small ratios
/// R/r are not inflated.
std::size_t local_mesh_count(const DyadicTree& tree, std::span<const double> center, double R, int level);

/// local_mesh_count averaged over the 2^(q d) grid shifts by multiples of
/// 2^-(level+q). Approaches vol(X_{r/2} ∩ B(center, R)) / r^d as q grows.
/// Requires level + q <= tree depth.
double local_shifted_count(const DyadicTree& tree, std::span<const double> center, double R, int level, int q);

/// Shift refinement used for a ball of R/r = rho: enough that rho 2^q >= 8,
/// capped at 3 and by the tree depth.
int shift_refinement(double rho, int level, int max_level);

/// Slope of log N against -log r; requires at least three scales.
SlopeFit fit_loglog(const CountCurve& curve);

struct BoxDimensionEstimate {
  double lower = 0.0;
  double upper = 0.0;
  SlopeFit fit;
  CountCurve curve;
};

/// Grid counts at r = 2^-j for j = 2 .. finest_level(delta) - 1.
BoxDimensionEstimate estimate_box_dimension(const PointCloud& cloud);
BoxDimensionEstimate estimate_box_dimension(const PointCloud& cloud, const DyadicTree& tree);

/// Tree depth the estimators use for a cloud: finest_level(resolution), at least 0.
int tree_depth(const PointCloud& cloud);

}  // namespace dimlab
