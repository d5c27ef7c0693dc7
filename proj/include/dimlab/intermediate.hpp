#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "dimlab/covering.hpp"
#include "dimlab/dyadic_tree.hpp"
#include "dimlab/geometry.hpp"
#include "dimlab/spectrum.hpp"

namespace dimlab {

/// Cheapest cover by dyadic cubes with levels in [j_top, j_bot], each cube
/// costing side^s.
struct CoverCost {
  double r = 0.0;
  double theta = 1.0;
  double s = 0.0;
  int top_level = 0;
  int bottom_level = 0;
  double cost = 0.0;
  std::map<int, std::size_t> witness_levels;  // level -> cubes used
};

void to_json(nlohmann::json& j, const CoverCost& c);

/// Bottom level paired with r = 2^-j_top: ceil(j_top / theta).
int bottom_level(int top_level, double theta);

CoverCost optimal_cover_cost(const DyadicTree& tree, int top_level, double theta, double s);

/// r must be a power of two with r^(1/theta) >= resolution.
CoverCost optimal_cover_cost(const PointCloud& cloud, double r, double theta, double s);

/// Optimal cover costs for every top level 0..j_bot at once, for covers whose
/// finest admissible level is j_bot.
std::vector<double> cover_costs_by_top(const DyadicTree& tree, int bottom, double s);

struct IntermediateEstimate {
  double theta = 1.0;
  double estimate = 0.0;
  double lower = 0.0;  // roots of the extreme chord slopes
  double upper = 0.0;
  bool bracketed = true;  // false if the slope never changed sign on [0, d]
  SlopeFit fit;           // log cost against -log r at the root
};

void to_json(nlohmann::json& j, const IntermediateEstimate& e);

struct IntermediateOptions {
  int fit_levels = 6;  // finest bottom levels used in the slope fit
};

/// Root in s of the slope of log cost(r, theta, s) against -log r. Scales are
/// indexed by the bottom level j_bot (the finest `fit_levels` of 2 .. J-1)
/// with r = 2^(-theta j_bot); non-dyadic r interpolates log cost between
/// neighbouring top levels.
IntermediateEstimate intermediate_dimension(const PointCloud& cloud, double theta,
                                            const IntermediateOptions& opt = {});
IntermediateEstimate intermediate_dimension(const PointCloud& cloud, const DyadicTree& tree, double theta,
                                            const IntermediateOptions& opt = {});

struct IntermediateCurve {
  SpectrumCurve curve;  // monotone values; raw_values holds the pointwise estimates
  std::vector<IntermediateEstimate> points;
  double adjustment = 0.0;  // largest change made by the monotone projection
};

IntermediateCurve intermediate_curve(const PointCloud& cloud, std::span<const double> thetas,
                                     const IntermediateOptions& opt = {});
IntermediateCurve intermediate_curve(const PointCloud& cloud, const DyadicTree& tree, std::span<const double> thetas,
                                     const IntermediateOptions& opt = {});

/// theta -> 0 value from a line through the smallest-theta points, clipped to
/// [0, value at the smallest theta].
double hausdorff_proxy(const SpectrumCurve& curve);

void write_csv(std::ostream& out, const IntermediateCurve& curve);

/// 0.05, 0.10, ..., 1.0
std::vector<double> default_theta_grid();

}  // namespace dimlab
