#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "dimlab/covering.hpp"
#include "dimlab/geometry.hpp"

namespace dimlab {

/// Probability measure on a point cloud.
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointCloud support, std::vector<double> weights);

  static DiscreteMeasure uniform(PointCloud support);
  static DiscreteMeasure point_mass(std::vector<double> x, double resolution = 1e-6);

  const PointCloud& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  int dim() const noexcept { return support_.dim(); }

 private:
  PointCloud support_;
  std::vector<double> weights_;
};

void write_csv(std::ostream& out, const DiscreteMeasure& mu);

struct KernelSpec {
  enum class Family { box_profile, intermediate_profile };

  Family family = Family::box_profile;
  double r = 0.5;
  double s = 1.0;
  int k = 1;           // intermediate family only
  double theta = 1.0;  // intermediate family only

  static KernelSpec box(double r, double s);
  static KernelSpec intermediate(double r, double theta, double s, int k);
  void validate() const;
};

/// Kernel value at distance |x|; 1 at the origin.
double kernel_eval(const KernelSpec& spec, double dist);
double kernel_eval(const KernelSpec& spec, std::span<const double> x);

/// sum_ij w_i w_j phi(x_i - x_j)
double energy(const DiscreteMeasure& mu, const KernelSpec& spec);

struct EquilibriumOptions {
  double tol = 1e-8;  // on the duality gap, relative to the energy
  std::size_t max_iter = 100000;
  bool polish = true;  // exact solve on the final support
  int restarts = 32;   // extra descents from sparse random starts
  std::uint64_t seed = 1;
};

struct Equilibrium {
  std::vector<double> weights;
  double energy = 0.0;
  double gap = 0.0;               // 2 (energy - min potential)
  double support_spread = 0.0;    // max - min potential over the support
  std::size_t iterations = 0;
  std::size_t support_size = 0;
  bool converged = false;
};

/// Minimises sum w_i w_j K_ij over the simplex for K_ij = phi(x_i - x_j):
/// Frank-Wolfe with away steps from `start` (uniform by default), then an
/// exact solve of the optimality system on the support found. The kernel
/// matrix is not positive semidefinite in general, so each descent ends at a
/// KKT point (potential >= energy everywhere, = energy on the support); the
/// lowest of `restarts` further descents is returned.
Equilibrium equilibrium(const PointCloud& cloud, const KernelSpec& spec, const EquilibriumOptions& opt = {},
                        std::optional<std::span<const double>> start = std::nullopt);

DiscreteMeasure equilibrium_measure(const PointCloud& cloud, const KernelSpec& spec, double tol = 1e-8);
DiscreteMeasure equilibrium_measure(const PointCloud& cloud, const KernelSpec& spec, const EquilibriumOptions& opt);

/// 1 / minimal energy.
double capacity(const PointCloud& cloud, const KernelSpec& spec, const EquilibriumOptions& opt = {});

struct CapacityCurve {
  std::vector<double> scales;
  std::vector<double> capacities;
  std::vector<std::size_t> support_sizes;
  SlopeFit fit;  // log C against -log r over the finest scales
};

void write_csv(std::ostream& out, const CapacityCurve& curve);

struct CapacityOptions {
  std::size_t max_support = 8192;  // largest subsample handed to the solver
  double net_factor = 1.0;         // subsample = greedy net at net_factor * r
  int min_scales = 3;
  int fit_levels = 3;  // finest ladder scales in the slope fit
  EquilibriumOptions solver = profile_solver();

  // Loose gap, single descent: slopes need about three digits of energy.
  static EquilibriumOptions profile_solver() {
    EquilibriumOptions o;
    o.tol = 1e-3;
    o.restarts = 0;
    return o;
  }
};

/// Dyadic scales r = 2^-j (j >= 1, net_factor r >= resolution) whose
/// subsample fits in max_support, with the subsample for each.
struct ScaleLadder {
  std::vector<int> levels;
  std::vector<PointCloud> subsamples;
};

ScaleLadder scale_ladder(const PointCloud& cloud, const CapacityOptions& opt = {});

CapacityCurve capacity_curve(const ScaleLadder& ladder, const KernelSpec& shape, const CapacityOptions& opt = {});

struct ProfileEstimate {
  double estimate = 0.0;
  bool bracketed = true;
  CapacityCurve curve;
};

void to_json(nlohmann::json& j, const ProfileEstimate& p);

/// Slope of log C_r^s against -log r, clipped to [0, d].
ProfileEstimate box_dimension_profile(const PointCloud& cloud, double s, const CapacityOptions& opt = {});
ProfileEstimate box_dimension_profile(const ScaleLadder& ladder, int dim, double s, const CapacityOptions& opt = {});

/// Root in s in [0, k] of slope(log C_{r,theta}^{s,k}) - s.
ProfileEstimate intermediate_dimension_profile(const PointCloud& cloud, double theta, int k,
                                               const CapacityOptions& opt = {});
ProfileEstimate intermediate_dimension_profile(const ScaleLadder& ladder, double theta, int k,
                                               const CapacityOptions& opt = {});

}  // namespace dimlab
