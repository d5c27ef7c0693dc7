#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimlab/capacity.hpp"
#include "dimlab/geometry.hpp"

namespace dimlab {

/// k-dimensional subspace of R^d as an orthonormal frame (k rows of length d).
class Subspace {
 public:
  Subspace(int d, int k, std::vector<double> frame);

  /// Line in the plane at angle phi from the first axis.
  static Subspace line(double phi);

  int ambient_dim() const noexcept { return d_; }
  int dim() const noexcept { return k_; }
  const std::vector<double>& frame() const noexcept { return frame_; }
  std::span<const double> row(int i) const { return {frame_.data() + static_cast<std::size_t>(i) * d_, static_cast<std::size_t>(d_)}; }

  /// Coordinates of P_V x in the frame basis.
  std::vector<double> coordinates(std::span<const double> x) const;
  /// Frame^T y: the frequency in R^d that y in V stands for.
  std::vector<double> embed(std::span<const double> y) const;

  /// FNV-1a over the frame bytes.
  std::uint64_t hash() const;

 private:
  int d_, k_;
  std::vector<double> frame_;
};

/// Orthonormalised standard-normal frame; the law is rotation invariant.
Subspace sample_grassmannian(int d, int k, std::uint64_t seed);

/// Images are snapped to a resolution/4 grid so rounding noise does not
/// create near-duplicate points; the resolution is inherited.
PointCloud project_cloud(const PointCloud& cloud, const Subspace& V);

/// Same snap; weights of coincident images are summed.
DiscreteMeasure pushforward_measure(const DiscreteMeasure& mu, const Subspace& V);

struct SweepEstimator {
  enum class Kind { box, assouad_spectrum, intermediate, fourier };
  Kind kind = Kind::box;
  double theta = 1.0;

  /// "box", "assouad_spectrum(0.5)", "intermediate(0.5)", "fourier(0.5)".
  static SweepEstimator parse(const std::string& text);
  std::string id() const;
  double apply(const PointCloud& projected) const;
};

struct SweepOptions {
  std::size_t n_dirs = 257;  // angle grid size in G(2,1), sample count elsewhere
  bool include_axes = true;  // G(2,1) only
  bool random = false;       // sample G(2,1) too instead of the grid
  bool normalize = true;     // rescale each image to unit extent (resolution scales with it)
  std::uint64_t seed = 1;
};

struct SweepDirection {
  std::size_t index = 0;
  double angle = -1.0;  // G(2,1) only
  std::uint64_t frame_hash = 0;
  bool axis = false;
  bool ok = true;
  double estimate = 0.0;
  std::string error;
};

struct SweepResult {
  int ambient_dim = 2;
  int dim = 1;
  std::string estimator_id;
  std::vector<SweepDirection> directions;
  // Over non-axis directions whose estimator succeeded.
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Applies the estimator to the projection on each direction. Failures are
/// recorded on the direction, not thrown.
SweepResult direction_sweep(const PointCloud& cloud, int k, const SweepEstimator& estimator,
                            const SweepOptions& opt = {});

/// Fraction of successful non-axis directions with estimate < u.
double exceptional_fraction(const SweepResult& sweep, double u);

void write_csv(std::ostream& out, const SweepResult& sweep);
void to_json(nlohmann::json& j, const SweepResult& sweep);

}  // namespace dimlab
