#pragma once

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dimlab {

/// Finite delta-net of an ideal set in R^d.
///
/// Points are stored row-major and kept in lexicographic order with exact
/// duplicates removed, so two clouds built from the same coordinates compare
/// equal bit for bit. `resolution` is the net guarantee: every point of the
/// ideal set lies within `resolution` of a stored point, and no scale-dependent
/// estimator looks below it.
class PointCloud {
 public:
  PointCloud(int dim, double resolution, std::vector<double> coords, std::string label = {});

  int dim() const noexcept { return dim_; }
  double resolution() const noexcept { return resolution_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(dim_); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  friend bool operator==(const PointCloud& a, const PointCloud& b) {
    return a.dim_ == b.dim_ && a.resolution_ == b.resolution_ && a.coords_ == b.coords_;
  }

 private:
  int dim_;
  double resolution_;
  std::vector<double> coords_;
  std::string label_;
};

/// Recipe for a canonical cloud. `delta == 0` inside a product means "inherit
/// the product's delta".
struct GeneratorSpec {
  enum class Kind { sequence_set, segment, grid_square, cantor, product, explicit_points };

  Kind kind = Kind::segment;
  double delta = 0.0;
  double p = 1.0;                  // sequence_set: {n^-p}
  double contraction = 1.0 / 3.0;  // cantor
  int copies = 2;                  // cantor
  std::vector<GeneratorSpec> factors;
  int dim = 1;                     // explicit_points
  std::vector<double> points;      // explicit_points, row-major

  static GeneratorSpec sequence_set(double p, double delta);
  static GeneratorSpec segment(double delta);
  static GeneratorSpec grid_square(double delta);
  static GeneratorSpec cantor(double contraction, int copies, double delta);
  static GeneratorSpec product(std::vector<GeneratorSpec> factors, double delta);
  static GeneratorSpec explicit_points(int dim, std::vector<double> points, double delta);

  int ambient_dim() const;
};

const char* to_string(GeneratorSpec::Kind kind);

void to_json(nlohmann::json& j, const GeneratorSpec& spec);
void from_json(const nlohmann::json& j, GeneratorSpec& spec);

PointCloud generate(const GeneratorSpec& spec);

/// Greedy maximal r-separated subset in lexicographic point order.
/// Returned points are pairwise more than r apart and every input point is
/// within r of one of them. Requires r >= cloud.resolution().
PointCloud maximal_separated_subset(const PointCloud& cloud, double r);

/// Same greedy net without the resolution floor; used internally when a
/// solver needs a cover finer than the declared resolution.
std::vector<std::size_t> greedy_net_indices(const PointCloud& cloud, double r);

struct DyadicCube {
  int level = 0;
  std::vector<std::int64_t> index;  // corner = index * 2^-level

  double side() const;
  std::vector<double> corner() const;
};

/// Index of the level-j cube holding coordinate x. Cubes are half-open
/// [a, a + 2^-j), except that x = 1 joins the last cube of [0,1], so the grid
/// partitions the closed unit cube exactly.
inline std::int64_t cube_index(double x, int level) {
  const auto v = static_cast<std::int64_t>(std::floor(std::ldexp(x, level)));
  return x == 1.0 ? v - 1 : v;
}

/// Assigns every point to its level-j cube (see cube_index).
/// Only occupied cubes are returned, sorted by corner.
std::vector<std::pair<DyadicCube, std::vector<std::size_t>>> dyadic_decompose(
    const PointCloud& cloud, int level);

/// Smallest j with 2^-j <= r, i.e. ceil(log2(1/r)), computed exactly.
int level_for_scale(double r);

/// Largest j with 2^-j >= delta.
int finest_level(double delta);

void write_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace dimlab
