#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "dimlab/covering.hpp"
#include "dimlab/dyadic_tree.hpp"
#include "dimlab/error.hpp"

using namespace dimlab;

namespace {

PointCloud random_cloud(int d, std::size_t n, std::uint64_t seed, double res = std::ldexp(1.0, -12)) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(n * d);
  for (auto& v : c) v = u(rng);
  return PointCloud(d, res, c);
}

std::set<std::vector<std::int64_t>> cubes_of(const PointCloud& c, int level, const std::vector<std::size_t>& pts) {
  std::set<std::vector<std::int64_t>> out;
  for (auto i : pts) {
    std::vector<std::int64_t> key;
    for (int k = 0; k < c.dim(); ++k) key.push_back(cube_index(c.point(i)[k], level));
    out.insert(key);
  }
  return out;
}

// Brute force: occupied cubes among points within R of x.
std::size_t brute_local(const PointCloud& c, std::span<const double> x, double R, int level) {
  std::vector<std::size_t> pts;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < c.dim(); ++k) s += (c.point(i)[k] - x[k]) * (c.point(i)[k] - x[k]);
    if (std::sqrt(s) <= R) pts.push_back(i);
  }
  return cubes_of(c, level, pts).size();
}

}  // namespace

TEST_CASE("fit_line recovers an exact line") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(1.5 * v - 2.0);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const auto flat = fit_line(x, std::vector<double>(5, 3.0));
  CHECK(flat.slope == 0.0);
  CHECK(flat.r_squared == 1.0);
}

TEST_CASE("box count equals brute-force occupied cubes") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto c = random_cloud(1 + static_cast<int>(seed % 3), 500, seed);
    const DyadicTree tree(c, 8);
    std::vector<std::size_t> all(c.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (int level = 0; level <= 8; ++level) {
      const auto want = cubes_of(c, level, all).size();
      CHECK(box_count(tree, level) == want);
      CHECK(box_count(c, std::ldexp(1.0, -level)) == want);
    }
  }
}

TEST_CASE("local counts agree with brute force") {
  const auto c = random_cloud(2, 800, 11);
  const DyadicTree tree(c, 10);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const auto x = c.point(rng() % c.size());
    const double R = 0.05 + 0.3 * (rng() % 100) / 100.0;
    const int level = 5 + static_cast<int>(rng() % 5);  // 2^-level < R
    const auto want = brute_local(c, x, R, level);
    CHECK(local_box_count(c, x, R, std::ldexp(1.0, -level)) == want);
    CHECK(local_box_count(tree, x, R, level) == want);
  }
}

TEST_CASE("box dimension of homogeneous sets") {
  const auto seg = estimate_box_dimension(generate(GeneratorSpec::segment(std::ldexp(1.0, -14))));
  CHECK(seg.upper == doctest::Approx(1.0).epsilon(0.02));
  const auto sq = estimate_box_dimension(generate(GeneratorSpec::grid_square(std::ldexp(1.0, -9))));
  CHECK(sq.upper == doctest::Approx(2.0).epsilon(0.01));
  CHECK(sq.lower <= sq.upper);
  // counts are non-decreasing as the scale shrinks
  for (std::size_t i = 1; i < sq.curve.counts.size(); ++i) CHECK(sq.curve.counts[i] >= sq.curve.counts[i - 1]);
}

TEST_CASE("middle-third cantor set") {
  const auto c = estimate_box_dimension(generate(GeneratorSpec::cantor(1.0 / 3.0, 2, 1e-6)));
  // dyadic grids see the ternary structure with oscillating window slopes
  CHECK(c.fit.slope == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(0.05));
  CHECK(c.lower <= c.fit.slope);
  CHECK(c.fit.slope <= c.upper);
}

TEST_CASE("box count refuses scales below resolution") {
  const auto s = generate(GeneratorSpec::segment(0.01));
  CHECK_THROWS_AS(box_count(s, 0.001), Error);
}

TEST_CASE("dyadic tree ranges nest") {
  const auto c = random_cloud(3, 300, 2);
  const DyadicTree tree(c, 6);
  CHECK(tree.node_count(0) == 1);
  for (int l = 0; l < 6; ++l)
    for (std::size_t n = 0; n < tree.node_count(l); ++n) {
      const auto [pb, pe] = tree.point_range(l, n);
      const auto [cb, ce] = tree.children(l, n);
      CHECK(tree.point_range(l + 1, cb).first == pb);
      CHECK(tree.point_range(l + 1, ce - 1).second == pe);
      for (std::size_t ch = cb; ch < ce; ++ch) CHECK(tree.parent(l + 1, ch) == n);
    }
}
