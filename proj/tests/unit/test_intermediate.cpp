#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dimlab/capacity.hpp"
#include "dimlab/covering.hpp"
#include "dimlab/error.hpp"
#include "dimlab/intermediate.hpp"
#include "brute_force.hpp"

using namespace dimlab;

TEST_CASE("cover DP equals exhaustive antichain enumeration") {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int d = 1 + static_cast<int>(rng() % 2);
    const int depth = 2 + static_cast<int>(rng() % 5);  // <= 6
    const std::size_t n = 2 + rng() % 5;
    std::vector<double> coords;
    for (std::size_t i = 0; i < n * d; ++i) coords.push_back(static_cast<double>(rng() % (1u << depth)) / (1u << depth));
    const PointCloud c(d, std::ldexp(1.0, -depth), coords);
    const DyadicTree tree(c, depth);
    for (double s : {0.0, 1.0, 2.0, 0.37, 1.61}) {
      if (s > d) continue;
      for (int top = 0; top <= depth; ++top) {
        for (double theta : {1.0, 0.5, 0.34}) {
          const int bottom = bottom_level(top, theta);
          if (bottom > depth) continue;
          const double dp = optimal_cover_cost(tree, top, theta, s).cost;
          const double brute = brute::min_cover_cost(c, top, bottom, s);
          if (s == std::floor(s)) CHECK(dp == brute);  // dyadic costs add exactly
          else CHECK(dp == doctest::Approx(brute).epsilon(1e-13));
          ++compared;
        }
      }
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("cover witness histogram accounts for the cost") {
  const auto c = generate(GeneratorSpec::product({GeneratorSpec::sequence_set(1.0, 0.0), GeneratorSpec::segment(0.0)},
                                                 std::ldexp(1.0, -8)));
  const auto cc = optimal_cover_cost(c, 0.125, 0.5, 1.2);
  CHECK(cc.bottom_level == 6);
  double total = 0.0;
  for (const auto& [level, count] : cc.witness_levels) {
    CHECK(level >= 3);
    CHECK(level <= 6);
    total += count * std::exp2(-level * 1.2);
  }
  CHECK(total == doctest::Approx(cc.cost).epsilon(1e-12));
}

TEST_CASE("s = d on the full square costs the same at every level") {
  const auto sq = generate(GeneratorSpec::grid_square(std::ldexp(1.0, -7)));
  const DyadicTree tree(sq, 7);
  for (int top = 1; top <= 3; ++top) CHECK(optimal_cover_cost(tree, top, 0.5, 2.0).cost == doctest::Approx(1.0));
}

TEST_CASE("cost is non-increasing in s") {
  const auto c = generate(GeneratorSpec::sequence_set(1.0, std::ldexp(1.0, -12)));
  const DyadicTree tree(c, 12);
  double prev = INFINITY;
  for (double s = 0.0; s <= 1.0; s += 0.1) {
    const double v = optimal_cover_cost(tree, 4, 0.4, s).cost;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("bottom level and domain errors") {
  CHECK(bottom_level(3, 0.5) == 6);
  CHECK(bottom_level(3, 1.0 / 3.0) == 9);
  CHECK(bottom_level(2, 0.3) == 7);
  CHECK_THROWS_AS(bottom_level(2, 0.0), Error);
  const auto s = generate(GeneratorSpec::segment(std::ldexp(1.0, -6)));
  CHECK_THROWS_AS(optimal_cover_cost(s, 0.125, 0.25, 0.5), Error);  // 2^-12 below resolution
  CHECK_THROWS_AS(optimal_cover_cost(s, 0.3, 0.5, 0.5), Error);     // not dyadic
}

TEST_CASE("intermediate dimensions of the segment are 1") {
  const auto s = generate(GeneratorSpec::segment(std::ldexp(1.0, -14)));
  for (double theta : {0.2, 0.5, 1.0}) CHECK(intermediate_dimension(s, theta).estimate == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("theta = 1 matches the box slope") {
  const auto x = generate(GeneratorSpec::product({GeneratorSpec::sequence_set(1.0, 0.0), GeneratorSpec::segment(0.0)},
                                                 std::ldexp(1.0, -11)));
  const double box = estimate_box_dimension(x).upper;
  CHECK(std::abs(intermediate_dimension(x, 1.0).estimate - box) <= 0.05);
}

TEST_CASE("intermediate curve is monotone and in range") {
  const auto f = generate(GeneratorSpec::sequence_set(1.0, std::ldexp(1.0, -14)));
  const auto c = intermediate_curve(f, default_theta_grid());
  for (std::size_t i = 0; i < c.curve.size(); ++i) {
    CHECK(c.curve.values[i] >= 0.0);
    CHECK(c.curve.values[i] <= 1.0);
    if (i) CHECK(c.curve.values[i] >= c.curve.values[i - 1]);
  }
  // closed form theta / (theta + 1)
  CHECK(c.curve.values.back() == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("cover costs dominate r^s times the capacity") {
  // Any cover by cubes of side in [r^(1/theta), r] gives a measure-free
  // upper bound on 1/energy; the slack covers the side/diameter convention.
  const auto x = generate(GeneratorSpec::product({GeneratorSpec::sequence_set(1.0, 0.0), GeneratorSpec::segment(0.0)},
                                                 std::ldexp(1.0, -7)));
  EquilibriumOptions opt;
  opt.tol = 1e-5;
  opt.restarts = 2;
  for (double s : {0.8, 1.3}) {
    const int top = 3;
    const double theta = 0.5;
    const double r = std::ldexp(1.0, -top);
    const double cost = optimal_cover_cost(x, r, theta, s).cost;
    const auto net = maximal_separated_subset(x, std::ldexp(1.0, -6));
    const double cap = capacity(net, KernelSpec::intermediate(r, theta, s, 2), opt);
    CHECK(cost * std::pow(2.0, s * 2 / 2.0) >= std::pow(r, s) * cap);
  }
}
