#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "dimlab/error.hpp"
#include "dimlab/geometry.hpp"

using namespace dimlab;

namespace {

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

PointCloud random_cloud(int d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(n * d);
  for (auto& v : c) v = u(rng);
  return PointCloud(d, 1e-9, c);
}

}  // namespace

TEST_CASE("segment grid at 2^-4 has the 17 points k/16") {
  const auto s = generate(GeneratorSpec::segment(1.0 / 16));
  REQUIRE(s.size() == 17);
  for (std::size_t k = 0; k <= 16; ++k) CHECK(s.point(k)[0] == k / 16.0);
}

TEST_CASE("clouds are sorted and deduplicated") {
  PointCloud c(2, 0.1, {0.5, 0.5, 0.1, 0.9, 0.5, 0.5, 0.1, 0.2});
  REQUIRE(c.size() == 3);
  CHECK(c.point(0)[0] == 0.1);
  CHECK(c.point(0)[1] == 0.2);
  CHECK(c.point(2)[0] == 0.5);
  PointCloud same(2, 0.1, {0.1, 0.2, 0.5, 0.5, 0.1, 0.9});
  CHECK(c == same);
}

TEST_CASE("bad inputs are rejected") {
  CHECK_THROWS_AS(PointCloud(2, 0.1, {0.1, 0.2, 0.3}), Error);
  CHECK_THROWS_AS(generate(GeneratorSpec::segment(0.0)), Error);
  CHECK_THROWS_AS(generate(GeneratorSpec::sequence_set(-1.0, 0.01)), Error);
}

TEST_CASE("sequence set is a delta-net of {n^-p}") {
  const double delta = std::ldexp(1.0, -12);
  for (double p : {0.5, 1.0, 2.0}) {
    const auto f = generate(GeneratorSpec::sequence_set(p, delta));
    CHECK(f.resolution() == delta);
    // every n^-p lies within delta of the cloud; check a spread of n
    for (int n : {1, 2, 3, 10, 100, 1000, 100000}) {
      const double x = std::pow(n, -p);
      double best = 1e9;
      for (std::size_t i = 0; i < f.size(); ++i) best = std::min(best, std::abs(f.point(i)[0] - x));
      CHECK(best <= delta);
    }
    CHECK(f.point(0)[0] == 0.0);
    CHECK(f.point(f.size() - 1)[0] == 1.0);
  }
}

TEST_CASE("product of sequence set and segment") {
  const auto x = generate(GeneratorSpec::product({GeneratorSpec::sequence_set(1.0, 0.0), GeneratorSpec::segment(0.0)},
                                                 std::ldexp(1.0, -10)));
  CHECK(x.dim() == 2);
  CHECK(x.label() == "{1/n}x[0,1]");
  const auto a = generate(GeneratorSpec::sequence_set(1.0, std::ldexp(1.0, -10)));
  const auto b = generate(GeneratorSpec::segment(std::ldexp(1.0, -10)));
  CHECK(x.size() == a.size() * b.size());
}

TEST_CASE("cantor set has m^level points at contraction c") {
  const auto c = generate(GeneratorSpec::cantor(1.0 / 3.0, 2, 1e-3));
  // pieces shrink to diameter <= delta: 3^-7 < 1e-3 < 3^-6
  CHECK(c.size() == 128);
  CHECK(c.point(0)[0] == 0.0);
}

TEST_CASE("generator json round trip") {
  const auto g = GeneratorSpec::product({GeneratorSpec::sequence_set(0.5, 0.0), GeneratorSpec::segment(0.0)}, 0.01);
  nlohmann::json j = g;
  const auto back = j.get<GeneratorSpec>();
  CHECK(generate(back) == generate(g));
  CHECK_THROWS_AS(nlohmann::json({{"kind", "blob"}}).get<GeneratorSpec>(), Error);
}

TEST_CASE("cube index partitions the closed unit interval") {
  CHECK(cube_index(0.0, 3) == 0);
  CHECK(cube_index(0.125, 3) == 1);
  CHECK(cube_index(0.999, 3) == 7);
  CHECK(cube_index(1.0, 3) == 7);
  CHECK(cube_index(1.0, 0) == 0);
  // nesting: parent index is child index / 2
  for (double x : {0.0, 0.3, 0.5, 0.77, 1.0})
    for (int j = 1; j < 20; ++j) CHECK(cube_index(x, j) / 2 == cube_index(x, j - 1));
}

TEST_CASE("level helpers") {
  CHECK(level_for_scale(0.5) == 1);
  CHECK(level_for_scale(0.3) == 2);
  CHECK(level_for_scale(1.0) == 0);
  CHECK(finest_level(std::ldexp(1.0, -10)) == 10);
  CHECK(finest_level(0.0009) == 10);
}

TEST_CASE("dyadic decomposition matches brute-force cube indices") {
  const auto c = random_cloud(2, 300, 3);
  for (int level : {0, 1, 3, 5}) {
    std::set<std::pair<std::int64_t, std::int64_t>> cubes;
    for (std::size_t i = 0; i < c.size(); ++i)
      cubes.insert({cube_index(c.point(i)[0], level), cube_index(c.point(i)[1], level)});
    const auto dec = dyadic_decompose(c, level);
    CHECK(dec.size() == cubes.size());
    std::size_t total = 0;
    for (const auto& [cube, pts] : dec) {
      total += pts.size();
      for (auto i : pts) {
        CHECK(cube_index(c.point(i)[0], level) == cube.index[0]);
        CHECK(cube_index(c.point(i)[1], level) == cube.index[1]);
      }
    }
    CHECK(total == c.size());
  }
}

TEST_CASE("greedy net is separated and covering") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = random_cloud(1 + static_cast<int>(seed % 3), 400, seed);
    for (double r : {0.05, 0.2}) {
      const auto net = maximal_separated_subset(c, r);
      for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = i + 1; j < net.size(); ++j) CHECK(dist(net.point(i), net.point(j)) > r);
      for (std::size_t i = 0; i < c.size(); ++i) {
        double best = 1e9;
        for (std::size_t j = 0; j < net.size(); ++j) best = std::min(best, dist(c.point(i), net.point(j)));
        CHECK(best <= r);
      }
    }
  }
  const auto s = generate(GeneratorSpec::segment(0.01));
  CHECK_THROWS_AS(maximal_separated_subset(s, 0.001), Error);
}

TEST_CASE("point csv") {
  PointCloud c(2, 0.5, {0.0, 1.0, 0.5, 0.25});
  std::ostringstream os;
  write_csv(os, c);
  CHECK(os.str() == "x0,x1\n0,1\n0.5,0.25\n");
}
