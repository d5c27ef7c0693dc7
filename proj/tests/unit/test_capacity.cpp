#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dimlab/capacity.hpp"
#include "dimlab/error.hpp"
#include "brute_force.hpp"

using namespace dimlab;

namespace {

KernelSpec random_spec(int family, int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (family == 0) return KernelSpec::box(0.02 + 0.4 * u(rng), 0.2 + 2.8 * u(rng));
  const int k = 1 + static_cast<int>(rng() % d);
  return KernelSpec::intermediate(0.02 + 0.4 * u(rng), 0.1 + 0.9 * u(rng), k * u(rng), k);
}

PointCloud random_cloud(int d, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(n * d);
  for (auto& v : c) v = u(rng);
  return PointCloud(d, 1e-9, c);
}

}  // namespace

TEST_CASE("kernel values") {
  const auto b = KernelSpec::box(1.0 / 16, 1.0);
  CHECK(kernel_eval(b, 0.0) == 1.0);
  CHECK(kernel_eval(b, 1.0 / 32) == 1.0);
  CHECK(kernel_eval(b, 0.25) == doctest::Approx(0.25));
  // intermediate family is continuous at both branch points
  for (double theta : {0.2, 0.5, 0.9})
    for (double s : {0.0, 0.4, 1.0}) {
      const auto k = KernelSpec::intermediate(0.01, theta, s, 1);
      const double outer = std::pow(0.01, theta);
      CHECK(kernel_eval(k, outer * (1 - 1e-12)) == doctest::Approx(kernel_eval(k, outer)).epsilon(1e-9));
      CHECK(kernel_eval(k, 0.01 * (1 + 1e-12)) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(kernel_eval(k, outer) == doctest::Approx(std::pow(0.01, (1 - theta) * s)).epsilon(1e-12));
    }
}

TEST_CASE("kernels are non-increasing in distance and in k") {
  for (double x = 0.0; x < 1.5; x += 0.01) {
    const auto k1 = KernelSpec::intermediate(0.05, 0.5, 0.7, 1);
    const auto k2 = KernelSpec::intermediate(0.05, 0.5, 0.7, 2);
    CHECK(kernel_eval(k2, x) <= kernel_eval(k1, x) + 1e-15);
    CHECK(kernel_eval(k1, x + 0.01) <= kernel_eval(k1, x) + 1e-15);
  }
}

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(KernelSpec::box(1.5, 1.0).validate(), Error);
  CHECK_THROWS_AS(KernelSpec::box(0.5, -1.0).validate(), Error);
  CHECK_THROWS_AS(KernelSpec::intermediate(0.5, 0.5, 2.0, 1).validate(), Error);
  CHECK_THROWS_AS(KernelSpec::intermediate(0.5, 0.0, 0.5, 1).validate(), Error);
}

TEST_CASE("energy closed forms and the double loop") {
  const auto b = KernelSpec::box(0.1, 1.5);
  CHECK(energy(DiscreteMeasure::point_mass({0.3, 0.4}), b) == 1.0);
  const DiscreteMeasure two = DiscreteMeasure::uniform(PointCloud(1, 1e-6, {0.0, 0.5}));
  CHECK(energy(two, b) == doctest::Approx(0.5 + 0.5 * std::pow(0.1 / 0.5, 1.5)).epsilon(1e-14));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    const auto c = random_cloud(2, 10, rng);
    std::vector<double> w(c.size());
    for (auto& v : w) v = 1.0 + static_cast<double>(rng() % 7);
    double sum = 0.0;
    for (double v : w) sum += v;
    for (auto& v : w) v /= sum;
    const DiscreteMeasure mu(c, w);
    const auto K = brute::kernel_matrix(c, b);
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    CHECK(energy(mu, b) == doctest::Approx(wv.dot(K * wv)).epsilon(1e-13));
  }
}

TEST_CASE("measure invariants") {
  CHECK_THROWS_AS(DiscreteMeasure(PointCloud(1, 0.1, {0.0, 0.5}), {0.5}), Error);
  CHECK_THROWS_AS(DiscreteMeasure(PointCloud(1, 0.1, {0.0, 0.5}), {0.7, 0.7}), Error);
  CHECK_THROWS_AS(DiscreteMeasure(PointCloud(1, 0.1, {0.0, 0.5}), {1.2, -0.2}), Error);
  const auto u = DiscreteMeasure::uniform(PointCloud(1, 0.1, {0.0, 0.5, 1.0}));
  std::ostringstream os;
  write_csv(os, u);
  CHECK(os.str().rfind("x0,weight\n", 0) == 0);
}

TEST_CASE("equilibrium matches the exhaustive support oracle") {
  std::mt19937_64 rng(7);
  for (int family = 0; family < 2; ++family) {
    for (int inst = 0; inst < 20; ++inst) {
      const int d = 1 + static_cast<int>(rng() % 2);
      const auto c = random_cloud(d, 2 + rng() % 11, rng);
      const auto spec = random_spec(family, d, rng);
      const double want = brute::min_energy(brute::kernel_matrix(c, spec));
      const auto eq = equilibrium(c, spec);
      CHECK(std::abs(eq.energy - want) <= 1e-6 * want);
      CHECK(eq.support_spread <= 1e-5 * eq.energy);
      // gap certificate: energy - gap never exceeds the true minimum
      CHECK(eq.energy - eq.gap <= want * (1 + 1e-12));
    }
  }
}

TEST_CASE("small equilibrium cases") {
  const auto b = KernelSpec::box(0.1, 1.0);
  const auto two = equilibrium(PointCloud(1, 1e-6, {0.2, 0.8}), b);
  CHECK(two.weights[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(capacity(PointCloud(2, 1e-6, {0.5, 0.5}), b) == doctest::Approx(1.0));
  // far-apart points: capacity approaches the count
  std::vector<double> spread;
  for (int i = 0; i < 8; ++i) spread.push_back(i / 7.0);
  CHECK(capacity(PointCloud(1, 1e-6, spread), KernelSpec::box(1e-4, 2.0)) == doctest::Approx(8.0).epsilon(1e-4));
}

TEST_CASE("capacity grows when points are added") {
  std::mt19937_64 rng(3);
  const auto spec = KernelSpec::box(0.1, 1.3);
  const auto c = random_cloud(2, 30, rng);
  std::vector<double> fewer(c.coords().begin(), c.coords().begin() + 40);
  CHECK(capacity(PointCloud(2, 1e-9, fewer), spec) <= capacity(c, spec) * (1 + 1e-9));
}

TEST_CASE("separated-set lower bound") {
  const auto x = generate(GeneratorSpec::product({GeneratorSpec::sequence_set(1.0, 0.0), GeneratorSpec::segment(0.0)},
                                                 std::ldexp(1.0, -6)));
  for (double r : {0.25, 0.125}) {
    const auto spec = KernelSpec::box(r, 1.0);
    const auto net = maximal_separated_subset(x, r);
    const double lower = 1.0 / energy(DiscreteMeasure::uniform(net), spec);
    CHECK(lower <= capacity(x, spec) * (1 + 1e-9));
  }
}

TEST_CASE("box profiles of the segment") {
  const auto s = generate(GeneratorSpec::segment(std::ldexp(1.0, -12)));
  // s > d converges quickly; s = d is slowed by a logarithmic factor
  CHECK(box_dimension_profile(s, 2.0).estimate == doctest::Approx(1.0).epsilon(0.05));
  const auto p = box_dimension_profile(s, 0.5);
  CHECK(p.estimate == doctest::Approx(0.5).epsilon(0.05));
  for (double v : p.curve.capacities) CHECK(v > 0.0);
}

TEST_CASE("profiles are non-decreasing in k") {
  const auto x = generate(GeneratorSpec::product({GeneratorSpec::sequence_set(1.0, 0.0), GeneratorSpec::segment(0.0)},
                                                 std::ldexp(1.0, -9)));
  CapacityOptions opt;
  opt.max_support = 1024;
  const double k1 = intermediate_dimension_profile(x, 0.5, 1, opt).estimate;
  const double k2 = intermediate_dimension_profile(x, 0.5, 2, opt).estimate;
  CHECK(k1 <= k2 + 1e-3);
}

TEST_CASE("scale ladder needs enough scales") {
  CapacityOptions opt;
  opt.min_scales = 3;
  CHECK_THROWS_AS(scale_ladder(generate(GeneratorSpec::segment(0.25)), opt), Error);
}
