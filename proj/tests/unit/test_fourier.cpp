#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dimlab/error.hpp"
#include "dimlab/fourier.hpp"

using namespace dimlab;

namespace {

// Uniform measure on {k/N : k = 0..N}: a geometric series in closed form.
std::complex<double> grid_transform(int N, double z) {
  const std::complex<double> q = std::polar(1.0, -2.0 * std::numbers::pi * z / N);
  if (std::abs(q - 1.0) < 1e-14) return 1.0;
  return (1.0 - std::pow(q, N + 1)) / ((1.0 - q) * static_cast<double>(N + 1));
}

DiscreteMeasure vertical_segment(double delta) {
  return DiscreteMeasure::uniform(
      generate(GeneratorSpec::product({GeneratorSpec::explicit_points(1, {0.0}, 0), GeneratorSpec::segment(0)}, delta)));
}

}  // namespace

TEST_CASE("transform of a point mass has modulus one") {
  const auto mu = DiscreteMeasure::point_mass({0.3, 0.7});
  for (double z : {0.0, 1.0, 17.5, 1000.25}) {
    const std::vector<double> f{z, -0.5 * z};
    CHECK(std::abs(ft_measure(mu, f)) == doctest::Approx(1.0).epsilon(1e-14));
    const double phase = -2.0 * std::numbers::pi * (0.3 * z - 0.35 * z);
    CHECK(std::arg(ft_measure(mu, f) * std::polar(1.0, -phase)) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("two half masses cancel at odd frequencies") {
  const auto mu = DiscreteMeasure::uniform(PointCloud(1, 1e-6, {0.0, 0.5}));
  for (double z : {1.0, 3.0, 7.0}) CHECK(std::abs(ft_measure(mu, std::vector<double>{z})) < 1e-14);
  for (double z : {2.0, 4.0}) CHECK(std::abs(ft_measure(mu, std::vector<double>{z})) == doctest::Approx(1.0));
}

TEST_CASE("grid measure matches the geometric sum") {
  const int N = 64;
  const auto mu = DiscreteMeasure::uniform(generate(GeneratorSpec::segment(1.0 / N)));
  for (double z : {0.0, 0.37, 1.0, 5.5, 31.9, 64.0, 100.3}) {
    const auto got = ft_measure(mu, std::vector<double>{z});
    CHECK(std::abs(got - grid_transform(N, z)) < 1e-12);
  }
}

TEST_CASE("moduli never exceed one") {
  const auto mu = DiscreteMeasure::uniform(generate(GeneratorSpec::sequence_set(1.0, std::ldexp(1.0, -10))));
  const auto s = sample_shells(mu);
  CHECK(s.cutoff == 256.0);
  for (const auto& shell : s.modulus)
    for (double v : shell) CHECK(v <= 1.0 + 1e-12);
}

TEST_CASE("shell sampling is reproducible from the seed") {
  const auto mu = vertical_segment(std::ldexp(1.0, -7));
  ShellOptions opt;
  opt.samples_per_shell = 64;
  const auto a = sample_shells(mu, opt);
  const auto b = sample_shells(mu, opt);
  CHECK(a.modulus == b.modulus);
  opt.seed = 2;
  CHECK(sample_shells(mu, opt).modulus != a.modulus);
}

TEST_CASE("cutoff errors") {
  const auto mu = DiscreteMeasure::uniform(generate(GeneratorSpec::segment(1.0 / 64)));
  ShellOptions opt;
  opt.z_max = 32.0;
  try {
    sample_shells(mu, opt);
    FAIL("expected a cutoff error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cutoff_exceeds_resolution);
  }
  opt.z_max = 8.0;  // only 3 shells
  CHECK_THROWS_AS(sample_shells(mu, opt), Error);
  CHECK_THROWS_AS(fourier_spectrum_point(mu, 0.0), Error);
  CHECK_THROWS_AS(ft_measure(mu, std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("point mass has spectrum zero") {
  const auto mu = DiscreteMeasure::point_mass({0.25}, std::ldexp(1.0, -12));
  const std::vector<double> thetas{0.0, 0.5, 1.0};
  for (const auto& p : fourier_curve(mu, thetas).points) CHECK(std::abs(p.estimate) < 0.02);
}

TEST_CASE("lebesgue measure on an interval") {
  // |mu^(z)| ~ 1/|z|: the sums converge for s < 2 at every theta, before any cap
  const auto mu = DiscreteMeasure::uniform(generate(GeneratorSpec::segment(std::ldexp(1.0, -12))));
  for (double theta : {0.25, 0.5, 1.0}) CHECK(fourier_spectrum_point(mu, theta).estimate == doctest::Approx(2.0).epsilon(0.05));
  CHECK(fourier_dimension_point(mu).estimate == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("vertical segment in the plane") {
  // no decay along the first axis: the spectrum is theta
  const auto mu = vertical_segment(std::ldexp(1.0, -10));
  ShellOptions opt;
  opt.z_max = 128.0;
  const auto s = sample_shells(mu, opt);
  for (double theta : {0.25, 0.5, 1.0}) CHECK(std::abs(fourier_spectrum_point(s, theta).estimate - theta) < 0.05);
  CHECK(std::abs(fourier_dimension_point(s).estimate) < 0.05);
}

TEST_CASE("witness curve is capped and contains the endpoints") {
  const auto x = generate(GeneratorSpec::segment(std::ldexp(1.0, -10)));
  const std::vector<double> thetas{0.5};
  const auto c = witness_fourier_curve(x, thetas);
  REQUIRE(c.points.size() == 3);
  CHECK(c.points.front().theta == 0.0);
  CHECK(c.points.back().theta == 1.0);
  CHECK(c.witness.size() == 3);
  for (const auto& p : c.points) CHECK(p.estimate <= 1.0);
  CHECK(c.points.back().estimate == doctest::Approx(1.0));
}
