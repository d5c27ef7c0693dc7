#include <doctest.h>

#include <cmath>

#include "dimlab/error.hpp"
#include "dimlab/oracles.hpp"
#include "exceptional_table.hpp"

using namespace dimlab;

namespace {

FourierCurve curve_of(std::vector<std::pair<double, double>> pts) {
  FourierCurve c;
  for (auto [t, v] : pts) {
    FourierPoint p;
    p.theta = t;
    p.estimate = v;
    c.points.push_back(p);
  }
  return c;
}

}  // namespace

TEST_CASE("example ids") {
  CHECK(Example::parse("f_p(0.5)").p == 0.5);
  CHECK(Example::parse("f_p_product(2)").id == Example::Id::f_p_product);
  CHECK(Example::parse("segment").dim() == 1);
  CHECK(Example::parse("seq_times_segment").name() == "seq_times_segment");
  try {
    Example::parse("koch");
    FAIL("expected unknown_example");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unknown_example);
    CHECK(std::string(e.what()).find("seq_times_segment") != std::string::npos);
  }
  CHECK_THROWS_AS(Example::parse("f_p(-1)"), Error);
  CHECK_THROWS_AS(Example::parse("f_p(x)"), Error);
}

TEST_CASE("closed forms of the sequence-times-segment set") {
  const auto ex = Example::parse("seq_times_segment");
  CHECK(reference_spectrum(ex, SpectrumKind::intermediate, 0.5) == doctest::Approx(4.0 / 3.0));
  CHECK(reference_spectrum(ex, SpectrumKind::intermediate, 1e-9) == doctest::Approx(1.0));
  CHECK(reference_spectrum(ex, SpectrumKind::assouad, 0.25) == doctest::Approx(5.0 / 3.0));
  CHECK(reference_spectrum(ex, SpectrumKind::assouad, 0.5) == doctest::Approx(2.0));
  CHECK(reference_spectrum(ex, SpectrumKind::assouad, 0.9) == 2.0);
  CHECK(reference_spectrum(ex, SpectrumKind::fourier_set, 0.3) == doctest::Approx(0.3));
  const auto dims = example_dims(ex);
  CHECK(dims.upper_box == 1.5);
  CHECK(dims.assouad == 2.0);
  CHECK_THROWS_AS(reference_spectrum(ex, SpectrumKind::assouad, 1.0), Error);
}

TEST_CASE("closed forms of the sequence sets") {
  const auto f = Example::parse("f_p(1)");
  CHECK(example_dims(f).upper_box == 0.5);
  CHECK(reference_spectrum(f, SpectrumKind::assouad, 0.25) == doctest::Approx(2.0 / 3.0));
  CHECK(reference_spectrum(f, SpectrumKind::assouad, 0.75) == 1.0);
  CHECK(reference_spectrum(f, SpectrumKind::intermediate, 1.0 - 1e-12) == doctest::Approx(0.5));
  const auto h = Example::parse("f_p(0.5)");
  CHECK(example_dims(h).upper_box == doctest::Approx(2.0 / 3.0));
  const auto prod = Example::parse("f_p_product(0.5)");
  CHECK(example_dims(prod).upper_box == doctest::Approx(4.0 / 3.0));
  CHECK(*example_dims(prod).generic_line_projection == doctest::Approx(8.0 / 9.0));
  CHECK_THROWS_AS(reference_spectrum(prod, SpectrumKind::intermediate, 0.5), Error);
  CHECK(parse_spectrum_kind(to_string(SpectrumKind::fourier_set)) == SpectrumKind::fourier_set);
}

TEST_CASE("exceptional-set table") {
  for (const auto& c : exceptional_table()) {
    CAPTURE(c.d);
    CAPTURE(c.u);
    CAPTURE(c.dim_h);
    CHECK(peres_schlag_bound(c.d, c.k, c.u, c.dim_h) == doctest::Approx(c.peres_schlag).epsilon(1e-15));
    if (c.ren_wang) CHECK(ren_wang_bound(c.d, c.k, c.u, c.dim_h) == doctest::Approx(*c.ren_wang).epsilon(1e-15));
    else CHECK_THROWS_AS(ren_wang_bound(c.d, c.k, c.u, c.dim_h), Error);
    const auto curve = table_curve(c);
    if (c.fourier) CHECK(fourier_exceptional_bound(c.d, c.k, c.u, curve) == doctest::Approx(*c.fourier).epsilon(1e-15));
    const auto all = exceptional_bounds(c.d, c.k, c.u, c.dim_h, c.fourier ? &curve : nullptr);
    CHECK(all.skipped.size() == (c.ren_wang ? 0u : 1u));
    double best = c.peres_schlag;
    if (c.ren_wang) best = std::min(best, *c.ren_wang);
    if (c.fourier) best = std::min(best, *c.fourier);
    CHECK(all.best == doctest::Approx(best).epsilon(1e-15));
  }
  CHECK_THROWS_AS(peres_schlag_bound(2, 1, 1.5, 1.0), Error);
  CHECK_THROWS_AS(peres_schlag_bound(2, 2, 0.5, 1.0), Error);
  CHECK_THROWS_AS(fourier_exceptional_bound(2, 1, 0.5, curve_of({{0.0, 0.0}})), Error);
}

TEST_CASE("continuity criterion") {
  const auto steep = continuity_criterion(curve_of({{0.0, 0.0}, {0.05, 0.1}, {1.0, 1.0}}), 2, 1);
  CHECK(steep.measured == doctest::Approx(2.0));
  CHECK(steep.bound == 1.0);
  CHECK(steep.pass);
  CHECK_FALSE(continuity_criterion(curve_of({{0.0, 0.0}, {0.1, 0.08}}), 2, 1).pass);
  CHECK_THROWS_AS(continuity_criterion(curve_of({{0.0, 0.0}, {0.5, 0.5}}), 2, 1), Error);
  CHECK_THROWS_AS(continuity_criterion(curve_of({{0.05, 0.1}}), 2, 1), Error);
}

TEST_CASE("spectrum profile bound balances the two losses") {
  const auto ex = Example::parse("seq_times_segment");
  std::vector<double> t, v;
  for (int i = 1; i < 100000; ++i) {
    t.push_back(i / 100000.0);
    v.push_back(reference_spectrum(ex, SpectrumKind::assouad, t.back()));
  }
  const auto b = spectrum_profile_bound(1.5, t, v, 2.0, 2.0, 1.0);
  CHECK(b.bound == doctest::Approx(1.5 - 1.0 / std::sqrt(2.0)).epsilon(1e-5));
  CHECK(b.theta == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(b.quasi_bound == doctest::Approx(0.5));
  // s above the Assouad dimension loses nothing
  CHECK(spectrum_profile_bound(1.5, t, v, 2.0, 2.0, 2.0).bound == doctest::Approx(1.5));
  CHECK_THROWS_AS(spectrum_profile_bound(1.5, {}, {}, 2.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(spectrum_profile_bound(1.5, {0.5}, {1.0, 2.0}, 2.0, 2.0, 1.0), Error);
}

TEST_CASE("profile bounds") {
  const auto [lo, hi] = profile_bounds(1.5, 2, 1);
  CHECK(lo == doctest::Approx(6.0 / 7.0));
  CHECK(hi == 1.0);
  const auto [lo2, hi2] = profile_bounds(1.5, 2, 2);
  CHECK(lo2 == 1.5);
  CHECK(hi2 == 1.5);
  CHECK_THROWS_AS(profile_bounds(1.0, 2, 3), Error);
}

TEST_CASE("chain ordering") {
  DimensionEstimates e;
  e.dim = 2;
  e.fourier = 0.0;
  e.hausdorff_proxy = 1.0;
  e.lower_box = 1.5;
  e.upper_box = 1.55;
  e.assouad = 2.05;
  auto r = chain_check(e);
  CHECK(r.size() == 6);
  CHECK(r.front().bound_id == "chain:zero<=fourier");
  CHECK(r.back().bound_id == "chain:assouad<=ambient");
  CHECK(all_pass(r));
  e.lower_box = 1.7;  // above the upper box by more than the slack
  r = chain_check(e);
  CHECK_FALSE(all_pass(r));
  int failed = 0;
  for (const auto& x : r)
    if (!x.pass) {
      ++failed;
      CHECK(x.bound_id == "chain:lower_box<=upper_box");
    }
  CHECK(failed == 1);
  // missing entries are skipped over
  DimensionEstimates thin;
  thin.dim = 1;
  thin.upper_box = 0.5;
  CHECK(chain_check(thin).size() == 2);
}

TEST_CASE("assouad spectrum bound check") {
  SpectrumCurve c;
  c.dim = 1;
  c.thetas = {0.1, 0.5, 0.9};
  c.values = {0.55, 1.0, 1.0};
  const auto r = assouad_spectrum_bound_check(c, 0.5, 1.0);
  REQUIRE(r.size() == 3);
  CHECK(r[0].bound == doctest::Approx(0.5 / 0.9));
  CHECK(r[1].bound == doctest::Approx(1.0));
  CHECK(all_pass(r));
  c.values[0] = 0.8;
  CHECK_FALSE(all_pass(assouad_spectrum_bound_check(c, 0.5, 1.0)));
}

TEST_CASE("fourier curve check") {
  CHECK(all_pass(fourier_curve_check(curve_of({{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}}), 2)));
  // faster than d theta
  CHECK_FALSE(all_pass(fourier_curve_check(curve_of({{0.0, 0.0}, {0.1, 0.6}, {1.0, 1.0}}), 2)));
  // convex kink
  CHECK_FALSE(all_pass(fourier_curve_check(curve_of({{0.0, 0.0}, {0.25, 0.0}, {0.5, 0.0}, {0.75, 0.5}, {1.0, 1.5}}), 2)));
}

TEST_CASE("bound reports serialise") {
  BoundReport r;
  r.bound_id = "x";
  r.bound = 1.0;
  r.measured = 0.5;
  nlohmann::json j = r;
  CHECK(j["bound_id"] == "x");
  CHECK(j["pass"] == true);
}
