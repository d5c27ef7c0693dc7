#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimlab/fourier.hpp"
#include "dimlab/geometry.hpp"
#include "dimlab/spectrum.hpp"

namespace dimlab {

/// Canonical examples with closed-form dimensions.
struct Example {
  enum class Id { seq_times_segment, f_p, f_p_product, segment, square };
  Id id = Id::seq_times_segment;
  double p = 1.0;  // f_p, f_p_product

  /// "seq_times_segment", "f_p(0.5)", "f_p_product(0.5)", "segment", "square".
  static Example parse(const std::string& text);
  static std::vector<std::string> valid_ids();
  std::string name() const;
  int dim() const;
  GeneratorSpec generator(double delta) const;
};

/// Known dimensions of an example. Fourier entries are set dimensions.
struct ExampleDims {
  double hausdorff = 0.0;
  double lower_box = 0.0;
  double upper_box = 0.0;
  double quasi_assouad = 0.0;
  double assouad = 0.0;
  double fourier = 0.0;
  // Box dimension of projections onto almost every line (planar examples).
  std::optional<double> generic_line_projection;
};

ExampleDims example_dims(const Example& ex);

enum class SpectrumKind { assouad, intermediate, fourier_set };

SpectrumKind parse_spectrum_kind(const std::string& text);
const char* to_string(SpectrumKind kind);

/// Closed forms, theta in (0, 1). Throws unknown_example for combinations
/// without a formula.
double reference_spectrum(const Example& ex, SpectrumKind kind, double theta);

struct ReferenceCurve {
  Example example;
  SpectrumKind kind = SpectrumKind::intermediate;
  double operator()(double theta) const { return reference_spectrum(example, kind, theta); }
};

struct BoundReport {
  std::string bound_id;
  nlohmann::json inputs = nlohmann::json::object();
  double bound = 0.0;
  double measured = 0.0;
  double slack = 0.0;
  bool pass = true;
};

void to_json(nlohmann::json& j, const BoundReport& r);

/// Slacks default to the estimator tolerances.
struct Slacks {
  double box = 0.05;
  double chain = 0.1;
  double assouad = 0.15;
  double fourier = 0.15;
};

/// Measured dimensions of one cloud; unset entries are left out of the chain.
struct DimensionEstimates {
  int dim = 1;
  std::optional<double> fourier;
  std::optional<double> hausdorff_proxy;
  std::optional<double> lower_box;
  std::optional<double> upper_box;
  std::optional<double> assouad;
};

/// 0 <= F <= H <= lower box <= upper box <= A <= d, each link passing with
/// `slack`. Every adjacent pair of present entries is one report.
std::vector<BoundReport> chain_check(const DimensionEstimates& est, double slack = 0.1);

/// All reports pass.
bool all_pass(std::span<const BoundReport> reports);

// Exceptional-set bounds: upper bounds on the dimension of
// {V in G(d,k) : dim P_V X < u}. Each clamps at 0 from below.

/// k(d-k) + u - dimH. Needs 0 <= u <= k.
double peres_schlag_bound(int d, int k, double u, double dim_h);
/// 2u - dimH, planar lines only, dimH/2 <= u <= min{dimH, 1}.
double ren_wang_bound(int d, int k, double u, double dim_h);
/// k(d-k) + min over the curve's theta > 0 of (u - value) / theta.
double fourier_exceptional_bound(int d, int k, double u, const FourierCurve& curve);

struct ExceptionalBounds {
  std::vector<BoundReport> reports;  // applicable bounds; measured is unused
  std::vector<std::string> skipped;  // bound ids outside their domain, with the reason
  double best = 0.0;                 // minimum applicable bound
  std::string best_id;
};

ExceptionalBounds exceptional_bounds(int d, int k, double u, double dim_h, const FourierCurve* curve = nullptr);

/// D from the smallest positive theta: (value(theta) - value(0)) / theta.
/// Passes iff D >= k(d-k). Needs a point at theta = 0 and one in (0, 0.1].
BoundReport continuity_criterion(const FourierCurve& curve, int d, int k);

struct SpectrumProfileBound {
  double bound = 0.0;        // best over the grid
  double theta = 0.0;        // witnessing theta
  double quasi_bound = 0.0;  // box - max{0, qA - s}
};

/// Largest  box - max{0, spectrum(theta) - s, (A - s)(1 - theta)}  over the
/// spectrum's thetas, plus the quasi-Assouad bound.
SpectrumProfileBound spectrum_profile_bound(double box, const SpectrumCurve& assouad_curve, double assouad_dim,
                                            double quasi_assouad, double s);

/// Same with a closed-form spectrum on an explicit grid.
SpectrumProfileBound spectrum_profile_bound(double box, const std::vector<double>& thetas,
                                            const std::vector<double>& spectrum, double assouad_dim,
                                            double quasi_assouad, double s);

/// box / (1 + (1/k - 1/d) box) <= profile <= min{box, k}.
std::pair<double, double> profile_bounds(double box, int d, int k);

/// Assouad spectrum against min{box / (1 - theta), quasi} at every theta.
std::vector<BoundReport> assouad_spectrum_bound_check(const SpectrumCurve& curve, double box, double quasi,
                                                      double slack = 0.15);

/// Fourier curve against value(0) + d theta at every theta, and midpoint
/// concavity on consecutive triples.
std::vector<BoundReport> fourier_curve_check(const FourierCurve& curve, int d, double slack = 0.15);

}  // namespace dimlab
