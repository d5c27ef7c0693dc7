#include "dimlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

// "name(value)" -> value; throws if the text is not of that shape.
double parse_param(const std::string& text, const std::string& name) {
  const std::string head = name + "(";
  if (text.rfind(head, 0) != 0 || text.back() != ')')
    throw Error(ErrorKind::unknown_example, fmt::format("expected {}(p), got '{}'", name, text));
  const std::string body = text.substr(head.size(), text.size() - head.size() - 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(body, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != body.size() || !(v > 0.0))
    throw Error(ErrorKind::unknown_example, fmt::format("'{}': p must be a positive number", text));
  return v;
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw Error(ErrorKind::invalid_argument, fmt::format("theta {} outside (0, 1)", theta));
}

BoundReport upper(std::string id, double bound, double measured, double slack) {
  BoundReport r;
  r.bound_id = std::move(id);
  r.bound = bound;
  r.measured = measured;
  r.slack = slack;
  r.pass = measured <= bound + slack;
  r.inputs["relation"] = "measured <= bound";
  return r;
}

}  // namespace

Example Example::parse(const std::string& text) {
  if (text == "seq_times_segment") return {Id::seq_times_segment, 1.0};
  if (text == "segment") return {Id::segment, 1.0};
  if (text == "square") return {Id::square, 1.0};
  if (text.rfind("f_p_product(", 0) == 0) return {Id::f_p_product, parse_param(text, "f_p_product")};
  if (text.rfind("f_p(", 0) == 0) return {Id::f_p, parse_param(text, "f_p")};
  std::string list;
  for (const auto& v : valid_ids()) list += (list.empty() ? "" : ", ") + v;
  throw Error(ErrorKind::unknown_example, fmt::format("unknown example '{}'; valid ids: {}", text, list));
}

std::vector<std::string> Example::valid_ids() {
  return {"seq_times_segment", "f_p(p)", "f_p_product(p)", "segment", "square"};
}

std::string Example::name() const {
  switch (id) {
    case Id::seq_times_segment: return "seq_times_segment";
    case Id::f_p: return fmt::format("f_p({})", p);
    case Id::f_p_product: return fmt::format("f_p_product({})", p);
    case Id::segment: return "segment";
    case Id::square: return "square";
  }
  return "?";
}

int Example::dim() const { return id == Id::f_p || id == Id::segment ? 1 : 2; }

GeneratorSpec Example::generator(double delta) const {
  switch (id) {
    case Id::seq_times_segment:
      return GeneratorSpec::product({GeneratorSpec::sequence_set(1.0, 0.0), GeneratorSpec::segment(0.0)}, delta);
    case Id::f_p: return GeneratorSpec::sequence_set(p, delta);
    case Id::f_p_product:
      return GeneratorSpec::product({GeneratorSpec::sequence_set(p, 0.0), GeneratorSpec::sequence_set(p, 0.0)}, delta);
    case Id::segment: return GeneratorSpec::segment(delta);
    case Id::square: return GeneratorSpec::grid_square(delta);
  }
  return GeneratorSpec::segment(delta);
}

ExampleDims example_dims(const Example& ex) {
  ExampleDims d;
  switch (ex.id) {
    case Example::Id::seq_times_segment:
      d = {1.0, 1.5, 1.5, 2.0, 2.0, 0.0, 1.0};
      break;
    case Example::Id::f_p: {
      const double b = 1.0 / (1.0 + ex.p);
      d = {0.0, b, b, 1.0, 1.0, 0.0, std::nullopt};
      break;
    }
    case Example::Id::f_p_product: {
      const double b = 2.0 / (1.0 + ex.p);
      const double q = ex.p / (ex.p + 1.0);
      d = {0.0, b, b, 2.0, 2.0, 0.0, 1.0 - q * q};
      break;
    }
    case Example::Id::segment:
      d = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, std::nullopt};
      break;
    case Example::Id::square:
      d = {2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 1.0};
      break;
  }
  return d;
}

SpectrumKind parse_spectrum_kind(const std::string& text) {
  if (text == "assouad") return SpectrumKind::assouad;
  if (text == "intermediate") return SpectrumKind::intermediate;
  if (text == "fourier_set" || text == "fourier") return SpectrumKind::fourier_set;
  throw Error(ErrorKind::invalid_argument, fmt::format("unknown spectrum kind '{}'", text));
}

const char* to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::assouad: return "assouad";
    case SpectrumKind::intermediate: return "intermediate";
    case SpectrumKind::fourier_set: return "fourier_set";
  }
  return "?";
}

double reference_spectrum(const Example& ex, SpectrumKind kind, double theta) {
  check_theta(theta);
  const double p = ex.p;
  switch (ex.id) {
    case Example::Id::seq_times_segment:
      switch (kind) {
        case SpectrumKind::fourier_set: return theta;
        case SpectrumKind::intermediate: return (1.0 + 2.0 * theta) / (1.0 + theta);
        case SpectrumKind::assouad: return std::min((1.5 - theta) / (1.0 - theta), 2.0);
      }
      break;
    case Example::Id::segment: return 1.0;
    case Example::Id::square: return 2.0;
    case Example::Id::f_p:
      // Countable sets carry only atomic measures, which have no decay.
      switch (kind) {
        case SpectrumKind::fourier_set: return 0.0;
        case SpectrumKind::intermediate: return theta / (theta + p);
        case SpectrumKind::assouad: return std::min(1.0 / ((1.0 + p) * (1.0 - theta)), 1.0);
      }
      break;
    case Example::Id::f_p_product:
      switch (kind) {
        case SpectrumKind::fourier_set: return 0.0;
        case SpectrumKind::assouad: return std::min(2.0 / ((1.0 + p) * (1.0 - theta)), 2.0);
        case SpectrumKind::intermediate: break;
      }
      break;
  }
  throw Error(ErrorKind::unknown_example,
              fmt::format("no closed form for the {} spectrum of {}", to_string(kind), ex.name()));
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"bound_id", r.bound_id}, {"inputs", r.inputs}, {"bound", r.bound},
                     {"measured", r.measured}, {"slack", r.slack}, {"pass", r.pass}};
}

std::vector<BoundReport> chain_check(const DimensionEstimates& est, double slack) {
  // The Fourier link skips ahead when the Hausdorff proxy is missing, like
  // every other link.
  std::vector<std::pair<std::string, double>> chain{{"zero", 0.0}};
  if (est.fourier) chain.emplace_back("fourier", *est.fourier);
  if (est.hausdorff_proxy) chain.emplace_back("hausdorff_proxy", *est.hausdorff_proxy);
  if (est.lower_box) chain.emplace_back("lower_box", *est.lower_box);
  if (est.upper_box) chain.emplace_back("upper_box", *est.upper_box);
  if (est.assouad) chain.emplace_back("assouad", *est.assouad);
  chain.emplace_back("ambient", static_cast<double>(est.dim));

  std::vector<BoundReport> out;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto& [a, va] = chain[i];
    const auto& [b, vb] = chain[i + 1];
    BoundReport r = upper(fmt::format("chain:{}<={}", a, b), vb, va, slack);
    r.inputs[a] = va;
    r.inputs[b] = vb;
    out.push_back(std::move(r));
  }
  return out;
}

bool all_pass(std::span<const BoundReport> reports) {
  return std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.pass; });
}

namespace {

void check_dk(int d, int k, const char* bound) {
  if (d < 1 || k < 1 || k >= d)
    throw Error(ErrorKind::invalid_argument, fmt::format("{}: need 1 <= k < d, got d = {}, k = {}", bound, d, k));
}

void check_u(int k, double u, const char* bound) {
  if (!(u >= 0.0 && u <= k))
    throw Error(ErrorKind::invalid_argument, fmt::format("{}: u = {} outside [0, {}]", bound, u, k));
}

// Empty when the bound applies.
std::string ren_wang_domain(int d, int k, double u, double dim_h) {
  if (d != 2 || k != 1) return fmt::format("planar lines only, got d = {}, k = {}", d, k);
  if (u < dim_h / 2.0 || u > std::min(dim_h, 1.0))
    return fmt::format("u = {} outside [dimH/2, min(dimH, 1)] = [{}, {}]", u, dim_h / 2.0, std::min(dim_h, 1.0));
  return {};
}

}  // namespace

double peres_schlag_bound(int d, int k, double u, double dim_h) {
  check_dk(d, k, "peres-schlag");
  check_u(k, u, "peres-schlag");
  return std::max(0.0, k * (d - k) + u - dim_h);
}

double ren_wang_bound(int d, int k, double u, double dim_h) {
  const std::string why = ren_wang_domain(d, k, u, dim_h);
  if (!why.empty()) throw Error(ErrorKind::invalid_argument, "ren-wang: " + why);
  return std::max(0.0, 2.0 * u - dim_h);
}

double fourier_exceptional_bound(int d, int k, double u, const FourierCurve& curve) {
  check_dk(d, k, "fourier-spectrum");
  check_u(k, u, "fourier-spectrum");
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& p : curve.points)
    if (p.theta > 0.0) inf = std::min(inf, (u - p.estimate) / p.theta);
  if (!std::isfinite(inf))
    throw Error(ErrorKind::invalid_argument, "fourier-spectrum: curve has no point with theta > 0");
  return std::max(0.0, k * (d - k) + inf);
}

ExceptionalBounds exceptional_bounds(int d, int k, double u, double dim_h, const FourierCurve* curve) {
  ExceptionalBounds out;
  auto add = [&](const char* id, double value) {
    BoundReport r;
    r.bound_id = id;
    r.inputs = {{"d", d}, {"k", k}, {"u", u}, {"dim_h", dim_h}};
    r.bound = value;
    r.measured = value;
    out.reports.push_back(std::move(r));
  };
  add("peres-schlag", peres_schlag_bound(d, k, u, dim_h));
  if (const std::string why = ren_wang_domain(d, k, u, dim_h); why.empty())
    add("ren-wang", ren_wang_bound(d, k, u, dim_h));
  else
    out.skipped.push_back("ren-wang: " + why);
  if (curve) add("fourier-spectrum", fourier_exceptional_bound(d, k, u, *curve));
  const auto best = std::min_element(out.reports.begin(), out.reports.end(),
                                     [](const BoundReport& a, const BoundReport& b) { return a.bound < b.bound; });
  out.best = best->bound;
  out.best_id = best->bound_id;
  return out;
}

BoundReport continuity_criterion(const FourierCurve& curve, int d, int k) {
  check_dk(d, k, "continuity");
  const FourierPoint* zero = nullptr;
  const FourierPoint* first = nullptr;
  for (const auto& p : curve.points) {
    if (p.theta == 0.0) zero = &p;
    else if (p.theta > 0.0 && (!first || p.theta < first->theta)) first = &p;
  }
  if (!zero || !first || first->theta > 0.1)
    throw Error(ErrorKind::insufficient_scales, "continuity: need the theta = 0 point and a theta in (0, 0.1]");
  BoundReport r;
  r.bound_id = "continuity";
  r.bound = k * (d - k);
  r.measured = (first->estimate - zero->estimate) / first->theta;
  r.slack = 0.0;
  r.pass = r.measured >= r.bound;
  r.inputs = {{"d", d}, {"k", k}, {"theta", first->theta}, {"relation", "measured >= bound"}};
  return r;
}

SpectrumProfileBound spectrum_profile_bound(double box, const std::vector<double>& thetas,
                                            const std::vector<double>& spectrum, double assouad_dim,
                                            double quasi_assouad, double s) {
  if (thetas.empty() || thetas.size() != spectrum.size())
    throw Error(ErrorKind::invalid_argument, "spectrum-profile: need a non-empty spectrum with one value per theta");
  SpectrumProfileBound out;
  out.bound = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double t = thetas[i];
    const double loss = std::max({0.0, spectrum[i] - s, (assouad_dim - s) * (1.0 - t)});
    if (box - loss > out.bound) {
      out.bound = box - loss;
      out.theta = t;
    }
  }
  out.quasi_bound = box - std::max(0.0, quasi_assouad - s);
  return out;
}

SpectrumProfileBound spectrum_profile_bound(double box, const SpectrumCurve& assouad_curve, double assouad_dim,
                                            double quasi_assouad, double s) {
  return spectrum_profile_bound(box, assouad_curve.thetas, assouad_curve.values, assouad_dim, quasi_assouad, s);
}

std::pair<double, double> profile_bounds(double box, int d, int k) {
  if (d < 1 || k < 1 || k > d)
    throw Error(ErrorKind::invalid_argument, fmt::format("need 1 <= k <= d, got d = {}, k = {}", d, k));
  const double lo = box / (1.0 + (1.0 / k - 1.0 / d) * box);
  return {lo, std::min(box, static_cast<double>(k))};
}

std::vector<BoundReport> assouad_spectrum_bound_check(const SpectrumCurve& curve, double box, double quasi,
                                                      double slack) {
  std::vector<BoundReport> out;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double t = curve.thetas[i];
    BoundReport r = upper("assouad-spectrum-bound", std::min(box / (1.0 - t), quasi), curve.values[i], slack);
    r.inputs["theta"] = t;
    r.inputs["box"] = box;
    r.inputs["quasi_assouad"] = quasi;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundReport> fourier_curve_check(const FourierCurve& curve, int d, double slack) {
  std::vector<BoundReport> out;
  const FourierPoint* zero = nullptr;
  for (const auto& p : curve.points)
    if (p.theta == 0.0) zero = &p;
  if (zero)
    for (const auto& p : curve.points) {
      BoundReport r = upper("fourier-lipschitz", zero->estimate + d * p.theta, p.estimate, slack);
      r.inputs["theta"] = p.theta;
      r.inputs["d"] = d;
      out.push_back(std::move(r));
    }
  // Concavity on (0, 1]: the middle value is at least the chord through its
  // neighbours.
  std::vector<const FourierPoint*> pos;
  for (const auto& p : curve.points)
    if (p.theta > 0.0) pos.push_back(&p);
  for (std::size_t i = 1; i + 1 < pos.size(); ++i) {
    const auto *a = pos[i - 1], *m = pos[i], *b = pos[i + 1];
    const double w = (m->theta - a->theta) / (b->theta - a->theta);
    const double chord = (1.0 - w) * a->estimate + w * b->estimate;
    BoundReport r;
    r.bound_id = "fourier-concavity";
    r.bound = chord;
    r.measured = m->estimate;
    r.slack = slack;
    r.pass = m->estimate >= chord - slack;
    r.inputs = {{"theta", m->theta}, {"relation", "measured >= bound"}};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dimlab
