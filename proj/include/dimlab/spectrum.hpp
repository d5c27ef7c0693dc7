#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

namespace dimlab {

/// theta -> estimate, with per-theta fit diagnostics. Thetas that had no
/// usable scale pairs are listed in `skipped` instead.
struct SpectrumCurve {
  int dim = 1;
  std::vector<double> thetas;
  std::vector<double> values;
  std::vector<double> fit_r2;
  std::vector<std::size_t> n_anchors;
  std::vector<double> raw_values;  // before clipping or monotone projection
  std::vector<double> skipped;

  std::size_t size() const noexcept { return thetas.size(); }
};

void write_csv(std::ostream& out, const SpectrumCurve& curve);
void to_json(nlohmann::json& j, const SpectrumCurve& curve);

/// Least-squares non-decreasing fit (pool adjacent violators), equal weights.
std::vector<double> isotonic_fit(std::span<const double> values);

}  // namespace dimlab
