#include "dimlab/spectrum.hpp"

#include <ostream>

#include <fmt/format.h>

namespace dimlab {

void write_csv(std::ostream& out, const SpectrumCurve& curve) {
  out << "theta,value,fit_r2,n_anchors\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{}\n", curve.thetas[i], curve.values[i], curve.fit_r2[i],
                       curve.n_anchors[i]);
}

void to_json(nlohmann::json& j, const SpectrumCurve& curve) {
  j = nlohmann::json{{"dim", curve.dim},
                     {"theta", curve.thetas},
                     {"value", curve.values},
                     {"fit_r2", curve.fit_r2},
                     {"n_anchors", curve.n_anchors},
                     {"raw_value", curve.raw_values},
                     {"skipped", curve.skipped}};
}

std::vector<double> isotonic_fit(std::span<const double> values) {
  // Blocks of (mean, size); merge while the order is violated.
  std::vector<std::pair<double, std::size_t>> blocks;
  for (double v : values) {
    blocks.emplace_back(v, 1);
    while (blocks.size() > 1 && blocks[blocks.size() - 2].first > blocks.back().first) {
      const auto [m2, n2] = blocks.back();
      blocks.pop_back();
      auto& [m1, n1] = blocks.back();
      m1 = (m1 * n1 + m2 * n2) / static_cast<double>(n1 + n2);
      n1 += n2;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& [m, n] : blocks) out.insert(out.end(), n, m);
  return out;
}

}  // namespace dimlab
