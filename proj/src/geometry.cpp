#include "dimlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "dimlab/error.hpp"
#include "grid_hash.hpp"

namespace dimlab {

namespace {

bool lex_less(const double* a, const double* b, int dim) {
  for (int k = 0; k < dim; ++k) {
    if (a[k] < b[k]) return true;
    if (b[k] < a[k]) return false;
  }
  return false;
}

bool lex_equal(const double* a, const double* b, int dim) {
  for (int k = 0; k < dim; ++k)
    if (a[k] != b[k]) return false;
  return true;
}

std::vector<double> uniform_grid(double delta) {
  // k * delta for k = 0..K with the last point pinned to 1.
  const auto steps = static_cast<std::size_t>(std::ceil(1.0 / delta - 1e-9));
  std::vector<double> xs(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) xs[k] = std::min(1.0, static_cast<double>(k) * delta);
  return xs;
}

void check_delta(double delta, const char* what) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::invalid_argument, fmt::format("{}: delta must be > 0, got {}", what, delta));
}

std::string format_param(double v) { return fmt::format("{:g}", v); }

PointCloud generate_impl(const GeneratorSpec& spec, double inherited_delta) {
  const double delta = spec.delta > 0.0 ? spec.delta : inherited_delta;
  using Kind = GeneratorSpec::Kind;
  switch (spec.kind) {
    case Kind::segment: {
      check_delta(delta, "segment");
      return PointCloud(1, delta, uniform_grid(delta), "[0,1]");
    }
    case Kind::grid_square: {
      check_delta(delta, "grid_square");
      const auto xs = uniform_grid(delta);
      std::vector<double> coords;
      coords.reserve(xs.size() * xs.size() * 2);
      for (double x : xs)
        for (double y : xs) {
          coords.push_back(x);
          coords.push_back(y);
        }
      return PointCloud(2, delta, std::move(coords), "[0,1]^2");
    }
    case Kind::sequence_set: {
      check_delta(delta, "sequence_set");
      if (!(spec.p > 0.0))
        throw Error(ErrorKind::invalid_argument, "sequence_set: p must be > 0");
      // Isolated terms while consecutive gaps stay >= delta, then a delta-grid
      // on the accumulation tail [0, n0^-p].
      std::vector<double> xs;
      double n = 1.0;
      double x = 1.0;
      while (true) {
        xs.push_back(x);
        const double next = std::pow(n + 1.0, -spec.p);
        if (x - next < delta) break;
        n += 1.0;
        x = next;
      }
      const double tail_end = x;
      for (double k = 0.0; k * delta <= tail_end; k += 1.0) xs.push_back(k * delta);
      std::string label = spec.p == 1.0 ? "{1/n}" : "{n^-" + format_param(spec.p) + "}";
      return PointCloud(1, delta, std::move(xs), std::move(label));
    }
    case Kind::cantor: {
      check_delta(delta, "cantor");
      const double c = spec.contraction;
      const int m = spec.copies;
      if (m < 2 || !(c > 0.0) || !(c < 1.0) || m * c > 1.0 + 1e-12)
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("cantor: need copies >= 2, 0 < c < 1, copies*c <= 1 (c={}, m={})", c, m));
      const double gap_step = (1.0 - c) / (m - 1);
      std::vector<double> starts{0.0};
      double length = 1.0;
      while (length > delta) {
        std::vector<double> next;
        next.reserve(starts.size() * static_cast<std::size_t>(m));
        for (double a : starts)
          for (int i = 0; i < m; ++i) next.push_back(a + i * gap_step * length);
        starts = std::move(next);
        length *= c;
      }
      return PointCloud(1, delta, std::move(starts),
                        "C(" + format_param(c) + "," + std::to_string(m) + ")");
    }
    case Kind::product: {
      if (spec.factors.size() < 2)
        throw Error(ErrorKind::invalid_argument, "product: needs at least two factors");
      std::vector<PointCloud> parts;
      for (const auto& f : spec.factors) parts.push_back(generate_impl(f, delta));
      int dim = 0;
      double res = 0.0;
      std::string label;
      std::size_t total = 1;
      for (const auto& part : parts) {
        dim += part.dim();
        res = std::max(res, part.resolution());
        if (!label.empty()) label += "x";
        label += part.label();
        total *= part.size();
      }
      std::vector<double> coords;
      coords.reserve(total * static_cast<std::size_t>(dim));
      std::vector<std::size_t> idx(parts.size(), 0);
      for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t f = 0; f < parts.size(); ++f) {
          const auto pt = parts[f].point(idx[f]);
          coords.insert(coords.end(), pt.begin(), pt.end());
        }
        for (std::size_t f = parts.size(); f-- > 0;) {
          if (++idx[f] < parts[f].size()) break;
          idx[f] = 0;
        }
      }
      return PointCloud(dim, res, std::move(coords), std::move(label));
    }
    case Kind::explicit_points: {
      check_delta(delta, "explicit_points");
      return PointCloud(spec.dim, delta, spec.points, "explicit");
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown generator kind");
}

}  // namespace

PointCloud::PointCloud(int dim, double resolution, std::vector<double> coords, std::string label)
    : dim_(dim), resolution_(resolution), label_(std::move(label)) {
  if (dim < 1) throw Error(ErrorKind::invalid_argument, "point cloud: dim must be >= 1");
  if (!(resolution > 0.0)) throw Error(ErrorKind::invalid_argument, "point cloud: resolution must be > 0");
  if (coords.empty() || coords.size() % static_cast<std::size_t>(dim) != 0)
    throw Error(ErrorKind::invalid_argument, "point cloud: coordinate count must be a positive multiple of dim");
  for (double v : coords)
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "point cloud: non-finite coordinate");

  const std::size_t n = coords.size() / static_cast<std::size_t>(dim);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const double* base = coords.data();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(base + a * dim, base + b * dim, dim);
  });
  coords_.reserve(coords.size());
  const double* prev = nullptr;
  for (std::size_t i : order) {
    const double* p = base + i * dim;
    if (prev != nullptr && lex_equal(prev, p, dim)) continue;
    coords_.insert(coords_.end(), p, p + dim);
    prev = p;
  }
}

GeneratorSpec GeneratorSpec::sequence_set(double p, double delta) {
  GeneratorSpec s;
  s.kind = Kind::sequence_set;
  s.p = p;
  s.delta = delta;
  return s;
}

GeneratorSpec GeneratorSpec::segment(double delta) {
  GeneratorSpec s;
  s.kind = Kind::segment;
  s.delta = delta;
  return s;
}

GeneratorSpec GeneratorSpec::grid_square(double delta) {
  GeneratorSpec s;
  s.kind = Kind::grid_square;
  s.delta = delta;
  return s;
}

GeneratorSpec GeneratorSpec::cantor(double contraction, int copies, double delta) {
  GeneratorSpec s;
  s.kind = Kind::cantor;
  s.contraction = contraction;
  s.copies = copies;
  s.delta = delta;
  return s;
}

GeneratorSpec GeneratorSpec::product(std::vector<GeneratorSpec> factors, double delta) {
  GeneratorSpec s;
  s.kind = Kind::product;
  s.factors = std::move(factors);
  s.delta = delta;
  return s;
}

GeneratorSpec GeneratorSpec::explicit_points(int dim, std::vector<double> points, double delta) {
  GeneratorSpec s;
  s.kind = Kind::explicit_points;
  s.dim = dim;
  s.points = std::move(points);
  s.delta = delta;
  return s;
}

int GeneratorSpec::ambient_dim() const {
  switch (kind) {
    case Kind::grid_square: return 2;
    case Kind::product: {
      int d = 0;
      for (const auto& f : factors) d += f.ambient_dim();
      return d;
    }
    case Kind::explicit_points: return dim;
    default: return 1;
  }
}

const char* to_string(GeneratorSpec::Kind kind) {
  using Kind = GeneratorSpec::Kind;
  switch (kind) {
    case Kind::sequence_set: return "sequence_set";
    case Kind::segment: return "segment";
    case Kind::grid_square: return "grid_square";
    case Kind::cantor: return "cantor";
    case Kind::product: return "product";
    case Kind::explicit_points: return "explicit_points";
  }
  return "?";
}

void to_json(nlohmann::json& j, const GeneratorSpec& spec) {
  using Kind = GeneratorSpec::Kind;
  j = nlohmann::json{{"kind", to_string(spec.kind)}};
  if (spec.delta > 0.0) j["delta"] = spec.delta;
  switch (spec.kind) {
    case Kind::sequence_set: j["p"] = spec.p; break;
    case Kind::cantor:
      j["contraction"] = spec.contraction;
      j["copies"] = spec.copies;
      break;
    case Kind::product: j["factors"] = spec.factors; break;
    case Kind::explicit_points: {
      j["dim"] = spec.dim;
      auto pts = nlohmann::json::array();
      for (std::size_t i = 0; i + spec.dim <= spec.points.size(); i += spec.dim)
        pts.push_back(std::vector<double>(spec.points.begin() + i, spec.points.begin() + i + spec.dim));
      j["points"] = std::move(pts);
      break;
    }
    default: break;
  }
}

void from_json(const nlohmann::json& j, GeneratorSpec& spec) {
  using Kind = GeneratorSpec::Kind;
  if (!j.is_object() || !j.contains("kind"))
    throw Error(ErrorKind::invalid_config, "generator: object with a \"kind\" field expected");
  const auto kind = j.at("kind").get<std::string>();
  spec = GeneratorSpec{};
  spec.delta = j.value("delta", 0.0);
  if (kind == "sequence_set") {
    spec.kind = Kind::sequence_set;
    if (!j.contains("p")) throw Error(ErrorKind::invalid_config, "generator.p: required for sequence_set");
    spec.p = j.at("p").get<double>();
  } else if (kind == "segment") {
    spec.kind = Kind::segment;
  } else if (kind == "grid_square") {
    spec.kind = Kind::grid_square;
  } else if (kind == "cantor") {
    spec.kind = Kind::cantor;
    spec.contraction = j.value("contraction", 1.0 / 3.0);
    spec.copies = j.value("copies", 2);
  } else if (kind == "product") {
    spec.kind = Kind::product;
    if (!j.contains("factors")) throw Error(ErrorKind::invalid_config, "generator.factors: required for product");
    spec.factors = j.at("factors").get<std::vector<GeneratorSpec>>();
  } else if (kind == "explicit_points") {
    spec.kind = Kind::explicit_points;
    spec.dim = j.at("dim").get<int>();
    for (const auto& row : j.at("points")) {
      const auto pt = row.get<std::vector<double>>();
      if (static_cast<int>(pt.size()) != spec.dim)
        throw Error(ErrorKind::invalid_config, "generator.points: every point needs dim coordinates");
      spec.points.insert(spec.points.end(), pt.begin(), pt.end());
    }
  } else {
    throw Error(ErrorKind::invalid_config, "generator.kind: unknown kind '" + kind + "'");
  }
}

PointCloud generate(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorSpec::Kind::product) check_delta(spec.delta, to_string(spec.kind));
  return generate_impl(spec, spec.delta);
}

std::vector<std::size_t> greedy_net_indices(const PointCloud& cloud, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::invalid_argument, "separated subset: r must be > 0");
  const int d = cloud.dim();
  detail::GridHash grid(d, r);
  std::vector<std::size_t> kept;
  std::vector<std::int64_t> cell(d), probe(d);
  const double r2 = r * r;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    grid.cell_of(p, cell);
    bool covered = false;
    grid.for_each_neighbor(cell, probe, [&](std::size_t j) {
      if (covered) return;
      const auto q = cloud.point(j);
      double dist2 = 0.0;
      for (int k = 0; k < d; ++k) dist2 += (p[k] - q[k]) * (p[k] - q[k]);
      if (dist2 <= r2) covered = true;
    });
    if (!covered) {
      kept.push_back(i);
      grid.insert(cell, i);
    }
  }
  return kept;
}

PointCloud maximal_separated_subset(const PointCloud& cloud, double r) {
  if (r < cloud.resolution())
    throw Error(ErrorKind::resolution_exceeded,
                fmt::format("separated subset at r={} below resolution {}", r, cloud.resolution()));
  const auto kept = greedy_net_indices(cloud, r);
  std::vector<double> coords;
  coords.reserve(kept.size() * cloud.dim());
  for (std::size_t i : kept) {
    const auto p = cloud.point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointCloud(cloud.dim(), cloud.resolution() + r, std::move(coords), cloud.label());
}

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

std::vector<double> DyadicCube::corner() const {
  std::vector<double> c(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) c[k] = std::ldexp(static_cast<double>(index[k]), -level);
  return c;
}

std::vector<std::pair<DyadicCube, std::vector<std::size_t>>> dyadic_decompose(const PointCloud& cloud,
                                                                              int level) {
  if (level < 0) throw Error(ErrorKind::invalid_argument, "dyadic_decompose: level must be >= 0");
  const int d = cloud.dim();
  std::vector<std::vector<std::int64_t>> keys(cloud.size(), std::vector<std::int64_t>(d));
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (int k = 0; k < d; ++k) keys[i][k] = cube_index(p[k], level);
  }
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<std::pair<DyadicCube, std::vector<std::size_t>>> out;
  for (std::size_t i : order) {
    if (out.empty() || out.back().first.index != keys[i]) out.push_back({DyadicCube{level, keys[i]}, {}});
    out.back().second.push_back(i);
  }
  return out;
}

int level_for_scale(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::invalid_argument, "scale must be > 0");
  int j = static_cast<int>(std::ceil(-std::log2(r)));
  while (std::ldexp(1.0, -j) > r) ++j;
  while (std::ldexp(1.0, -(j - 1)) <= r) --j;
  return j;
}

int finest_level(double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_argument, "resolution must be > 0");
  int j = static_cast<int>(std::floor(-std::log2(delta)));
  while (std::ldexp(1.0, -j) < delta) --j;
  while (std::ldexp(1.0, -(j + 1)) >= delta) ++j;
  return j;
}

void write_csv(std::ostream& out, const PointCloud& cloud) {
  for (int k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << 'x' << k;
  out << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (int k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << fmt::format("{:.17g}", p[k]);
    out << '\n';
  }
}

}  // namespace dimlab
