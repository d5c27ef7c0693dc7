#pragma once

// Slow reference computations shared by the unit tests and the acceptance
// binary. None of them calls the solver or DP under test.

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "dimlab/capacity.hpp"
#include "dimlab/geometry.hpp"

namespace brute {

inline Eigen::MatrixXd kernel_matrix(const dimlab::PointCloud& c, const dimlab::KernelSpec& spec) {
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double a = 0.0;
      for (int q = 0; q < c.dim(); ++q) {
        const double t = c.point(i)[q] - c.point(j)[q];
        a += t * t;
      }
      K(i, j) = dimlab::kernel_eval(spec, std::sqrt(a));
    }
  return K;
}

// Minimum of w'Kw on the simplex by trying every support: solve K_S v = 1,
// keep positive solutions whose potential is >= the energy off the support.
inline double min_energy(const Eigen::MatrixXd& K) {
  const int n = static_cast<int>(K.rows());
  double best = INFINITY;
  for (unsigned m = 1; m < (1u << n); ++m) {
    std::vector<int> S;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1) S.push_back(i);
    const int k = static_cast<int>(S.size());
    Eigen::MatrixXd A(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) A(a, b) = K(S[a], S[b]);
    const Eigen::VectorXd v = A.fullPivLu().solve(Eigen::VectorXd::Ones(k));
    if ((A * v - Eigen::VectorXd::Ones(k)).norm() > 1e-9 || v.minCoeff() <= 0.0) continue;
    const double g = 1.0 / v.sum();
    if (g >= best) continue;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < k; ++a) w(S[a]) = v(a) * g;
    if ((K * w).minCoeff() < g * (1.0 - 1e-10)) continue;
    best = g;
  }
  return best;
}

// Cubes of a cloud as an explicit tree built from cube indices alone.
struct Node {
  int level;
  std::vector<Node> kids;
};

inline Node build(const dimlab::PointCloud& c, const std::vector<std::size_t>& pts, int level, int depth) {
  Node n{level, {}};
  if (level == depth) return n;
  std::map<std::vector<std::int64_t>, std::vector<std::size_t>> groups;
  for (auto i : pts) {
    std::vector<std::int64_t> key;
    for (int k = 0; k < c.dim(); ++k) key.push_back(dimlab::cube_index(c.point(i)[k], level + 1));
    groups[key].push_back(i);
  }
  for (const auto& [key, sub] : groups) n.kids.push_back(build(c, sub, level + 1, depth));
  return n;
}

// Every admissible cover of the subtree, as the list of cube levels it uses.
inline std::vector<std::vector<int>> covers(const Node& n, int top, int bottom) {
  std::vector<std::vector<int>> out;
  if (n.level >= top) out.push_back({n.level});
  if (n.level == bottom) return out;
  std::vector<std::vector<int>> acc{{}};
  for (const auto& k : n.kids) {
    const auto sub = covers(k, top, bottom);
    std::vector<std::vector<int>> next;
    for (const auto& a : acc)
      for (const auto& b : sub) {
        auto merged = a;
        merged.insert(merged.end(), b.begin(), b.end());
        next.push_back(std::move(merged));
      }
    acc = std::move(next);
  }
  for (auto& a : acc) out.push_back(std::move(a));
  return out;
}

// Cheapest cover by cubes of levels top..bottom, cost sum of 2^(-level s).
inline double min_cover_cost(const dimlab::PointCloud& c, int top, int bottom, double s) {
  std::vector<std::size_t> all(c.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Node root = build(c, all, 0, bottom);
  double best = INFINITY;
  for (const auto& cover : covers(root, top, bottom)) {
    double cost = 0.0;
    for (int l : cover) cost += std::exp2(-l * s);
    best = std::min(best, cost);
  }
  return best;
}

}  // namespace brute
