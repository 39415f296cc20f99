#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "kinn/common/check.hpp"
#include "kinn/quad/pointset.hpp"

namespace kinn {

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on
// the Legendre recurrence (deterministic, any order).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline const GaussRule& gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n >= 1");
  static std::vector<GaussRule> cache;  // single-threaded lazy table
  if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1);
  GaussRule& rule = cache[n];
  if (!rule.nodes.empty()) return rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Monte Carlo estimate mean(f) * measure over a domain point set. 1-d sets
// are padded with y = 0.
template <class F>
auto mc_integrate(const PointSet& ps, F&& f) {
  require(ps.tag == RegionTag::domain, "mc_integrate: domain point set required");
  require(ps.size() > 0, "mc_integrate: empty point set");
  auto pt = [&](Eigen::Index i) {
    return Eigen::Vector2d(ps.points(i, 0), ps.dim() > 1 ? ps.points(i, 1) : 0.0);
  };
  auto acc = f(pt(0));
  for (Eigen::Index i = 1; i < ps.size(); ++i) acc += f(pt(i));
  return acc * (ps.measure() / static_cast<double>(ps.size()));
}

// Composite trapezoid / Simpson on uniform 1-d samples.
inline double trapezoid_1d(const Eigen::VectorXd& v, double h) {
  require(v.size() >= 2, "trapezoid_1d: need two samples");
  return h * (v.sum() - 0.5 * (v[0] + v[v.size() - 1]));
}

inline double simpson_1d(const Eigen::VectorXd& v, double h) {
  require(v.size() >= 3 && v.size() % 2 == 1, "simpson_1d: odd node count required");
  double acc = v[0] + v[v.size() - 1];
  for (Eigen::Index i = 1; i + 1 < v.size(); ++i) acc += v[i] * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Tensor-product composite rules on uniform grid values (nx x ny).
inline double trapezoid_2d(const Eigen::MatrixXd& v, double hx, double hy) {
  require(v.rows() >= 2 && v.cols() >= 2, "trapezoid_2d: need a 2x2 grid");
  Eigen::VectorXd col(v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) col[j] = trapezoid_1d(v.col(j), hx);
  return trapezoid_1d(col, hy);
}

inline double simpson_2d(const Eigen::MatrixXd& v, double hx, double hy) {
  require(v.rows() % 2 == 1 && v.cols() % 2 == 1, "simpson_2d: odd node counts required");
  Eigen::VectorXd col(v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) col[j] = simpson_1d(v.col(j), hx);
  return simpson_1d(col, hy);
}

// Centroid rule: sum f(centroid_i) * S_i (degree-1 exact).
template <class F>
auto triangle_centroid(const TriangleMesh& mesh, F&& f) {
  require(mesh.size() > 0, "triangle_centroid: empty mesh");
  auto acc = f(Eigen::Vector2d(mesh.centroids.row(0).transpose())) * mesh.areas[0];
  for (Eigen::Index t = 1; t < mesh.size(); ++t)
    acc += f(Eigen::Vector2d(mesh.centroids.row(t).transpose())) * mesh.areas[t];
  return acc;
}

// Gauss rule along a boundary segment (arclength): integrates
// f(x(t), n(t)) dt over t in [-a, a].
template <class F>
auto gauss_segment(const BoundarySegment& seg, F&& f, int n_gauss = 10) {
  require(n_gauss >= 1, "gauss_segment: n_gauss >= 1");
  const GaussRule& rule = gauss_legendre(n_gauss);
  const double a = seg.half_length();
  auto acc = f(seg.point_at(a * rule.nodes[0]), seg.normal_at(a * rule.nodes[0])) *
             (a * rule.weights[0]);
  for (int k = 1; k < n_gauss; ++k) {
    const double t = a * rule.nodes[k];
    acc += f(seg.point_at(t), seg.normal_at(t)) * (a * rule.weights[k]);
  }
  return acc;
}

}  // namespace kinn
