#pragma once

#include <Eigen/Dense>
#include <functional>

#include "kinn/common/check.hpp"
#include "kinn/spline/bspline.hpp"

namespace kinn {

// Monomial coefficients (1, x, x^2) of a quadratic q on one span, recovered
// exactly from three samples.
namespace detail {
inline Eigen::Vector3d quad_monomials(const std::function<double(double)>& f, double a,
                                      double b) {
  const double xs[3] = {a + 0.25 * (b - a), a + 0.5 * (b - a), a + 0.75 * (b - a)};
  Eigen::Matrix3d V;
  Eigen::Vector3d y;
  for (int i = 0; i < 3; ++i) {
    V(i, 0) = 1.0;
    V(i, 1) = xs[i];
    V(i, 2) = xs[i] * xs[i];
    y[i] = f(xs[i]);
  }
  return V.fullPivLu().solve(y);
}
}  // namespace detail

// Map from quadratic FEM nodal values (u1,u2,u3) at x = -1,0,1 to the four
// spline coefficients of the order-2, size-2 grid on [-1,1] that reproduce
// the same quadratic on both spans. Built by matching monomial coefficients
// of the active basis against the shape functions on each span and solving
// the two 3x3 systems.
inline Eigen::Matrix<double, 4, 3> fem_map_quadratic() {
  SplineGrid g{-1.0, 1.0, 2, 2};

  // FEM shape functions on the single quadratic element over [-1,1]
  const std::function<double(double)> shape[3] = {
      [](double x) { return 0.5 * x * (x - 1.0); },
      [](double x) { return (x + 1.0) * (1.0 - x); },
      [](double x) { return 0.5 * x * (x + 1.0); },
  };

  Eigen::Matrix<double, 4, 3> map = Eigen::Matrix<double, 4, 3>::Zero();

  // span index 0: [-1,0) with basis 0,1,2; span index 1: [0,1) with basis 1,2,3
  for (int span = 0; span < 2; ++span) {
    const double a = span == 0 ? -1.0 : 0.0;
    const double b = span == 0 ? 0.0 : 1.0;
    Eigen::Matrix3d B;  // columns: monomials of the three active basis functions
    for (int j = 0; j < 3; ++j) {
      const int m = span + j;
      B.col(j) = detail::quad_monomials([&](double x) { return basis_eval(g, m, x); }, a, b);
    }
    Eigen::Matrix3d N;
    for (int j = 0; j < 3; ++j)
      N.col(j) = detail::quad_monomials(shape[j], a, b);

    Eigen::FullPivLU<Eigen::Matrix3d> lu(B);
    require(lu.isInvertible(), "fem_map_quadratic: singular basis system");
    const Eigen::Matrix3d sol = lu.solve(N);  // c_active = sol * u
    for (int j = 0; j < 3; ++j) map.row(span + j) = sol.row(j);
  }
  // rows 1 and 2 are determined consistently by both spans; the second solve
  // rewrites them with identical values.
  return map;
}

}  // namespace kinn
