#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "kinn/ad/jet.hpp"
#include "kinn/common/check.hpp"

namespace kinn {

// Uniform B-spline layout on [lo, hi] with `size` interior intervals and
// degree `order`, extended by `order` equally spaced knots on each side
// (not clamped: the basis keeps its translation symmetry).
// Knot count = size + 2*order + 1, basis count = size + order.
struct SplineGrid {
  double lo = -1.0;
  double hi = 1.0;
  int size = 10;  // G
  int order = 3;  // r (polynomial degree)

  double spacing() const { return (hi - lo) / size; }
  int n_basis() const { return size + order; }
  int n_knots() const { return size + 2 * order + 1; }
  double knot(int i) const { return lo + (i - order) * spacing(); }

  // Knot span index s with knot(s) <= x < knot(s+1). In range, clamps so that
  // x == hi lands in the last interior span (spans half-open, closed at the
  // top end); out of range it may address extension spans.
  int span_of(double x) const {
    const int raw = static_cast<int>(std::floor((x - lo) / spacing())) + order;
    return std::clamp(raw, 0, n_knots() - 2);
  }
  int interior_span_of(double x) const {
    const int raw = static_cast<int>(std::floor((x - lo) / spacing())) + order;
    return std::clamp(raw, order, size + order - 1);
  }

  bool in_range(double x) const { return x >= lo && x <= hi; }

  void validate() const {
    require(hi > lo, "SplineGrid: empty range");
    require(size >= 1, "SplineGrid: size must be positive");
    require(order >= 1, "SplineGrid: order must be >= 1");
  }
};

// Values of the order+1 basis functions B_{span-order} .. B_{span} on the
// given knot span, by the triangular recurrence. Valid when x lies in that
// span. Works for any scalar with +,-,* (jets included); knot differences
// are plain doubles.
template <class T>
void active_basis(const SplineGrid& g, int span, const T& x, std::span<T> out) {
  const int r = g.order;
  out[0] = constant_like(x, 1.0);
  std::array<T, 8> left, right;  // left[k-1] = x - t_{s+1-k}, right[k-1] = t_{s+k} - x
  for (int k = 1; k <= r; ++k) {
    left[k - 1] = x - g.knot(span + 1 - k);
    right[k - 1] = constant_like(x, g.knot(span + k)) - x;
    T saved = constant_like(x, 0.0);
    for (int j = 0; j < k; ++j) {
      const double denom = g.knot(span + j + 1) - g.knot(span + j + 1 - k);
      T tmp = out[j] * (1.0 / denom);
      out[j] = saved + right[j] * tmp;
      saved = left[k - 1 - j] * tmp;
    }
    out[k] = saved;
  }
}

namespace detail {
// Zero-degree indicator with the top-end closure: x == hi belongs to the last
// interior span, so all limits at hi are taken from below.
inline double indicator(const SplineGrid& g, int m, double x) {
  if (x == g.hi) return m == g.size + g.order - 1 ? 1.0 : 0.0;
  return (x >= g.knot(m) && x < g.knot(m + 1)) ? 1.0 : 0.0;
}

// Single basis function of explicit degree `deg` over the grid's knots.
inline double basis_deg(const SplineGrid& g, int deg, int m, double x) {
  if (deg == 0) return indicator(g, m, x);
  const double h = g.spacing();
  const double a = (x - g.knot(m)) / (deg * h);
  const double b = (g.knot(m + deg + 1) - x) / (deg * h);
  return a * basis_deg(g, deg - 1, m, x) + b * basis_deg(g, deg - 1, m + 1, x);
}

inline double basis_deriv_deg(const SplineGrid& g, int deg, int m, double x, int k) {
  if (k == 0) return basis_deg(g, deg, m, x);
  if (k > deg) return 0.0;
  const double h = g.spacing();
  return (basis_deriv_deg(g, deg - 1, m, x, k - 1) -
          basis_deriv_deg(g, deg - 1, m + 1, x, k - 1)) /
         h;
}
}  // namespace detail

// B_m(x) for the grid's own degree; 0 outside the basis support.
inline double basis_eval(const SplineGrid& g, int m, double x) {
  require(m >= 0 && m < g.n_basis(), "basis_eval: index out of range");
  return detail::basis_deg(g, g.order, m, x);
}

// k-th derivative of B_m at x; identically zero for k > order.
inline double basis_derivative(const SplineGrid& g, int m, double x, int k) {
  require(m >= 0 && m < g.n_basis(), "basis_derivative: index out of range");
  require(k >= 0, "basis_derivative: negative derivative order");
  if (k > g.order) return 0.0;
  return detail::basis_deriv_deg(g, g.order, m, x, k);
}

// Spline value sum_m coeff[m] B_m(x) for a generic scalar T; coefficient
// scalar C need only support T * C. Inputs outside the grid range are
// evaluated as-is: only the basis functions that exist contribute, which may
// leave the value at zero far outside.
template <class T, class C>
T spline_eval(const SplineGrid& g, std::span<const C> coeff, const T& x) {
  const int r = g.order;
  const double xv = value_of(x);
  const int span = g.in_range(xv) ? g.interior_span_of(xv) : g.span_of(xv);
  std::array<T, 8> basis{};
  active_basis(g, span, x, std::span<T>(basis.data(), r + 1));
  T acc = constant_like(x, 0.0);
  for (int j = 0; j <= r; ++j) {
    const int m = span - r + j;
    if (m < 0 || m >= g.n_basis()) continue;
    acc += basis[j] * coeff[m];
  }
  return acc;
}

}  // namespace kinn
