#pragma once

#include <cmath>

#include "kinn/common/check.hpp"
#include "kinn/quad/rules.hpp"

namespace kinn {

// Panel layout for the log-regularized rule: geometric grading toward the
// singular point kills the remaining ln(t) curvature without adaptivity.
struct SingularRule {
  int panels = 10;
  int n_gauss = 12;
  double ratio = 0.3;

  static SingularRule accurate() { return {10, 12, 0.3}; }
  static SingularRule light() { return {5, 8, 0.3}; }
};

// integral_{-a}^{a} ln|t| f(t) dt for regular f:
//   = integral_0^a ln(t) [f(t) + f(-t) - 2 f(0)] dt + 2 f(0) (a ln a - a).
// The bracket vanishes quadratically at 0, and graded-panel Gauss handles
// the remaining analytic-away-from-zero integrand.
template <class F>
auto weak_singular(double a, F&& f, const SingularRule& rule = SingularRule::accurate()) {
  require(a > 0.0, "weak_singular: half-length must be positive");
  auto f0 = f(0.0);
  auto acc = f0 * (2.0 * (a * std::log(a) - a));
  const GaussRule& g = gauss_legendre(rule.n_gauss);
  double hi = a;
  for (int p = 0; p < rule.panels; ++p) {
    const double lo = hi * rule.ratio;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int k = 0; k < rule.n_gauss; ++k) {
      const double t = mid + half * g.nodes[k];
      acc += (f(t) + f(-t) - f0 * 2.0) * (std::log(t) * half * g.weights[k]);
    }
    hi = lo;
  }
  // dropped tail [0, a ratio^panels]: the regularized integrand is O(t^2 ln t)
  return acc;
}

// Cauchy principal value integral_{-a}^{a} f(t)/t dt for regular f:
//   = integral_0^a [f(t) - f(-t)] / t dt, which is regular.
template <class F>
auto cauchy_principal(double a, F&& f, int n_gauss = 16) {
  const GaussRule& g = gauss_legendre(n_gauss);
  const double mid = 0.5 * a, half = 0.5 * a;
  const double t0 = mid + half * g.nodes[0];
  auto acc = (f(t0) - f(-t0)) * (half * g.weights[0] / t0);
  for (int k = 1; k < n_gauss; ++k) {
    const double t = mid + half * g.nodes[k];
    acc += (f(t) - f(-t)) * (half * g.weights[k] / t);
  }
  return acc;
}

// Segment-based overloads; f takes the parametric coordinate t in [-a, a].
template <class F>
auto weak_singular(const BoundarySegment& seg, F&& f,
                   const SingularRule& rule = SingularRule::accurate()) {
  return weak_singular(seg.half_length(), std::forward<F>(f), rule);
}

template <class F>
auto cauchy_principal(const BoundarySegment& seg, F&& f, int n_gauss = 16) {
  return cauchy_principal(seg.half_length(), std::forward<F>(f), n_gauss);
}

}  // namespace kinn
