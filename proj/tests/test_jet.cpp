#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "kinn/ad/fd_check.hpp"
#include "kinn/ad/jet.hpp"
#include "kinn/common/rng.hpp"

using kinn::CounterRng;
using kinn::Jet;
using kinn::jet_lift;

TEST_CASE("polynomial calculus in one variable") {
  {
    auto x = jet_lift(std::vector<double>{3.0}, 1, 2);
    auto y = x[0] * x[0];
    CHECK(y.deriv(0) == doctest::Approx(9.0));
    CHECK(y.deriv(1) == doctest::Approx(6.0));
    CHECK(y.deriv(2) == doctest::Approx(2.0));
  }
  {
    auto x = jet_lift(std::vector<double>{2.0}, 1, 4);
    auto y = x[0] * x[0] * x[0] * x[0];
    CHECK(y.deriv(4) == doctest::Approx(24.0));
    CHECK(y.deriv(0) == doctest::Approx(16.0));
    CHECK(y.deriv(1) == doctest::Approx(32.0));
  }
}

TEST_CASE("mixed partial of x*y") {
  auto xy = jet_lift(std::vector<double>{1.0, 1.0}, 2, 2);
  auto u = xy[0] * xy[1];
  CHECK(u.deriv(1, 1) == doctest::Approx(1.0));
  CHECK(u.deriv(2, 0) == doctest::Approx(0.0));
  CHECK(u.deriv(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("lift rejects unsupported orders and mismatched dims") {
  CHECK_THROWS_AS((void)jet_lift(std::vector<double>{1.0}, 1, 0), kinn::ContractViolation);
  CHECK_THROWS_AS((void)jet_lift(std::vector<double>{1.0}, 1, 5), kinn::ContractViolation);
  CHECK_THROWS_AS((void)jet_lift(std::vector<double>{1.0, 2.0}, 1, 2), kinn::ContractViolation);
}

TEST_CASE("arithmetic on unequal orders or dims is rejected") {
  Jet<double> a(1.0, 1, 2), b(1.0, 1, 3), c(1.0, 2, 2);
  CHECK_THROWS_AS((void)(a + b), kinn::ContractViolation);
  CHECK_THROWS_AS((void)(a * c), kinn::ContractViolation);
}

TEST_CASE("linearity of jets") {
  CounterRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + static_cast<int>(rng.next_u64() % 2);
    const int K = 1 + static_cast<int>(rng.next_u64() % 4);
    Jet<double> a(rng.uniform(-1, 1), dim, K), b(rng.uniform(-1, 1), dim, K);
    for (int i = 1; i < a.n_coeffs(); ++i) {
      a.coeff(i) = rng.uniform(-1, 1);
      b.coeff(i) = rng.uniform(-1, 1);
    }
    const double al = rng.uniform(-2, 2), be = rng.uniform(-2, 2);
    Jet<double> lhs = a * al + b * be;
    for (int i = 0; i < a.n_coeffs(); ++i)
      CHECK(lhs.coeff(i) == doctest::Approx(al * a.coeff(i) + be * b.coeff(i)).epsilon(1e-12));
  }
}

namespace {

// random composition of {+, *, tanh, exp, ln, sqrt, power} over 2-d inputs,
// kept inside safe ranges for ln/sqrt
template <class T>
T composite_field(const std::span<const T> x, int variant) {
  using kinn::exp;
  using kinn::log;
  using kinn::pow;
  using kinn::sqrt;
  using kinn::tanh;
  const T& a = x[0];
  const T& b = x[1];
  switch (variant % 5) {
    case 0: return tanh(a * b) + exp(a * 0.3) * tanh(b);
    case 1: return sqrt(a * a + b * b + 1.5) * tanh(a + b);
    case 2: return log(a * a + 2.0) + pow(b * b + 1.1, 1.7);
    case 3: return exp(tanh(a) * 0.7 + b * b * 0.1) - a * b;
    default: return tanh(exp(a * 0.5) + log(b * b + 3.0)) * (a + 2.0);
  }
}

}  // namespace

TEST_CASE("product/chain rules match finite differences on random compositions") {
  CounterRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const double coords[2] = {rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    const int variant = trial;
    auto f = [&](std::span<const Jet<double>> x) { return composite_field(x, variant); };
    for (auto [ix, iy] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}}) {
      auto rep = kinn::fd_check(f, std::span<const double>(coords, 2), ix, iy, 1e-4);
      CAPTURE(trial);
      CAPTURE(ix);
      CAPTURE(iy);
      CHECK(rep.rel_err < 1e-5);
    }
  }
}

TEST_CASE("fourth derivatives against analytic values") {
  // f(x) = sin(2x): f'''' = 16 sin(2x)
  auto x = jet_lift(std::vector<double>{0.37}, 1, 4);
  auto y = kinn::sin(x[0] * 2.0);
  CHECK(y.deriv(4) == doctest::Approx(16.0 * std::sin(0.74)).epsilon(1e-10));
  // g = exp(x+y) in 2 vars: all mixed fourths equal exp(x+y)
  auto xy = jet_lift(std::vector<double>{0.2, -0.1}, 2, 4);
  auto g = kinn::exp(xy[0] + xy[1]);
  const double e = std::exp(0.1);
  CHECK(g.deriv(2, 2) == doctest::Approx(e).epsilon(1e-10));
  CHECK(g.deriv(3, 1) == doctest::Approx(e).epsilon(1e-10));
  CHECK(g.deriv(4, 0) == doctest::Approx(e).epsilon(1e-10));
}

TEST_CASE("atan2 jets recover polar angle derivatives on both branches") {
  auto check_at = [&](double xv, double yv) {
    auto f = [](std::span<const Jet<double>> x) { return kinn::atan2(x[1], x[0]); };
    const double coords[2] = {xv, yv};
    for (auto [ix, iy] : {std::pair{1, 0}, {0, 1}, {2, 0}, {1, 1}}) {
      auto rep = kinn::fd_check(f, std::span<const double>(coords, 2), ix, iy, 1e-4);
      CAPTURE(xv);
      CAPTURE(yv);
      CHECK(rep.rel_err < 1e-5);
    }
  };
  check_at(0.7, 0.3);
  check_at(-0.6, 0.4);   // second branch
  check_at(-0.6, -0.4);  // second branch, negative y
  check_at(0.05, -0.9);

  // value convention on the negative x-axis: the +pi face
  auto j = jet_lift(std::vector<double>{-0.5, 0.0}, 2, 1);
  CHECK(kinn::atan2(j[1], j[0]).value() == doctest::Approx(3.14159265358979));
}

TEST_CASE("fd_check reports both values for known derivatives") {
  auto f_sin = [](std::span<const Jet<double>> x) { return kinn::sin(x[0]); };
  const double x0[1] = {0.0};
  auto rep = kinn::fd_check(f_sin, std::span<const double>(x0, 1), 1, 0, 1e-4);
  CHECK(rep.ad == doctest::Approx(1.0));
  CHECK(rep.fd == doctest::Approx(1.0));
  CHECK(rep.rel_err < 1e-7);

  auto f_exp = [](std::span<const Jet<double>> x) { return kinn::exp(x[0]); };
  const double x1[1] = {1.0};
  auto rep2 = kinn::fd_check(f_exp, std::span<const double>(x1, 1), 2, 0, 1e-3);
  CHECK(rep2.ad == doctest::Approx(std::exp(1.0)));
  CHECK(rep2.fd == doctest::Approx(std::exp(1.0)).epsilon(1e-5));
}
