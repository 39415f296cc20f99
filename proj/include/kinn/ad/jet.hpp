#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "kinn/common/check.hpp"

namespace kinn {

// value_of: collapse a scalar to its plain double value. Overloaded by the
// reverse-tape variable; the identity for double.
inline double value_of(double x) { return x; }

// constant_like: make a constant with the shape of a prototype scalar, so
// generic code can introduce literals without knowing the scalar type.
inline double constant_like(double /*proto*/, double v) { return v; }

// Truncated Taylor jet in 1 or 2 spatial variables, total order <= 4.
// Coefficients are normalized Taylor coefficients c_{ij} = f_{,x^i y^j} / (i! j!),
// stored graded-lexicographically: (0,0) | (1,0),(0,1) | (2,0),(1,1),(0,2) | ...
// so multiplication is a plain truncated convolution.
//
// The coefficient scalar S is double for plain spatial differentiation and a
// reverse-tape variable when parameter gradients are required as well.
template <class S>
class Jet {
 public:
  static constexpr int kMaxOrder = 4;
  static constexpr int kMaxCoeffs = 15;  // dim 2, order 4

  Jet() : dim_(1), order_(0) { c_[0] = S(0); }

  // Constant jet (all derivatives zero).
  Jet(S value, int dim, int order) : dim_(dim), order_(order) {
    check_shape(dim, order);
    const int n = n_coeffs();
    c_[0] = std::move(value);
    for (int i = 1; i < n; ++i) c_[i] = S(0);
  }

  // Seeded variable jet: d(self)/d(x_axis) = 1.
  static Jet variable(S value, int dim, int order, int axis) {
    Jet j(std::move(value), dim, order);
    require(axis >= 0 && axis < dim, "Jet::variable: axis out of range");
    if (j.order_ >= 1) j.c_[1 + axis] = S(1);
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  int n_coeffs() const { return n_coeffs(dim_, order_); }

  static int n_coeffs(int dim, int order) {
    return dim == 1 ? order + 1 : (order + 1) * (order + 2) / 2;
  }

  const S& value() const { return c_[0]; }
  S& value() { return c_[0]; }

  const S& coeff(int k) const { return c_[k]; }
  S& coeff(int k) { return c_[k]; }

  // Flat index of the (ix, iy) coefficient in the dim-2 layout.
  static int index(int ix, int iy) {
    const int d = ix + iy;
    return d * (d + 1) / 2 + iy;
  }

  // Derivative d^{ix+iy} f / dx^{ix} dy^{iy} (factorials restored).
  S deriv(int ix, int iy = 0) const {
    require(ix >= 0 && iy >= 0, "Jet::deriv: negative order");
    require(ix + iy <= order_, "Jet::deriv: order exceeds jet order");
    require(dim_ == 2 || iy == 0, "Jet::deriv: y-derivative of a 1-d jet");
    static constexpr double fact[5] = {1, 1, 2, 6, 24};
    const int k = dim_ == 1 ? ix : index(ix, iy);
    return c_[k] * S(fact[ix] * fact[iy]);
  }

  void match(const Jet& o) const {
    require(dim_ == o.dim_ && order_ == o.order_,
            "Jet: arithmetic on jets of unequal dim/order");
  }

  // -- arithmetic --------------------------------------------------------------

  Jet operator-() const {
    Jet r = *this;
    const int n = n_coeffs();
    for (int i = 0; i < n; ++i) r.c_[i] = -r.c_[i];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    match(o);
    const int n = n_coeffs();
    for (int i = 0; i < n; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    match(o);
    const int n = n_coeffs();
    for (int i = 0; i < n; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator+=(const S& s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(const S& s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(const S& s) {
    const int n = n_coeffs();
    for (int i = 0; i < n; ++i) c_[i] *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, const S& s) { return a += s; }
  friend Jet operator+(const S& s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const S& s) { return a -= s; }
  friend Jet operator-(const S& s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, const S& s) { return a *= s; }
  friend Jet operator*(const S& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const S& s) { return a *= (S(1) / s); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.match(b);
    Jet r(S(0), a.dim_, a.order_);
    if (a.dim_ == 1) {
      const int n = a.order_;
      for (int i = 0; i <= n; ++i)
        for (int p = 0; p <= i; ++p) r.c_[i] += a.c_[p] * b.c_[i - p];
    } else {
      const int K = a.order_;
      for (int da = 0; da <= K; ++da)
        for (int ia = da; ia >= 0; --ia) {
          const int ja = da - ia;
          const S& av = a.c_[index(ia, ja)];
          for (int db = 0; db + da <= K; ++db)
            for (int ib = db; ib >= 0; --ib) {
              const int jb = db - ib;
              r.c_[index(ia + ib, ja + jb)] += av * b.c_[index(ib, jb)];
            }
        }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  // Composition g = f(u) from the scaled derivatives d_k = f^(k)(u0)/k! of f
  // about u0 = u.value(). Horner in w = u - u0 (zero constant term).
  static Jet compose(const Jet& u, std::span<const S> d) {
    Jet w = u;
    w.c_[0] = S(0);
    const int K = u.order_;
    Jet g(d[K], u.dim_, u.order_);
    for (int k = K - 1; k >= 0; --k) {
      g = g * w;
      g.c_[0] += d[k];
    }
    return g;
  }

 private:
  static void check_shape(int dim, int order) {
    require(dim == 1 || dim == 2, "Jet: dim must be 1 or 2");
    require(order >= 0 && order <= kMaxOrder, "Jet: unsupported order");
  }

  int dim_;
  int order_;
  std::array<S, kMaxCoeffs> c_;
};

template <class S>
double value_of(const Jet<S>& j) {
  return value_of(j.value());
}

template <class S>
Jet<S> constant_like(const Jet<S>& proto, double v) {
  return Jet<S>(S(v), proto.dim(), proto.order());
}

// Re-type a plain jet (e.g. a frozen sub-model's output) into the active
// scalar; the coefficients enter as passive constants.
template <class S>
Jet<S> jet_cast(const Jet<double>& j) {
  Jet<S> r(S(j.value()), j.dim(), j.order());
  for (int i = 1; i < j.n_coeffs(); ++i) r.coeff(i) = S(j.coeff(i));
  return r;
}

// Collapse the coefficients to plain doubles. Legitimate only for jets that
// are passive with respect to any recorded parameters (e.g. coordinates).
template <class S>
Jet<double> jet_value(const Jet<S>& j) {
  Jet<double> r(value_of(j.value()), j.dim(), j.order());
  for (int i = 1; i < j.n_coeffs(); ++i) r.coeff(i) = value_of(j.coeff(i));
  return r;
}

// -- transcendental functions ---------------------------------------------------
// Each builds d_k = f^(k)(u0)/k! for k = 0..order and composes. The scalar
// overloads (tanh(S), exp(S), ...) must exist for S.

template <class S>
Jet<S> reciprocal(const Jet<S>& u) {
  const int K = u.order();
  std::array<S, 5> d;
  const S inv = S(1) / u.value();
  d[0] = inv;
  for (int k = 1; k <= K; ++k) d[k] = -d[k - 1] * inv;
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

namespace detail {
constexpr double kInvFact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
}

template <class S>
Jet<S> exp(const Jet<S>& u) {
  using std::exp;
  const int K = u.order();
  std::array<S, 5> d;
  d[0] = exp(u.value());
  for (int k = 1; k <= K; ++k) d[k] = d[0] * S(detail::kInvFact[k]);
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> log(const Jet<S>& u) {
  using std::log;
  const int K = u.order();
  std::array<S, 5> d;
  d[0] = log(u.value());
  if (K >= 1) {
    const S inv = S(1) / u.value();
    S p = inv;
    for (int k = 1; k <= K; ++k) {
      d[k] = p * S(((k % 2) ? 1.0 : -1.0) / k);
      p = p * inv;
    }
  }
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> sqrt(const Jet<S>& u) {
  using std::sqrt;
  const int K = u.order();
  std::array<S, 5> d;
  const S s = sqrt(u.value());
  d[0] = s;
  if (K >= 1) {
    const S inv = S(1) / u.value();
    d[1] = s * inv * S(0.5);                    // 1/(2 u^{1/2})
    if (K >= 2) d[2] = d[1] * inv * S(-0.25);   // -1/(8 u^{3/2})
    if (K >= 3) d[3] = d[2] * inv * S(-0.5);    // 1/(16 u^{5/2})
    if (K >= 4) d[4] = d[3] * inv * S(-0.625);  // -5/(128 u^{7/2})
  }
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> pow(const Jet<S>& u, double p) {
  using std::pow;
  const int K = u.order();
  std::array<S, 5> d;
  d[0] = pow(u.value(), p);
  if (K >= 1) {
    const S inv = S(1) / u.value();
    S cur = d[0];
    double coef = 1.0;
    for (int k = 1; k <= K; ++k) {
      coef *= (p - (k - 1)) / k;
      cur = cur * inv;
      d[k] = cur * S(coef);
    }
  }
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> tanh(const Jet<S>& u) {
  using std::tanh;
  const int K = u.order();
  std::array<S, 5> d;
  const S t = tanh(u.value());
  d[0] = t;
  if (K >= 1) {
    const S s = S(1) - t * t;  // sech^2
    d[1] = s;
    if (K >= 2) d[2] = -t * s;
    if (K >= 3) d[3] = s * (t * t * S(3) - S(1)) * S(1.0 / 3);
    if (K >= 4) d[4] = s * (t * S(2) - t * t * t * S(3)) * S(1.0 / 3);
  }
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> sin(const Jet<S>& u) {
  using std::cos;
  using std::sin;
  const int K = u.order();
  std::array<S, 5> d;
  const S sn = sin(u.value()), cs = cos(u.value());
  const S tab[4] = {sn, cs, -sn, -cs};
  for (int k = 0; k <= K; ++k) d[k] = tab[k % 4] * S(detail::kInvFact[k]);
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> cos(const Jet<S>& u) {
  using std::cos;
  using std::sin;
  const int K = u.order();
  std::array<S, 5> d;
  const S sn = sin(u.value()), cs = cos(u.value());
  const S tab[4] = {cs, -sn, -cs, sn};
  for (int k = 0; k <= K; ++k) d[k] = tab[k % 4] * S(detail::kInvFact[k]);
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> sinh(const Jet<S>& u) {
  using std::cosh;
  using std::sinh;
  const int K = u.order();
  std::array<S, 5> d;
  const S sh = sinh(u.value()), ch = cosh(u.value());
  for (int k = 0; k <= K; ++k) d[k] = ((k % 2) ? ch : sh) * S(detail::kInvFact[k]);
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> cosh(const Jet<S>& u) {
  using std::cosh;
  using std::sinh;
  const int K = u.order();
  std::array<S, 5> d;
  const S sh = sinh(u.value()), ch = cosh(u.value());
  for (int k = 0; k <= K; ++k) d[k] = ((k % 2) ? sh : ch) * S(detail::kInvFact[k]);
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

template <class S>
Jet<S> atan(const Jet<S>& u) {
  using std::atan;
  const int K = u.order();
  std::array<S, 5> d;
  const S x = u.value();
  d[0] = atan(x);
  if (K >= 1) {
    const S q = S(1) / (S(1) + x * x);
    d[1] = q;
    if (K >= 2) d[2] = -x * q * q;
    if (K >= 3) d[3] = (x * x * S(6) - S(2)) * q * q * q * S(1.0 / 6);
    if (K >= 4) d[4] = (x - x * x * x) * q * q * q * q;  // (24x - 24x^3)/4! q^4
  }
  return Jet<S>::compose(u, std::span<const S>(d.data(), K + 1));
}

// Polar angle in (-pi, pi], smooth away from the origin on either branch.
// On the negative x-axis itself (y == 0 exactly) the +pi branch is taken.
template <class S>
Jet<S> atan2(const Jet<S>& y, const Jet<S>& x) {
  const double xv = value_of(x.value());
  const double yv = value_of(y.value());
  require(xv != 0.0 || yv != 0.0, "atan2: jet at the origin");
  const Jet<S> r = sqrt(x * x + y * y);
  if (xv > 0.0 || std::abs(yv) > std::abs(xv)) {
    return atan(y / (r + x)) * S(2);  // blows up only near the negative x-axis
  }
  const double sgn = (yv < 0.0) ? -1.0 : 1.0;
  return Jet<S>(S(sgn * 3.14159265358979323846), y.dim(), y.order()) -
         atan(y / (r - x)) * S(2);
}

template <class S>
bool all_finite(const Jet<S>& j) {
  for (int i = 0; i < j.n_coeffs(); ++i)
    if (!std::isfinite(value_of(j.coeff(i)))) return false;
  return true;
}

// -- lifting ----------------------------------------------------------------------

// Lift coordinates to identity-seeded jets: component i carries dx_i/dx_j = delta_ij,
// higher orders zero.
inline std::vector<Jet<double>> jet_lift(std::span<const double> x, int dim, int order) {
  require(order >= 1 && order <= Jet<double>::kMaxOrder,
          "jet_lift: unsupported order (want 1..4)");
  require(static_cast<int>(x.size()) == dim, "jet_lift: dim does not match coordinates");
  std::vector<Jet<double>> out;
  out.reserve(x.size());
  for (int i = 0; i < dim; ++i)
    out.push_back(Jet<double>::variable(x[i], dim, order, i));
  return out;
}

}  // namespace kinn
