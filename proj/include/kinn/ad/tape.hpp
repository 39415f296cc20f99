#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kinn/common/check.hpp"

namespace kinn {

class Tape;

namespace detail {
inline Tape*& active_tape_slot() {
  thread_local Tape* t = nullptr;
  return t;
}
}  // namespace detail

// Recorded scalar for reverse-mode parameter gradients. A Var is either
// passive (a plain constant, idx < 0) or a handle to a node on the active
// tape. Passive/passive arithmetic records nothing; multiplying by an exact
// passive zero annihilates without recording, so dead branches stay off the
// tape.
struct Var {
  double v = 0.0;
  std::int32_t idx = -1;

  Var() = default;
  Var(double value) : v(value) {}  // NOLINT: implicit by design
  Var(double value, std::int32_t i) : v(value), idx(i) {}

  bool passive() const { return idx < 0; }
};

inline double value_of(const Var& x) { return x.v; }
inline Var constant_like(const Var& /*proto*/, double v) { return Var(v); }

// Flat operation record: up to two parents with precomputed local partials.
class Tape {
 public:
  std::size_t size() const { return pa_.size(); }

  void clear() {
    pa_.clear();
    pb_.clear();
    wa_.clear();
    wb_.clear();
  }

  void truncate(std::size_t n) {
    pa_.resize(n);
    pb_.resize(n);
    wa_.resize(n);
    wb_.resize(n);
  }

  void reserve(std::size_t n) {
    pa_.reserve(n);
    pb_.reserve(n);
    wa_.reserve(n);
    wb_.reserve(n);
  }

  Var leaf(double v) {
    const std::int32_t i = push(-1, -1, 0.0, 0.0);
    return Var(v, i);
  }

  std::int32_t push(std::int32_t a, std::int32_t b, double wa, double wb) {
    pa_.push_back(a);
    pb_.push_back(b);
    wa_.push_back(wa);
    wb_.push_back(wb);
    return static_cast<std::int32_t>(pa_.size() - 1);
  }

  // -- reverse sweeps ---------------------------------------------------------
  //
  // Adjoints below `from` accumulate across calls until the next
  // zero_adjoints(); this supports per-point tape scopes whose only
  // cross-scope parents are leaves (parameters).

  void zero_adjoints() {
    adj_.assign(size(), 0.0);
  }

  void backprop(const Var& seed, double seed_weight, std::size_t from) {
    if (seed.passive()) return;  // loss does not depend on any recorded node
    require(static_cast<std::size_t>(seed.idx) < size(), "Tape::backprop: foreign seed");
    if (adj_.size() < size()) adj_.resize(size(), 0.0);
    std::fill(adj_.begin() + static_cast<std::ptrdiff_t>(from), adj_.begin() + static_cast<std::ptrdiff_t>(size()), 0.0);
    adj_[static_cast<std::size_t>(seed.idx)] += seed_weight;
    for (std::size_t i = size(); i-- > from;) {
      const double a = adj_[i];
      if (a == 0.0) continue;
      if (pa_[i] >= 0) adj_[static_cast<std::size_t>(pa_[i])] += a * wa_[i];
      if (pb_[i] >= 0) adj_[static_cast<std::size_t>(pb_[i])] += a * wb_[i];
    }
  }

  double adjoint(std::size_t i) const { return i < adj_.size() ? adj_[i] : 0.0; }

  // Whole-tape gradient w.r.t. the first n_params leaves, seed weight 1.
  Eigen::VectorXd gradient(const Var& seed, int n_params) {
    zero_adjoints();
    backprop(seed, 1.0, 0);
    Eigen::VectorXd g(n_params);
    for (int i = 0; i < n_params; ++i) g[i] = adjoint(static_cast<std::size_t>(i));
    return g;
  }

  // -- activation -------------------------------------------------------------

  static Tape* active() { return detail::active_tape_slot(); }

  class Scope {
   public:
    explicit Scope(Tape& t) : prev_(detail::active_tape_slot()) {
      detail::active_tape_slot() = &t;
    }
    ~Scope() { detail::active_tape_slot() = prev_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Tape* prev_;
  };

 private:
  std::vector<std::int32_t> pa_, pb_;
  std::vector<double> wa_, wb_;
  std::vector<double> adj_;
};

// Register a parameter vector as tape leaves. The leaf order is the model's
// canonical parameter ordering.
inline std::vector<Var> bind_params(Tape& tape, const Eigen::VectorXd& p) {
  std::vector<Var> out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(tape.leaf(p[i]));
  return out;
}

// -- Var arithmetic -------------------------------------------------------------

namespace detail {
inline Var unary(double v, const Var& a, double wa) {
  if (a.passive()) return Var(v);
  Tape* t = active_tape_slot();
  return Var(v, t->push(a.idx, -1, wa, 0.0));
}
inline Var binary(double v, const Var& a, const Var& b, double wa, double wb) {
  if (a.passive() && b.passive()) return Var(v);
  if (a.passive()) return unary(v, b, wb);
  if (b.passive()) return unary(v, a, wa);
  Tape* t = active_tape_slot();
  return Var(v, t->push(a.idx, b.idx, wa, wb));
}
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  return detail::binary(a.v + b.v, a, b, 1.0, 1.0);
}
inline Var operator-(const Var& a, const Var& b) {
  return detail::binary(a.v - b.v, a, b, 1.0, -1.0);
}
inline Var operator-(const Var& a) { return detail::unary(-a.v, a, -1.0); }
inline Var operator*(const Var& a, const Var& b) {
  if (a.passive() && a.v == 0.0) return Var(0.0);
  if (b.passive() && b.v == 0.0) return Var(0.0);
  return detail::binary(a.v * b.v, a, b, b.v, a.v);
}
inline Var operator/(const Var& a, const Var& b) {
  const double inv = 1.0 / b.v;
  return detail::binary(a.v * inv, a, b, inv, -a.v * inv * inv);
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

inline bool operator<(const Var& a, const Var& b) { return a.v < b.v; }
inline bool operator>(const Var& a, const Var& b) { return a.v > b.v; }
inline bool operator<=(const Var& a, const Var& b) { return a.v <= b.v; }
inline bool operator>=(const Var& a, const Var& b) { return a.v >= b.v; }

inline Var tanh(const Var& a) {
  const double t = std::tanh(a.v);
  return detail::unary(t, a, 1.0 - t * t);
}
inline Var exp(const Var& a) {
  const double e = std::exp(a.v);
  return detail::unary(e, a, e);
}
inline Var log(const Var& a) { return detail::unary(std::log(a.v), a, 1.0 / a.v); }
inline Var sqrt(const Var& a) {
  const double s = std::sqrt(a.v);
  return detail::unary(s, a, 0.5 / s);
}
inline Var pow(const Var& a, double p) {
  const double r = std::pow(a.v, p);
  return detail::unary(r, a, p * std::pow(a.v, p - 1.0));
}
inline Var sin(const Var& a) { return detail::unary(std::sin(a.v), a, std::cos(a.v)); }
inline Var cos(const Var& a) { return detail::unary(std::cos(a.v), a, -std::sin(a.v)); }
inline Var sinh(const Var& a) { return detail::unary(std::sinh(a.v), a, std::cosh(a.v)); }
inline Var cosh(const Var& a) { return detail::unary(std::cosh(a.v), a, std::sinh(a.v)); }
inline Var atan(const Var& a) {
  return detail::unary(std::atan(a.v), a, 1.0 / (1.0 + a.v * a.v));
}
// |x| with the zero subgradient at x == 0.
inline Var abs(const Var& a) {
  const double s = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
  return detail::unary(std::abs(a.v), a, s);
}

}  // namespace kinn
