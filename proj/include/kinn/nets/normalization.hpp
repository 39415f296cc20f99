#pragma once

#include <span>
#include <vector>

#include "kinn/ad/jet.hpp"
#include "kinn/common/check.hpp"

namespace kinn {

// Bounding-box input normalization: x^s = (x - Xc)/(L/2), y^s = (y - Yc)/(W/2),
// mapping the box onto [-1,1]^dim so coordinates land inside the spline grid
// range regardless of the physical size of the domain.
struct NormalizationBox {
  double L = 2.0;
  double W = 2.0;
  double Xc = 0.0;
  double Yc = 0.0;

  static NormalizationBox identity() { return {}; }

  static NormalizationBox from_extent(double x_lo, double x_hi, double y_lo, double y_hi) {
    NormalizationBox b;
    b.L = x_hi - x_lo;
    b.W = y_hi - y_lo;
    b.Xc = 0.5 * (x_lo + x_hi);
    b.Yc = 0.5 * (y_lo + y_hi);
    return b;
  }

  static NormalizationBox from_extent_1d(double x_lo, double x_hi) {
    NormalizationBox b;
    b.L = x_hi - x_lo;
    b.Xc = 0.5 * (x_lo + x_hi);
    return b;
  }

  bool is_identity() const { return L == 2.0 && W == 2.0 && Xc == 0.0 && Yc == 0.0; }

  void validate() const { require(L > 0.0 && W > 0.0, "NormalizationBox: side <= 0"); }

  template <class T>
  void apply(std::span<T> x) const {
    x[0] = (x[0] - constant_like(x[0], Xc)) * (2.0 / L);
    if (x.size() > 1) x[1] = (x[1] - constant_like(x[1], Yc)) * (2.0 / W);
  }
};

// Plain-coordinate form of the scaling.
inline std::vector<double> normalize(const NormalizationBox& box, std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  box.apply(std::span<double>(out));
  return out;
}

}  // namespace kinn
