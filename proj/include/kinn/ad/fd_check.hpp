#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "kinn/ad/jet.hpp"
#include "kinn/common/check.hpp"

namespace kinn {

struct FdReport {
  double ad = 0.0;
  double fd = 0.0;
  double rel_err = 0.0;
};

namespace detail {
// central stencils of second-order accuracy, offsets -2..2
inline std::array<double, 5> central_stencil(int m, double h) {
  switch (m) {
    case 0: return {0, 0, 1, 0, 0};
    case 1: return {0, -0.5 / h, 0, 0.5 / h, 0};
    case 2: return {0, 1 / (h * h), -2 / (h * h), 1 / (h * h), 0};
    case 3: {
      const double h3 = h * h * h;
      return {-0.5 / h3, 1 / h3, 0, -1 / h3, 0.5 / h3};
    }
    case 4: {
      const double h4 = h * h * h * h;
      return {1 / h4, -4 / h4, 6 / h4, -4 / h4, 1 / h4};
    }
    default: throw ContractViolation("central_stencil: order > 4");
  }
}
}  // namespace detail

// Compare the jet derivative d^{ix+iy} f / dx^ix dy^iy against a central
// finite-difference stencil of matching order. F evaluates f on a jet vector.
template <class F>
FdReport fd_check(F&& f, std::span<const double> x, int ix, int iy, double h) {
  require(h > 0.0, "fd_check: step must be positive");
  const int dim = static_cast<int>(x.size());
  const int order = ix + iy;
  require(order >= 1 && order <= 4, "fd_check: derivative order 1..4");

  FdReport rep;
  {
    auto jets = jet_lift(x, dim, order);
    rep.ad = value_of(f(std::span<const Jet<double>>(jets.data(), jets.size())).deriv(ix, iy));
  }

  auto value_at = [&](double dx, double dy) {
    std::vector<double> shifted(x.begin(), x.end());
    shifted[0] += dx;
    if (dim > 1) shifted[1] += dy;
    std::vector<Jet<double>> jets;
    jets.reserve(shifted.size());
    for (int i = 0; i < dim; ++i) jets.emplace_back(shifted[i], dim, 0);
    return value_of(f(std::span<const Jet<double>>(jets.data(), jets.size())));
  };

  const auto sx = detail::central_stencil(ix, h);
  const auto sy = detail::central_stencil(iy, h);
  double fd = 0.0;
  for (int i = -2; i <= 2; ++i) {
    if (sx[i + 2] == 0.0) continue;
    for (int j = -2; j <= 2; ++j) {
      if (sy[j + 2] == 0.0) continue;
      fd += sx[i + 2] * sy[j + 2] * value_at(i * h, j * h);
    }
  }
  rep.fd = fd;
  const double scale = std::max({std::abs(rep.ad), std::abs(rep.fd), 1e-30});
  rep.rel_err = std::abs(rep.ad - rep.fd) / scale;
  return rep;
}

}  // namespace kinn
