#pragma once

#include <Eigen/Core>
#include <numeric>
#include <span>
#include <vector>

#include "kinn/ad/jet.hpp"
#include "kinn/common/check.hpp"
#include "kinn/common/rng.hpp"
#include "kinn/nets/normalization.hpp"
#include "kinn/spline/bspline.hpp"

namespace kinn {

struct KanOptions {
  bool squash_hidden = true;  // tanh after every non-final layer
  bool use_base = true;       // W * tanh(X) residual path
};

// Kolmogorov-Arnold network: every edge carries a learnable B-spline
// activation phi(x) = sum_m c_m B_m(x), scaled by S, plus a fixed tanh base
// path weighted by W. Per layer, Y_o = sum_i S_oi phi_oi(X_i) + sum_i W_oi tanh(X_i);
// hidden outputs are squashed by tanh to stay inside the grid range, the
// final layer is left raw.
//
// Canonical parameter ordering, layer by layer:
//   c  [n_out][n_in][n_basis]   spline coefficients
//   S  [n_out][n_in]            spline scalers
//   W  [n_out][n_in]            base weights
class KanNetwork {
 public:
  KanNetwork(std::vector<int> dims, SplineGrid grid, KanOptions opt = {},
             NormalizationBox box = {})
      : dims_(std::move(dims)), grid_(grid), opt_(opt), box_(box) {
    require(dims_.size() >= 2, "KanNetwork: need at least one layer");
    for (int d : dims_) require(d >= 1, "KanNetwork: nonpositive width");
    require(dims_.front() == 1 || dims_.front() == 2,
            "KanNetwork: input width must be 1 or 2");
    grid_.validate();
    box_.validate();
    layer_offset_.resize(n_layers() + 1);
    layer_offset_[0] = 0;
    for (int l = 0; l < n_layers(); ++l)
      layer_offset_[l + 1] = layer_offset_[l] + layer_size(l);
  }

  int n_layers() const { return static_cast<int>(dims_.size()) - 1; }
  const std::vector<int>& dims() const { return dims_; }
  const SplineGrid& grid() const { return grid_; }
  const KanOptions& options() const { return opt_; }
  const NormalizationBox& box() const { return box_; }
  NormalizationBox& box() { return box_; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }

  int n_basis() const { return grid_.n_basis(); }

  int layer_size(int l) const {
    const int ni = dims_[l], no = dims_[l + 1];
    return no * ni * n_basis() + 2 * ni * no;
  }

  int param_count() const { return layer_offset_.back(); }

  static int param_count(const std::vector<int>& dims, int grid_size, int order) {
    int total = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
      total += dims[l + 1] * dims[l] * (grid_size + order) + 2 * dims[l] * dims[l + 1];
    return total;
  }

  // W ~ U(+-sqrt(6/(n_in+n_out))), S = 1, spline coefficients small uniform
  // noise of scale 0.1/(G+r): the initial field hugs the base path.
  Eigen::VectorXd init_params(CounterRng& rng) const {
    Eigen::VectorXd p(param_count());
    const int nb = n_basis();
    const double cs = 0.1 / nb;
    for (int l = 0; l < n_layers(); ++l) {
      const int ni = dims_[l], no = dims_[l + 1];
      double* base = p.data() + layer_offset_[l];
      for (int k = 0; k < no * ni * nb; ++k) base[k] = rng.uniform(-cs, cs);
      double* s = base + no * ni * nb;
      for (int k = 0; k < no * ni; ++k) s[k] = 1.0;
      double* w = s + no * ni;
      const double ws = std::sqrt(6.0 / (ni + no));
      for (int k = 0; k < no * ni; ++k) w[k] = rng.uniform(-ws, ws);
    }
    return p;
  }

  long out_of_range_count() const { return out_of_range_; }
  void reset_diagnostics() const { out_of_range_ = 0; }

  template <class S>
  void forward(std::span<const S> params, std::span<const Jet<S>> x,
               std::vector<Jet<S>>& out) const {
    require(static_cast<int>(x.size()) == dims_.front(),
            "KanNetwork::forward: input width mismatch");
    require(static_cast<int>(params.size()) == param_count(),
            "KanNetwork::forward: parameter vector size mismatch");
    const int r = grid_.order;
    const int nb = n_basis();
    const Jet<S> zero = constant_like(x[0], 0.0);

    std::vector<Jet<S>> cur(x.begin(), x.end());
    box_.apply(std::span<Jet<S>>(cur));
    std::vector<Jet<S>> next;
    std::vector<Jet<S>> tanh_in;
    std::vector<Jet<S>> basis;   // n_in x (r+1), row-major
    std::vector<int> first_idx;  // first active coefficient index per input

    for (int l = 0; l < n_layers(); ++l) {
      const int ni = dims_[l], no = dims_[l + 1];
      const S* p = params.data() + layer_offset_[l];
      const S* ps = p + no * ni * nb;
      const S* pw = ps + no * ni;

      basis.assign(static_cast<std::size_t>(ni) * (r + 1), zero);
      first_idx.assign(ni, 0);
      if (opt_.use_base) tanh_in.assign(ni, zero);
      for (int i = 0; i < ni; ++i) {
        const double xv = value_of(cur[i]);
        if (!grid_.in_range(xv)) ++out_of_range_;
        const int span = grid_.in_range(xv) ? grid_.interior_span_of(xv) : grid_.span_of(xv);
        first_idx[i] = span - r;
        active_basis(grid_, span, cur[i],
                     std::span<Jet<S>>(basis.data() + static_cast<std::size_t>(i) * (r + 1),
                                       r + 1));
        if (opt_.use_base) tanh_in[i] = tanh(cur[i]);
      }

      next.assign(no, zero);
      for (int o = 0; o < no; ++o) {
        Jet<S> acc = zero;
        for (int i = 0; i < ni; ++i) {
          const S* c = p + (static_cast<std::size_t>(o) * ni + i) * nb;
          Jet<S> phi = zero;
          const Jet<S>* b = basis.data() + static_cast<std::size_t>(i) * (r + 1);
          for (int j = 0; j <= r; ++j) {
            const int m = first_idx[i] + j;
            if (m < 0 || m >= nb) continue;
            phi += b[j] * c[m];
          }
          acc += phi * ps[o * ni + i];
          if (opt_.use_base) acc += tanh_in[i] * pw[o * ni + i];
        }
        if (l + 1 < n_layers() && opt_.squash_hidden) acc = tanh(acc);
        next[o] = acc;
      }
      cur.swap(next);
    }
    out = std::move(cur);
  }

 private:
  std::vector<int> dims_;
  SplineGrid grid_;
  KanOptions opt_;
  NormalizationBox box_;
  std::vector<int> layer_offset_;
  mutable long out_of_range_ = 0;  // single-threaded diagnostic
};

}  // namespace kinn
