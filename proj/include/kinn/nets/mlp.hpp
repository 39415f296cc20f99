#pragma once

#include <Eigen/Core>
#include <cmath>
#include <span>
#include <vector>

#include "kinn/ad/jet.hpp"
#include "kinn/common/check.hpp"
#include "kinn/common/rng.hpp"
#include "kinn/nets/normalization.hpp"

namespace kinn {

// Fully connected baseline with tanh hidden activations, raw final layer.
// Canonical parameter ordering, layer by layer: W [n_out][n_in] row-major,
// then b [n_out].
class MlpNetwork {
 public:
  explicit MlpNetwork(std::vector<int> dims, NormalizationBox box = {})
      : dims_(std::move(dims)), box_(box) {
    require(dims_.size() >= 2, "MlpNetwork: need at least one layer");
    for (int d : dims_) require(d >= 1, "MlpNetwork: nonpositive width");
    box_.validate();
    layer_offset_.resize(n_layers() + 1);
    layer_offset_[0] = 0;
    for (int l = 0; l < n_layers(); ++l)
      layer_offset_[l + 1] = layer_offset_[l] + dims_[l] * dims_[l + 1] + dims_[l + 1];
  }

  int n_layers() const { return static_cast<int>(dims_.size()) - 1; }
  const std::vector<int>& dims() const { return dims_; }
  const NormalizationBox& box() const { return box_; }
  NormalizationBox& box() { return box_; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }

  int param_count() const { return layer_offset_.back(); }

  static int param_count(const std::vector<int>& dims) {
    int total = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
      total += dims[l] * dims[l + 1] + dims[l + 1];
    return total;
  }

  // U(+-1/sqrt(n_in)) for weights and biases.
  Eigen::VectorXd init_params(CounterRng& rng) const {
    Eigen::VectorXd p(param_count());
    for (int l = 0; l < n_layers(); ++l) {
      const double s = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
      double* base = p.data() + layer_offset_[l];
      const int n = dims_[l] * dims_[l + 1] + dims_[l + 1];
      for (int k = 0; k < n; ++k) base[k] = rng.uniform(-s, s);
    }
    return p;
  }

  template <class S>
  void forward(std::span<const S> params, std::span<const Jet<S>> x,
               std::vector<Jet<S>>& out) const {
    require(static_cast<int>(x.size()) == dims_.front(),
            "MlpNetwork::forward: input width mismatch");
    require(static_cast<int>(params.size()) == param_count(),
            "MlpNetwork::forward: parameter vector size mismatch");
    const Jet<S> zero = constant_like(x[0], 0.0);

    std::vector<Jet<S>> cur(x.begin(), x.end());
    box_.apply(std::span<Jet<S>>(cur));
    std::vector<Jet<S>> next;
    for (int l = 0; l < n_layers(); ++l) {
      const int ni = dims_[l], no = dims_[l + 1];
      const S* w = params.data() + layer_offset_[l];
      const S* b = w + ni * no;
      next.assign(no, zero);
      for (int o = 0; o < no; ++o) {
        Jet<S> acc = constant_like(x[0], 0.0);
        acc += b[o];
        const S* wrow = w + static_cast<std::size_t>(o) * ni;
        for (int i = 0; i < ni; ++i) acc += cur[i] * wrow[i];
        next[o] = (l + 1 < n_layers()) ? tanh(acc) : acc;
      }
      cur.swap(next);
    }
    out = std::move(cur);
  }

 private:
  std::vector<int> dims_;
  NormalizationBox box_;
  std::vector<int> layer_offset_;
};

}  // namespace kinn
