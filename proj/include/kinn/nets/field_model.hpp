#pragma once

#include <Eigen/Dense>
#include <iostream>
#include <span>
#include <vector>

#include "kinn/ad/jet.hpp"
#include "kinn/common/check.hpp"

namespace kinn {

// Distance surrogate D(x) = sum_i w_i exp(-gamma |x - x_i|), fitted so that D
// vanishes on the essential boundary and tracks the interior min-distance.
// The distance kernel is smoothed by eps2 so jets stay finite when an
// evaluation point coincides with a center.
struct RbfSurrogate {
  Eigen::Matrix<double, Eigen::Dynamic, 2> centers;
  Eigen::VectorXd weights;
  double gamma = 0.5;
  double eps2 = 1e-8;

  template <class T>
  T eval(std::span<const T> x) const {
    using std::exp;
    using std::sqrt;
    T acc = constant_like(x[0], 0.0);
    for (Eigen::Index i = 0; i < centers.rows(); ++i) {
      const T dx = x[0] - constant_like(x[0], centers(i, 0));
      const T dy = x[1] - constant_like(x[0], centers(i, 1));
      const T d = sqrt(dx * dx + dy * dy + constant_like(x[0], eps2));
      acc += exp(d * (-gamma)) * weights[i];
    }
    return acc;
  }

  double eval2(double x, double y) const {
    const double pt[2] = {x, y};
    return eval(std::span<const double>(pt, 2));
  }
};

// Uniform grid of RBF centers over a rectangle, n per side (11x11 default).
inline Eigen::Matrix<double, Eigen::Dynamic, 2> rbf_center_grid(double x_lo, double x_hi,
                                                                double y_lo, double y_hi,
                                                                int n = 11) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> c(n * n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      c(i * n + j, 0) = x_lo + (x_hi - x_lo) * i / (n - 1);
      c(i * n + j, 1) = y_lo + (y_hi - y_lo) * j / (n - 1);
    }
  return c;
}

// Least-squares fit of the RBF weights against min-distance targets. Rows:
// one per fit point. A rank-deficient system falls back to a ridge solve
// with a warning.
inline RbfSurrogate rbf_distance_fit(const Eigen::Matrix<double, Eigen::Dynamic, 2>& fit_pts,
                                     const Eigen::VectorXd& targets,
                                     Eigen::Matrix<double, Eigen::Dynamic, 2> centers,
                                     double gamma = 0.5) {
  require(fit_pts.rows() >= 1, "rbf_distance_fit: need at least one fit point");
  require(fit_pts.rows() == targets.size(), "rbf_distance_fit: target size mismatch");
  RbfSurrogate rbf;
  rbf.centers = std::move(centers);
  rbf.gamma = gamma;

  const Eigen::Index n = fit_pts.rows(), m = rbf.centers.rows();
  Eigen::MatrixXd A(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double dx = fit_pts(i, 0) - rbf.centers(j, 0);
      const double dy = fit_pts(i, 1) - rbf.centers(j, 1);
      A(i, j) = std::exp(-gamma * std::sqrt(dx * dx + dy * dy + rbf.eps2));
    }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < std::min(n, m)) {
    std::cerr << "rbf_distance_fit: rank-deficient system (rank " << qr.rank() << " of "
              << std::min(n, m) << "), using ridge-regularized solve\n";
    const Eigen::MatrixXd G = A.transpose() * A + 1e-10 * Eigen::MatrixXd::Identity(m, m);
    rbf.weights = G.ldlt().solve(A.transpose() * targets);
  } else {
    rbf.weights = qr.solve(targets);
  }
  return rbf;
}

// Admissible scalar field u = u_p(x) + D(x) u_g(x): the particular part fits
// the Dirichlet data and is frozen together with the distance surrogate;
// only the general net trains. Frozen parts run in plain double jets so
// they never touch the tape.
template <class GeneralNet, class ParticularNet>
struct AdmissibleScalar {
  const GeneralNet* general = nullptr;
  const ParticularNet* particular = nullptr;
  Eigen::VectorXd particular_params;
  const RbfSurrogate* distance = nullptr;

  int param_count() const { return general->param_count(); }
  int input_dim() const { return general->input_dim(); }
  int output_dim() const { return 1; }

  template <class S>
  void forward(std::span<const S> params, std::span<const Jet<S>> x,
               std::vector<Jet<S>>& out) const {
    general->forward(params, x, out);
    std::vector<Jet<double>> xd;
    xd.reserve(x.size());
    for (const auto& xi : x) xd.push_back(jet_value(xi));
    std::vector<Jet<double>> up;
    particular->forward(
        std::span<const double>(particular_params.data(), particular_params.size()),
        std::span<const Jet<double>>(xd.data(), xd.size()), up);
    const Jet<double> d = distance->eval(std::span<const Jet<double>>(xd.data(), xd.size()));
    out[0] = jet_cast<S>(up[0]) + jet_cast<S>(d) * out[0];
  }
};

// Coordinate-product admissible field: component k is x[axes[k]] * net_k(x),
// so it vanishes on the plane x[axes[k]] = 0 by construction.
template <class Net>
struct CoordProductField {
  const Net* net = nullptr;
  std::vector<int> axes;

  int param_count() const { return net->param_count(); }
  int input_dim() const { return net->input_dim(); }
  int output_dim() const { return net->output_dim(); }

  template <class S>
  void forward(std::span<const S> params, std::span<const Jet<S>> x,
               std::vector<Jet<S>>& out) const {
    net->forward(params, x, out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = out[k] * x[axes[k]];
  }
};

// Model evaluation helpers on plain coordinates (order-0 jets).

template <class Model>
double eval_scalar(const Model& model, std::span<const double> params,
                   std::span<const double> coords) {
  std::vector<Jet<double>> x;
  x.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    x.emplace_back(coords[i], static_cast<int>(coords.size()), 0);
  std::vector<Jet<double>> out;
  model.forward(params, std::span<const Jet<double>>(x.data(), x.size()), out);
  return out[0].value();
}

template <class Model>
std::vector<double> eval_vector(const Model& model, std::span<const double> params,
                                std::span<const double> coords) {
  std::vector<Jet<double>> x;
  x.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    x.emplace_back(coords[i], static_cast<int>(coords.size()), 0);
  std::vector<Jet<double>> out;
  model.forward(params, std::span<const Jet<double>>(x.data(), x.size()), out);
  std::vector<double> vals(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) vals[k] = out[k].value();
  return vals;
}

}  // namespace kinn
