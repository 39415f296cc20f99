#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "kinn/ad/jet.hpp"
#include "kinn/ad/tape.hpp"
#include "kinn/common/check.hpp"

namespace kinn {

// Empirical NTK at the current parameters:
// K[i,j] = (df/dtheta at x_i) . (df/dtheta at x_j), assembled as J J^T from
// per-point reverse sweeps. Points are rows of `points` (n x input_dim).
template <class Model>
Eigen::MatrixXd ntk_matrix(const Model& model, const Eigen::VectorXd& params,
                           const Eigen::MatrixXd& points) {
  const int n = static_cast<int>(points.rows());
  const int dim = static_cast<int>(points.cols());
  const int np = static_cast<int>(params.size());
  Eigen::MatrixXd jac(n, np);

  Tape tape;
  Tape::Scope scope(tape);
  std::vector<Var> theta = bind_params(tape, params);
  const std::size_t base = tape.size();
  std::vector<Jet<Var>> x;
  std::vector<Jet<Var>> out;
  for (int i = 0; i < n; ++i) {
    x.clear();
    for (int d = 0; d < dim; ++d) x.emplace_back(Var(points(i, d)), dim, 0);
    model.forward(std::span<const Var>(theta.data(), theta.size()),
                  std::span<const Jet<Var>>(x.data(), x.size()), out);
    tape.zero_adjoints();
    tape.backprop(out[0].value(), 1.0, base);
    for (int k = 0; k < np; ++k) jac(i, k) = tape.adjoint(static_cast<std::size_t>(k));
    tape.truncate(base);
  }
  return jac * jac.transpose();
}

// Symmetric eigendecomposition, eigenvalues descending. The reconstruction
// must hold to 1e-8 relative Frobenius error.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> eig_spectrum(const Eigen::MatrixXd& K) {
  require(K.rows() == K.cols(), "eig_spectrum: square matrix required");
  const double sym_err = (K - K.transpose()).norm();
  require(sym_err <= 1e-10 * std::max(1.0, K.norm()), "eig_spectrum: non-symmetric input");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  require(es.info() == Eigen::Success, "eig_spectrum: eigensolver failed");
  const Eigen::Index n = K.rows();
  Eigen::VectorXd lam(n);
  Eigen::MatrixXd Q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {  // ascending -> descending
    lam[i] = es.eigenvalues()[n - 1 - i];
    Q.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  const double rec = (K - Q * lam.asDiagonal() * Q.transpose()).norm();
  if (K.norm() > 0.0)
    require(rec / K.norm() < 1e-8, "eig_spectrum: reconstruction error exceeds 1e-8");
  return {lam, Q};
}

// Per-mode residual projections |q_i^T (f - Y)|.
inline Eigen::VectorXd mode_residuals(const Eigen::MatrixXd& Q, const Eigen::VectorXd& residual) {
  require(Q.rows() == residual.size(), "mode_residuals: dimension mismatch");
  return (Q.transpose() * residual).cwiseAbs();
}

struct NtkReport {
  Eigen::MatrixXd K;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

template <class Model>
NtkReport ntk_report(const Model& model, const Eigen::VectorXd& params,
                     const Eigen::MatrixXd& points) {
  NtkReport rep;
  rep.K = ntk_matrix(model, params, points);
  std::tie(rep.eigenvalues, rep.eigenvectors) = eig_spectrum(rep.K);
  return rep;
}

// Spectrum dump for external plotting: index, eigenvalue, lambda/lambda_max.
inline void write_spectrum(std::ostream& os, const Eigen::VectorXd& lam) {
  os.precision(17);
  const double lmax = lam.size() ? std::max(lam[0], 1e-300) : 1.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    os << i << ',' << lam[i] << ',' << lam[i] / lmax << '\n';
}

}  // namespace kinn
