#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "kinn/common/rng.hpp"
#include "kinn/nets/kan.hpp"
#include "kinn/ntk/ntk.hpp"

using kinn::CounterRng;
using kinn::Jet;
using kinn::KanNetwork;
using kinn::SplineGrid;

namespace {

// f(x; theta) = theta * x, one parameter
struct LinearModel {
  template <class S>
  void forward(std::span<const S> params, std::span<const Jet<S>> x,
               std::vector<Jet<S>>& out) const {
    out.assign(1, x[0] * params[0]);
  }
};

// cyclic Jacobi eigensolver, test oracle independent of Eigen
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd A) {
  const int n = static_cast<int>(A.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-18) continue;
        const double theta = 0.5 * (A(q, q) - A(p, p)) / A(p, q);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
        J(p, p) = c;
        J(q, q) = c;
        J(p, q) = s;
        J(q, p) = -s;
        A = J.transpose() * A * J;
      }
  }
  Eigen::VectorXd lam = A.diagonal();
  std::sort(lam.data(), lam.data() + n, std::greater<double>());
  return lam;
}

}  // namespace

TEST_CASE("ntk of the linear model f = theta x at points {1,2}") {
  LinearModel m;
  Eigen::VectorXd theta(1);
  theta << 0.37;  // value is irrelevant: gradient is x
  Eigen::MatrixXd pts(2, 1);
  pts << 1.0, 2.0;
  Eigen::MatrixXd K = kinn::ntk_matrix(m, theta, pts);
  CHECK(K(0, 0) == doctest::Approx(1.0));
  CHECK(K(0, 1) == doctest::Approx(2.0));
  CHECK(K(1, 0) == doctest::Approx(2.0));
  CHECK(K(1, 1) == doctest::Approx(4.0));
}

TEST_CASE("ntk of a random KAN is symmetric and PSD") {
  KanNetwork net({1, 5, 5, 1}, SplineGrid{-1, 1, 5, 3});
  CounterRng rng(3);
  Eigen::VectorXd p = net.init_params(rng);
  Eigen::MatrixXd pts(12, 1);
  for (int i = 0; i < 12; ++i) pts(i, 0) = -1.0 + 2.0 * i / 11.0;
  Eigen::MatrixXd K = kinn::ntk_matrix(net, p, pts);
  CHECK((K - K.transpose()).norm() < 1e-10 * K.norm());
  auto [lam, Q] = kinn::eig_spectrum(K);
  CHECK(lam[lam.size() - 1] >= -1e-8 * lam[0]);
  (void)Q;
}

TEST_CASE("gram structure: K equals the explicit Jacobian product on a tiny net") {
  KanNetwork net({1, 2, 1}, SplineGrid{-1, 1, 3, 2});
  CounterRng rng(5);
  Eigen::VectorXd p = net.init_params(rng);
  const int np = net.param_count();
  Eigen::MatrixXd pts(4, 1);
  pts << -0.8, -0.1, 0.4, 0.9;

  // explicit Jacobian by central differences
  Eigen::MatrixXd J(4, np);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < np; ++k) {
      const double h = 1e-6;
      auto eval = [&](double delta) {
        Eigen::VectorXd q = p;
        q[k] += delta;
        std::vector<Jet<double>> x{Jet<double>(pts(i, 0), 1, 0)};
        std::vector<Jet<double>> out;
        net.forward(std::span<const double>(q.data(), q.size()),
                    std::span<const Jet<double>>(x.data(), x.size()), out);
        return out[0].value();
      };
      J(i, k) = (eval(h) - eval(-h)) / (2 * h);
    }
  Eigen::MatrixXd K = kinn::ntk_matrix(net, p, pts);
  CHECK((K - J * J.transpose()).norm() < 1e-6 * std::max(1.0, K.norm()));
}

TEST_CASE("eig_spectrum basics") {
  Eigen::MatrixXd K(2, 2);
  K << 1, 2, 2, 4;
  auto [lam, Q] = kinn::eig_spectrum(K);
  CHECK(lam[0] == doctest::Approx(5.0));
  CHECK(lam[1] == doctest::Approx(0.0));
  CHECK((K - Q * lam.asDiagonal() * Q.transpose()).norm() < 1e-12);

  auto [lam_i, Q_i] = kinn::eig_spectrum(Eigen::MatrixXd::Identity(6, 6));
  for (int i = 0; i < 6; ++i) CHECK(lam_i[i] == doctest::Approx(1.0));
  (void)Q_i;

  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 3, 4;
  CHECK_THROWS_AS((void)kinn::eig_spectrum(bad), kinn::ContractViolation);
}

TEST_CASE("eig_spectrum matches a Jacobi-rotation oracle on a random Gram matrix") {
  CounterRng rng(7);
  Eigen::MatrixXd B(50, 20);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 20; ++j) B(i, j) = rng.normal();
  Eigen::MatrixXd K = B * B.transpose();
  auto [lam, Q] = kinn::eig_spectrum(K);
  Eigen::VectorXd lam_oracle = jacobi_eigenvalues(K);
  const double scale = std::max(1.0, std::abs(lam[0]));
  for (int i = 0; i < 50; ++i)
    CHECK(std::abs(lam[i] - lam_oracle[i]) / scale < 1e-8);
  (void)Q;
}

TEST_CASE("mode residuals") {
  Eigen::MatrixXd K(3, 3);
  K << 2, 0.3, 0.1, 0.3, 1.5, 0.2, 0.1, 0.2, 1.0;
  auto [lam, Q] = kinn::eig_spectrum(K);
  (void)lam;

  Eigen::VectorXd r = Q.col(0);
  Eigen::VectorXd proj = kinn::mode_residuals(Q, r);
  CHECK(proj[0] == doctest::Approx(1.0));
  CHECK(proj[1] == doctest::Approx(0.0));
  CHECK(proj[2] == doctest::Approx(0.0));

  CHECK(kinn::mode_residuals(Q, Eigen::VectorXd::Zero(3)).norm() == 0.0);

  CounterRng rng(11);
  Eigen::VectorXd rr(3);
  for (int i = 0; i < 3; ++i) rr[i] = rng.normal();
  Eigen::VectorXd pr = kinn::mode_residuals(Q, rr);
  CHECK(pr.squaredNorm() == doctest::Approx(rr.squaredNorm()).epsilon(1e-12));  // Parseval
}
