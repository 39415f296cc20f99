#pragma once

#include <Eigen/Core>
#include <cmath>
#include <deque>

#include "kinn/optim/objective.hpp"

namespace kinn {

struct LbfgsState {
  std::deque<Eigen::VectorXd> s_list;  // parameter steps
  std::deque<Eigen::VectorXd> y_list;  // gradient differences
  std::deque<double> rho_list;         // 1/(s.y)
  Eigen::VectorXd grad;
  double loss = 0.0;
  bool primed = false;
  long line_search_failures = 0;
};

// One quasi-Newton step: two-loop-recursion direction with backtracking line
// search enforcing sufficient decrease. A failed search falls back to a small
// steepest-descent step and counts the failure.
inline double lbfgs_step(Eigen::VectorXd& params, Objective& obj, LbfgsState& st,
                         int history = 10) {
  if (!st.primed) {
    st.grad.resize(params.size());
    st.loss = obj.value_and_grad(params, st.grad);
    st.primed = true;
  }
  if (st.grad.norm() == 0.0) return st.loss;  // already stationary

  // two-loop recursion
  Eigen::VectorXd q = st.grad;
  const int m = static_cast<int>(st.s_list.size());
  Eigen::VectorXd alpha(m);
  for (int i = m - 1; i >= 0; --i) {
    alpha[i] = st.rho_list[i] * st.s_list[i].dot(q);
    q -= alpha[i] * st.y_list[i];
  }
  if (m > 0) {
    const double gamma =
        st.s_list.back().dot(st.y_list.back()) / st.y_list.back().squaredNorm();
    q *= gamma;
  }
  for (int i = 0; i < m; ++i) {
    const double beta = st.rho_list[i] * st.y_list[i].dot(q);
    q += (alpha[i] - beta) * st.s_list[i];
  }
  Eigen::VectorXd dir = -q;

  double dg = dir.dot(st.grad);
  if (dg >= 0.0) {  // not a descent direction, restart from gradient
    dir = -st.grad;
    dg = dir.dot(st.grad);
  }

  // backtracking Armijo
  const double c1 = 1e-4;
  double t = 1.0;
  const Eigen::VectorXd x0 = params;
  double new_loss = 0.0;
  bool accepted = false;
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXd trial = x0 + t * dir;
    const double f = obj.value(trial);
    if (std::isfinite(f) && f <= st.loss + c1 * t * dg) {
      params = trial;
      new_loss = f;
      accepted = true;
      break;
    }
    t *= 0.5;
  }
  if (!accepted) {
    ++st.line_search_failures;
    const double gn = st.grad.norm();
    const double step = 1e-4 / std::max(1.0, gn);
    Eigen::VectorXd trial = x0 - step * st.grad;
    const double f = obj.value(trial);
    if (std::isfinite(f) && f < st.loss) {
      params = trial;
      new_loss = f;
    } else {
      return st.loss;  // no progress possible this iteration
    }
  }

  Eigen::VectorXd new_grad(params.size());
  const double check = obj.value_and_grad(params, new_grad);
  (void)check;
  const Eigen::VectorXd s = params - x0;
  const Eigen::VectorXd y = new_grad - st.grad;
  const double sy = s.dot(y);
  if (sy > 1e-12 * s.norm() * y.norm()) {  // keep curvature pairs positive
    st.s_list.push_back(s);
    st.y_list.push_back(y);
    st.rho_list.push_back(1.0 / sy);
    while (static_cast<int>(st.s_list.size()) > history) {
      st.s_list.pop_front();
      st.y_list.pop_front();
      st.rho_list.pop_front();
    }
  }
  st.grad = new_grad;
  st.loss = new_loss;
  return st.loss;
}

}  // namespace kinn
