#pragma once

#include <Eigen/Core>
#include <cmath>

namespace kinn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;

  void init(Eigen::Index n) {
    m = Eigen::VectorXd::Zero(n);
    v = Eigen::VectorXd::Zero(n);
    step = 0;
  }
};

// Bias-corrected moment update. Returns false (parameters untouched) on a
// non-finite gradient.
inline bool adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, AdamState& st,
                      const AdamConfig& cfg = {}) {
  if (!grad.allFinite()) return false;
  if (st.m.size() != params.size()) st.init(params.size());
  ++st.step;
  st.m = cfg.beta1 * st.m + (1.0 - cfg.beta1) * grad;
  st.v = cfg.beta2 * st.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));
  params.array() -=
      cfg.lr * (st.m.array() / bc1) / ((st.v.array() / bc2).sqrt() + cfg.eps);
  return true;
}

}  // namespace kinn
