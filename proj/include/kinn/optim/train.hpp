#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "kinn/common/check.hpp"
#include "kinn/optim/adam.hpp"
#include "kinn/optim/lbfgs.hpp"
#include "kinn/optim/objective.hpp"

namespace kinn {

enum class OptimizerKind { adam, lbfgs };

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::adam;
  double lr = 1e-3;  // Adam; LBFGS uses unit steps with backtracking
  int epochs = 1000;
  std::uint64_t seed = 0;
  int lbfgs_history = 10;
  int log_every = 1;

  void validate() const {
    require(lr > 0.0, "TrainConfig: lr must be positive");
    require(epochs >= 0, "TrainConfig: negative epoch count");
    require(log_every >= 1, "TrainConfig: log cadence >= 1");
  }
};

struct MetricRow {
  int epoch = 0;
  double loss = 0.0;
  double rel_l2 = std::numeric_limits<double>::quiet_NaN();
  double rel_h1 = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  Eigen::VectorXd params;
  std::vector<MetricRow> history;
  bool diverged = false;
  long rejected_steps = 0;
};

// Full-batch training loop. The metric hook (optional) may fill rel_l2/rel_h1
// on the row about to be logged; it sees the parameters the loss was
// evaluated at. Loss NaN aborts with partial history.
inline TrainResult train(
    Objective& obj, Eigen::VectorXd init, const TrainConfig& cfg,
    const std::function<void(const Eigen::VectorXd&, MetricRow&)>& metrics = nullptr) {
  cfg.validate();
  TrainResult res;
  res.params = std::move(init);

  AdamState adam;
  LbfgsState lbfgs;
  Eigen::VectorXd grad(res.params.size());

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = 0.0;
    if (cfg.optimizer == OptimizerKind::adam) {
      loss = obj.value_and_grad(res.params, grad);
      if (!std::isfinite(loss)) {
        res.diverged = true;
        break;
      }
      if (!adam_step(res.params, grad, adam, AdamConfig{cfg.lr, 0.9, 0.999, 1e-8}))
        ++res.rejected_steps;
    } else {
      loss = lbfgs_step(res.params, obj, lbfgs, cfg.lbfgs_history);
      if (!std::isfinite(loss)) {
        res.diverged = true;
        break;
      }
    }
    if (epoch % cfg.log_every == 0 || epoch + 1 == cfg.epochs) {
      MetricRow row;
      row.epoch = epoch;
      row.loss = loss;
      if (metrics) metrics(res.params, row);
      res.history.push_back(row);
    }
  }
  return res;
}

}  // namespace kinn
