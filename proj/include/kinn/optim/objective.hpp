#pragma once

#include <Eigen/Core>

namespace kinn {

// Differentiable scalar objective over a flat parameter vector.
// value() must be cheap enough for line searches (no tape).
class Objective {
 public:
  virtual ~Objective() = default;
  virtual int dim() const = 0;
  virtual double value(const Eigen::VectorXd& params) = 0;
  virtual double value_and_grad(const Eigen::VectorXd& params, Eigen::VectorXd& grad) = 0;
};

}  // namespace kinn
