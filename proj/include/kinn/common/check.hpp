#pragma once

#include <stdexcept>
#include <string>

namespace kinn {

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct NumericalFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw ContractViolation(what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace kinn
