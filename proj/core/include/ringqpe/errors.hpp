#pragma once

#include <stdexcept>
#include <string>

namespace ringqpe {

// Raised when a brute-force evaluation would exceed its hard size limits.
class CostGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised for a gauge matrix that is not Hermitian; carries ||A - A^dagger||.
class NonHermitianError : public std::invalid_argument {
 public:
  NonHermitianError(const std::string& what, double residual)
      : std::invalid_argument(what), residual_(residual) {}

  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace ringqpe
