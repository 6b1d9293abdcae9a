#pragma once

#include <stdexcept>
#include <string>

namespace pdk {

/// A computation failed for numerical reasons: non-convergence, a matrix that
/// is not numerically positive definite, an unrecoverable residual.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky factorization of a kernel matrix failed.
class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(const std::string& what, double min_eigenvalue)
      : NumericalError(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace pdk
