#include "maxent/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "maxent/error.hpp"

namespace maxent {

void TridiagonalSystem::solve(std::span<double> x) {
  const std::size_t n = size();
  if (x.size() != n) throw ValidationError("tridiagonal solve: output size mismatch");
  if (n == 0) return;

  double pivot = diag[0];
  for (std::size_t i = 0;; ++i) {
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw NumericalError("tridiagonal solve: zero or non-finite pivot at row " +
                           std::to_string(i));
    }
    if (i == 0) {
      x[0] = rhs[0] / pivot;
    } else {
      x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    if (i + 1 == n) break;
    scratch_[i] = upper[i] / pivot;
    pivot = diag[i + 1] - lower[i + 1] * scratch_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch_[i] * x[i + 1];
}

}  // namespace maxent
