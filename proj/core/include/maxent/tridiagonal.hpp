#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maxent {

/// Tridiagonal system lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]
/// solved by forward elimination and back substitution. lower[0] and
/// upper[n-1] are ignored.
struct TridiagonalSystem {
  explicit TridiagonalSystem(std::size_t n = 0) { resize(n); }

  void resize(std::size_t n) {
    lower.assign(n, 0.0);
    diag.assign(n, 0.0);
    upper.assign(n, 0.0);
    rhs.assign(n, 0.0);
    scratch_.assign(n, 0.0);
  }
  std::size_t size() const { return diag.size(); }

  /// Writes the solution into x (size n). Throws NumericalError on a zero or
  /// non-finite pivot.
  void solve(std::span<double> x);

  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

 private:
  std::vector<double> scratch_;
};

}  // namespace maxent
