#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "maxent/error.hpp"
#include "maxent/tridiagonal.hpp"

namespace maxent {
namespace {

// Gaussian elimination with partial pivoting on the dense matrix.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

TEST(Tridiagonal, MatchesDenseElimination) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 5u, 40u}) {
    TridiagonalSystem sys(n);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      sys.lower[i] = i > 0 ? u(rng) : 0.0;
      sys.upper[i] = i + 1 < n ? u(rng) : 0.0;
      sys.diag[i] = 2.5 + u(rng);
      sys.rhs[i] = u(rng);
      dense[i][i] = sys.diag[i];
      if (i > 0) dense[i][i - 1] = sys.lower[i];
      if (i + 1 < n) dense[i][i + 1] = sys.upper[i];
    }
    const auto expected = dense_solve(dense, sys.rhs);
    std::vector<double> x(n);
    sys.solve(x);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], expected[i], 1e-13);
  }
}

TEST(Tridiagonal, ZeroPivotIsNumericalError) {
  TridiagonalSystem sys(2);
  sys.diag = {0.0, 1.0};
  sys.rhs = {1.0, 1.0};
  std::vector<double> x(2);
  EXPECT_THROW(sys.solve(x), NumericalError);
}

}  // namespace
}  // namespace maxent
