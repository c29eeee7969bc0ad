#include "maxent/grid.hpp"

#include <cmath>
#include <string>

#include "maxent/error.hpp"

namespace maxent {

namespace {

void check_shape(const Grid& grid, const Field& values, const char* what) {
  if (values.rows() != grid.M + 1 || values.cols() != grid.N + 1) {
    throw ValidationError(std::string(what) + ": field shape " +
                          std::to_string(values.rows()) + "x" +
                          std::to_string(values.cols()) + " does not match grid " +
                          std::to_string(grid.M + 1) + "x" +
                          std::to_string(grid.N + 1));
  }
}

}  // namespace

Grid make_grid(int N, int M, double T) {
  if (N < 2) throw ValidationError("grid: N must be >= 2, got " + std::to_string(N));
  if (M < 1) throw ValidationError("grid: M must be >= 1, got " + std::to_string(M));
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ValidationError("grid: T must be a positive finite number, got " +
                          std::to_string(T));
  }
  return Grid{N, M, T, 1.0 / N, T / M};
}

double stationary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ValidationError("stationary_entropy: x must lie in [0,1], got " +
                          std::to_string(x));
  }
  return 0.5 * x * (1.0 - x);
}

std::vector<double> stationary_entropy_row(const Grid& grid) {
  std::vector<double> row(static_cast<std::size_t>(grid.N) + 1);
  for (int n = 0; n <= grid.N; ++n) row[n] = stationary_entropy(grid.x(n));
  return row;
}

double second_difference(std::span<const double> row, int n, double h) {
  if (n < 1 || static_cast<std::size_t>(n) + 1 >= row.size()) {
    throw ValidationError("second_difference: node " + std::to_string(n) +
                          " is not interior to a row of " +
                          std::to_string(row.size()) + " nodes");
  }
  return (row[n + 1] - 2.0 * row[n] + row[n - 1]) / (h * h);
}

Field::Field(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
  if (rows < 0 || cols < 0) throw ValidationError("Field: negative dimensions");
}

ValueSurface::ValueSurface(Grid grid, Field values)
    : grid_(grid), values_(std::move(values)) {
  check_shape(grid_, values_, "ValueSurface");
  for (int m = 0; m <= grid_.M; ++m) {
    if (values_(m, 0) != 0.0 || values_(m, grid_.N) != 0.0) {
      throw ValidationError("ValueSurface: nonzero lateral boundary value at m=" +
                            std::to_string(m));
    }
    for (double v : values_.row(m)) {
      if (!std::isfinite(v)) {
        throw ValidationError("ValueSurface: non-finite entry at m=" + std::to_string(m));
      }
    }
  }
}

PField::PField(Grid grid, Field values, int regularisation_n)
    : grid_(grid), values_(std::move(values)), regularisation_n_(regularisation_n) {
  check_shape(grid_, values_, "PField");
  if (regularisation_n_ < 1) throw ValidationError("PField: regularisation_n must be >= 1");
  for (int m = 0; m <= grid_.M; ++m) {
    if (m > 0 && (values_(m, 0) != 1.0 || values_(m, grid_.N) != 1.0)) {
      throw ValidationError("PField: boundary value must be 1 at m=" + std::to_string(m));
    }
    for (double v : values_.row(m)) {
      if (!std::isfinite(v) || !(v > 0.0)) {
        throw ValidationError("PField: entries must be positive and finite, m=" +
                              std::to_string(m));
      }
    }
  }
}

}  // namespace maxent
