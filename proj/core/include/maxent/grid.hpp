#pragma once

// Space-time discretisation of [0,T] x [0,1] and the dense field containers
// shared by every solver. Time index m runs forward: row 0 is t = 0 and row M
// is t = T. Backward solvers fill rows M -> 0.

#include <span>
#include <vector>

namespace maxent {

struct Grid {
  int N = 0;       ///< spatial intervals
  int M = 0;       ///< time steps
  double T = 0.0;  ///< horizon
  double h = 0.0;  ///< 1/N
  double k = 0.0;  ///< T/M

  double x(int n) const { return static_cast<double>(n) / N; }
  double t(int m) const { return T * static_cast<double>(m) / M; }

  bool operator==(const Grid&) const = default;
};

/// Throws ValidationError naming the offending field when N < 2, M < 1 or T <= 0.
Grid make_grid(int N, int M, double T);

/// Steady state x(1-x)/2 of the entropy equation.
double stationary_entropy(double x);

/// stationary_entropy sampled on the N+1 spatial nodes.
std::vector<double> stationary_entropy_row(const Grid& grid);

/// Centred second difference (row[n+1] - 2 row[n] + row[n-1]) / h^2.
double second_difference(std::span<const double> row, int n, double h);

/// Dense row-major (rows x cols) array of doubles.
class Field {
 public:
  Field() = default;
  Field(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int m, int n) const { return data_[index(m, n)]; }
  double& operator()(int m, int n) { return data_[index(m, n)]; }

  std::span<const double> row(int m) const {
    return {data_.data() + index(m, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<double> row(int m) {
    return {data_.data() + index(m, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<const double> data() const { return data_; }

  bool operator==(const Field&) const = default;

 private:
  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(n);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Entropy / value field e(t,x) on a grid. Lateral boundary columns are zero
/// and every entry is finite; the constructor rejects anything else.
class ValueSurface {
 public:
  ValueSurface(Grid grid, Field values);

  const Grid& grid() const { return grid_; }
  const Field& values() const { return values_; }
  double operator()(int m, int n) const { return values_(m, n); }
  std::span<const double> row(int m) const { return values_.row(m); }

 private:
  Grid grid_;
  Field values_;
};

/// Solution p(t,x) of the logarithmic diffusion problem with initial level
/// 1/regularisation_n. Rows m >= 1 carry the boundary value 1; all entries
/// are strictly positive.
class PField {
 public:
  PField(Grid grid, Field values, int regularisation_n);

  const Grid& grid() const { return grid_; }
  const Field& values() const { return values_; }
  int regularisation_n() const { return regularisation_n_; }
  double operator()(int m, int n) const { return values_(m, n); }
  std::span<const double> row(int m) const { return values_.row(m); }

 private:
  Grid grid_;
  Field values_;
  int regularisation_n_;
};

}  // namespace maxent
