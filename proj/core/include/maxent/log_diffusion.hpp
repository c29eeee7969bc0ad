#pragma once

// Forward logarithmic diffusion 2 p_t = (log p)_xx on (0,1) with p = 1 at the
// boundaries and p(0,.) = 1/n, and the double-integral map p -> e that turns
// its solution back into an entropy surface (p(s,.) = -e_xx(T-s,.)).

#include <span>
#include <vector>

#include "maxent/grid.hpp"

namespace maxent {

struct LadderConfig {
  int regularisation_n = 1;
  double newton_tol = 1e-12;
  int max_newton_iters = 100;

  void validate() const;
};

/// Default regularisation ladder n = 1, 2, 4, 8, 16.
std::vector<int> default_ladder();

/// Fully implicit steps 2 (p[m+1] - p[m]) / k = A log p[m+1], each solved by
/// damped Newton iteration on the tridiagonal Jacobian. The residual is
/// measured as p - p_old - k/2 A log p (units of p).
PField solve_log_diffusion(const Grid& grid, const LadderConfig& cfg,
                           std::vector<int>* newton_iterations = nullptr);

/// Same time stepping from an arbitrary positive initial row (boundary
/// entries of the initial row are kept as given for row 0 only).
PField solve_log_diffusion_from(const Grid& grid, std::span<const double> initial_row,
                                int regularisation_n, const LadderConfig& cfg,
                                std::vector<int>* newton_iterations = nullptr);

/// e(t,x) = -int_0^x int_0^y p(T-t,z) dz dy + x int_0^1 int_0^y p(T-t,z) dz dy
/// by nested cumulative trapezoidal sums.
ValueSurface entropy_from_p(const PField& p);

/// Entropy row for a single p row (same quadrature as entropy_from_p).
std::vector<double> entropy_row_from_p(std::span<const double> p_row, double h);

/// Solves the ladder for each n (strictly increasing, at least two entries).
std::vector<PField> solve_ladder(const Grid& grid, std::span<const int> n_values,
                                 const LadderConfig& base = {});

/// Largest nodal increase max(later - earlier) between two fields on one grid.
/// Non-positive when `later` lies nodewise below `earlier`.
double max_increase(const Field& earlier, const Field& later);

/// Solves the ladder, verifies p^{n'} <= p^n + tol nodewise for consecutive
/// members (NumericalError otherwise) and returns the last member.
PField ladder_limit(const Grid& grid, std::span<const int> n_values, double tol);

}  // namespace maxent
