#pragma once

// Kolmogorov forward equation q_t = 1/2 (a(t,x) q)_xx for the (sub-)density of
// the win-probability process, started from a discrete Dirac mass. Mass that
// leaves (0,1) is booked into per-side absorbed-mass ledgers.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "maxent/grid.hpp"
#include "maxent/hjb.hpp"

namespace maxent {

/// sin(pi x) / (pi sqrt(T - t)), the full-length benchmark volatility.
double benchmark_volatility(double t, double x, double T);

/// (T-t) (log(sin(pi x) / (pi sqrt(T-t))) + 1/2); zero at t = T.
double benchmark_entropy(double t, double x, double T);

enum class ModelKind { EarlyTermination, FullLength };

class VolatilityModel {
 public:
  static VolatilityModel early_termination(std::shared_ptr<const ControlField> control);
  static VolatilityModel full_length(double horizon);

  ModelKind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  /// Null for the full-length model.
  const ControlField* control() const { return control_.get(); }

  /// Diffusion coefficient a = sigma^2 at (t, x).
  double diffusion(double t, double x) const;

 private:
  VolatilityModel(ModelKind kind, double horizon, std::shared_ptr<const ControlField> control)
      : kind_(kind), horizon_(horizon), control_(std::move(control)) {}

  ModelKind kind_;
  double horizon_;
  std::shared_ptr<const ControlField> control_;
};

class DensitySurface {
 public:
  DensitySurface(Grid grid, Field values, std::vector<double> absorbed_left,
                 std::vector<double> absorbed_right);

  const Grid& grid() const { return grid_; }
  const Field& values() const { return values_; }
  std::span<const double> row(int m) const { return values_.row(m); }
  const std::vector<double>& absorbed_left() const { return absorbed_left_; }
  const std::vector<double>& absorbed_right() const { return absorbed_right_; }

  /// Trapezoidal integral of q(t_m, .) over (0,1).
  double interior_mass(int m) const;

  /// Distribution function of X_{t_m} on the nodes, atoms included:
  /// F(x_n) = absorbed_left + int_0^{x_n} q, F(1) = 1 up to round-off.
  std::vector<double> cdf(int m) const;

 private:
  Grid grid_;
  Field values_;
  std::vector<double> absorbed_left_;
  std::vector<double> absorbed_right_;
};

enum class BoundaryMode {
  Absorbing,  ///< flux through x in {0,1} is absorbed every step
  ClosedUntilHorizon,  ///< zero flux for t < T; the last level is the exit split of level M-1
};

using DiffusionFn = std::function<double(double t, double x)>;

/// Implicit conservative stepping q[m+1] - k/2 A(a q[m+1]) = q[m] with a
/// evaluated at t_{m+1}. With ClosedUntilHorizon, `diffusion` is only called
/// for t < T.
DensitySurface propagate_density(const Grid& grid, double x0, const DiffusionFn& diffusion,
                                 BoundaryMode mode);

/// Early termination: absorbing boundaries under the control field. Full
/// length: the closed-form volatility vanishes at x in {0,1}, so no mass is
/// absorbed before T; at T each unit of mass at x exits to 1 with
/// probability x (the infinite-volatility limit of the last step).
DensitySurface solve_forward_density(const VolatilityModel& model, const Grid& grid, double x0);

/// Integral of q(t, .) over (0,1). t must coincide with a grid time.
double survival_probability(const DensitySurface& density, double t);

/// Grid index of time t; throws ValidationError if t is not a grid time.
int time_index(const Grid& grid, double t);

}  // namespace maxent
