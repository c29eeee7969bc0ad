#include "maxent/density.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "maxent/error.hpp"
#include "maxent/tridiagonal.hpp"

namespace maxent {

double benchmark_volatility(double t, double x, double T) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("benchmark_volatility: x outside [0,1]");
  if (!(t >= 0.0 && t < T)) throw ValidationError("benchmark_volatility: need 0 <= t < T");
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * std::sqrt(T - t));
}

double benchmark_entropy(double t, double x, double T) {
  if (!(t >= 0.0 && t <= T)) throw ValidationError("benchmark_entropy: need 0 <= t <= T");
  if (t == T) return 0.0;
  if (!(x > 0.0 && x < 1.0)) {
    throw ValidationError("benchmark_entropy: diverges at x in {0,1} for t < T");
  }
  const double tau = T - t;
  return tau * (std::log(benchmark_volatility(t, x, T)) + 0.5);
}

VolatilityModel VolatilityModel::early_termination(std::shared_ptr<const ControlField> control) {
  if (!control) throw ValidationError("early_termination model needs a control field");
  const double horizon = control->grid().T;
  return VolatilityModel(ModelKind::EarlyTermination, horizon, std::move(control));
}

VolatilityModel VolatilityModel::full_length(double horizon) {
  if (!(horizon > 0.0)) throw ValidationError("full_length model needs T > 0");
  return VolatilityModel(ModelKind::FullLength, horizon, nullptr);
}

double VolatilityModel::diffusion(double t, double x) const {
  if (kind_ == ModelKind::EarlyTermination) return control_->diffusion_at(t, x);
  const double sigma = benchmark_volatility(t, x, horizon_);
  return sigma * sigma;
}

DensitySurface::DensitySurface(Grid grid, Field values, std::vector<double> absorbed_left,
                               std::vector<double> absorbed_right)
    : grid_(grid),
      values_(std::move(values)),
      absorbed_left_(std::move(absorbed_left)),
      absorbed_right_(std::move(absorbed_right)) {
  const auto levels = static_cast<std::size_t>(grid_.M) + 1;
  if (values_.rows() != grid_.M + 1 || values_.cols() != grid_.N + 1 ||
      absorbed_left_.size() != levels || absorbed_right_.size() != levels) {
    throw ValidationError("DensitySurface: shapes do not match grid");
  }
}

double DensitySurface::interior_mass(int m) const {
  const auto q = values_.row(m);
  double sum = 0.5 * (q.front() + q.back());
  for (int n = 1; n < grid_.N; ++n) sum += q[n];
  return grid_.h * sum;
}

std::vector<double> DensitySurface::cdf(int m) const {
  const auto q = values_.row(m);
  std::vector<double> out(q.size());
  double running = absorbed_left_[m];
  out[0] = running;
  for (int n = 1; n <= grid_.N; ++n) {
    running += 0.5 * grid_.h * (q[n - 1] + q[n]);
    out[n] = running;
  }
  out[grid_.N] += absorbed_right_[m];
  return out;
}

DensitySurface propagate_density(const Grid& grid, double x0, const DiffusionFn& diffusion,
                                 BoundaryMode mode) {
  if (!(x0 > 0.0 && x0 < 1.0)) throw ValidationError("density: x0 must lie in (0,1)");
  const int start = static_cast<int>(std::lround(x0 * grid.N));
  if (start < 1 || start > grid.N - 1) {
    throw ValidationError("density: x0=" + std::to_string(x0) +
                          " rounds to a boundary node on this grid");
  }
  constexpr double kNegativeTolerance = 1e-12;

  const int interior = grid.N - 1;
  const double c0 = grid.k / (2.0 * grid.h * grid.h);
  const double flux0 = grid.k / (2.0 * grid.h);

  Field q(grid.M + 1, grid.N + 1, 0.0);
  std::vector<double> left(static_cast<std::size_t>(grid.M) + 1, 0.0);
  std::vector<double> right(left.size(), 0.0);
  q(0, start) = 1.0 / grid.h;

  std::vector<double> a(static_cast<std::size_t>(grid.N) + 1, 0.0);
  TridiagonalSystem system(static_cast<std::size_t>(interior));
  const int last_pde_level = mode == BoundaryMode::ClosedUntilHorizon ? grid.M - 1 : grid.M;

  for (int m = 1; m <= last_pde_level; ++m) {
    const double t = grid.t(m);
    for (int n = 1; n < grid.N; ++n) a[n] = diffusion(t, grid.x(n));
    const auto old = q.row(m - 1);
    for (int j = 0; j < interior; ++j) {
      const int n = j + 1;
      // column n of A(a q) carries a[n]; rows n-1, n, n+1 receive it
      system.diag[j] = 1.0 + 2.0 * c0 * a[n];
      system.lower[j] = -c0 * a[n - 1];
      system.upper[j] = -c0 * a[n + 1];
      system.rhs[j] = old[n];
    }
    if (mode == BoundaryMode::ClosedUntilHorizon) {
      // no flux through the outer half-links
      system.diag.front() = 1.0 + c0 * a[1];
      system.diag.back() = 1.0 + c0 * a[grid.N - 1];
    }
    auto row = q.row(m);
    system.solve(row.subspan(1, interior));
    for (int n = 1; n < grid.N; ++n) {
      if (row[n] < -kNegativeTolerance) {
        throw NumericalError("density: negative value " + std::to_string(row[n]) +
                             " at (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
      }
    }
    left[m] = left[m - 1];
    right[m] = right[m - 1];
    if (mode == BoundaryMode::Absorbing) {
      left[m] += flux0 * a[1] * row[1];
      right[m] += flux0 * a[grid.N - 1] * row[grid.N - 1];
    }
  }

  if (mode == BoundaryMode::ClosedUntilHorizon) {
    const auto penultimate = q.row(grid.M - 1);
    double to_left = 0.0;
    double to_right = 0.0;
    for (int n = 1; n < grid.N; ++n) {
      to_left += grid.h * (1.0 - grid.x(n)) * penultimate[n];
      to_right += grid.h * grid.x(n) * penultimate[n];
    }
    left[grid.M] = left[grid.M - 1] + to_left;
    right[grid.M] = right[grid.M - 1] + to_right;
  }
  return DensitySurface(grid, std::move(q), std::move(left), std::move(right));
}

DensitySurface solve_forward_density(const VolatilityModel& model, const Grid& grid, double x0) {
  if (std::abs(model.horizon() - grid.T) > 1e-12 * grid.T) {
    throw ValidationError("density: model horizon differs from grid horizon");
  }
  const DiffusionFn a = [&model](double t, double x) { return model.diffusion(t, x); };
  const BoundaryMode mode = model.kind() == ModelKind::FullLength
                                ? BoundaryMode::ClosedUntilHorizon
                                : BoundaryMode::Absorbing;
  return propagate_density(grid, x0, a, mode);
}

int time_index(const Grid& grid, double t) {
  const double pos = t / grid.k;
  const long m = std::lround(pos);
  if (m < 0 || m > grid.M || std::abs(grid.t(static_cast<int>(m)) - t) > 1e-9 * grid.k) {
    throw ValidationError("t=" + std::to_string(t) + " is not a grid time");
  }
  return static_cast<int>(m);
}

double survival_probability(const DensitySurface& density, double t) {
  return density.interior_mass(time_index(density.grid(), t));
}

}  // namespace maxent
