#include "maxent/log_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maxent/error.hpp"
#include "maxent/tridiagonal.hpp"

namespace maxent {

namespace {

constexpr double kPositivityFloor = 1e-30;

// G(p) = p - p_old - k/2 A log p at interior nodes; returns sup |G|.
double residual(std::span<const double> p, std::span<const double> p_old,
                std::span<const double> log_p, double half_k_over_h2,
                std::span<double> out) {
  double worst = 0.0;
  const std::size_t interior = out.size();
  for (std::size_t j = 0; j < interior; ++j) {
    const std::size_t n = j + 1;
    out[j] = p[n] - p_old[n] -
             half_k_over_h2 * (log_p[n + 1] - 2.0 * log_p[n] + log_p[n - 1]);
    worst = std::max(worst, std::abs(out[j]));
  }
  return worst;
}

}  // namespace

void LadderConfig::validate() const {
  if (regularisation_n < 1) throw ValidationError("regularisation_n must be >= 1");
  if (!(newton_tol > 0.0)) throw ValidationError("newton_tol must be positive");
  if (max_newton_iters < 1) throw ValidationError("max_newton_iters must be >= 1");
}

std::vector<int> default_ladder() { return {1, 2, 4, 8, 16}; }

PField solve_log_diffusion(const Grid& grid, const LadderConfig& cfg,
                           std::vector<int>* newton_iterations) {
  cfg.validate();
  const std::vector<double> initial(static_cast<std::size_t>(grid.N) + 1,
                                    1.0 / cfg.regularisation_n);
  return solve_log_diffusion_from(grid, initial, cfg.regularisation_n, cfg,
                                  newton_iterations);
}

PField solve_log_diffusion_from(const Grid& grid, std::span<const double> initial_row,
                                int regularisation_n, const LadderConfig& cfg,
                                std::vector<int>* newton_iterations) {
  cfg.validate();
  if (initial_row.size() != static_cast<std::size_t>(grid.N) + 1) {
    throw ValidationError("solve_log_diffusion: initial row does not match grid");
  }
  const int interior = grid.N - 1;
  const double half_k_over_h2 = 0.5 * grid.k / (grid.h * grid.h);

  Field values(grid.M + 1, grid.N + 1);
  std::copy(initial_row.begin(), initial_row.end(), values.row(0).begin());

  std::vector<double> p(initial_row.begin(), initial_row.end());
  p.front() = 1.0;
  p.back() = 1.0;
  std::vector<double> log_p(p.size());
  std::vector<double> g(static_cast<std::size_t>(interior));
  std::vector<double> delta(static_cast<std::size_t>(interior));
  std::vector<double> trial(p.size());
  TridiagonalSystem jacobian(static_cast<std::size_t>(interior));
  if (newton_iterations) newton_iterations->clear();

  for (int m = 1; m <= grid.M; ++m) {
    const auto p_old = values.row(m - 1);
    int iter = 0;
    for (;; ++iter) {
      for (std::size_t n = 0; n < p.size(); ++n) log_p[n] = std::log(p[n]);
      const double worst = residual(p, p_old, log_p, half_k_over_h2, g);
      if (worst <= cfg.newton_tol) break;
      if (iter == cfg.max_newton_iters) {
        throw NumericalError("solve_log_diffusion: Newton did not converge at m=" +
                             std::to_string(m) + " (residual " + std::to_string(worst) +
                             ")");
      }
      for (int j = 0; j < interior; ++j) {
        const int n = j + 1;
        jacobian.diag[j] = 1.0 + 2.0 * half_k_over_h2 / p[n];
        jacobian.lower[j] = -half_k_over_h2 / p[n - 1];
        jacobian.upper[j] = -half_k_over_h2 / p[n + 1];
        jacobian.rhs[j] = -g[j];
      }
      jacobian.solve(delta);

      double lambda = 1.0;
      for (;;) {
        bool positive = true;
        for (int j = 0; j < interior; ++j) {
          trial[j + 1] = p[j + 1] + lambda * delta[j];
          if (!(trial[j + 1] > kPositivityFloor)) {
            positive = false;
            break;
          }
        }
        if (positive) break;
        lambda *= 0.5;
        if (lambda < 1e-18) {
          throw NumericalError("solve_log_diffusion: damping underflow at m=" +
                               std::to_string(m));
        }
      }
      for (int n = 1; n < grid.N; ++n) p[n] = trial[n];
    }
    if (newton_iterations) newton_iterations->push_back(iter);
    std::copy(p.begin(), p.end(), values.row(m).begin());
  }
  return PField(grid, std::move(values), regularisation_n);
}

std::vector<double> entropy_row_from_p(std::span<const double> p_row, double h) {
  const std::size_t size = p_row.size();
  std::vector<double> inner(size, 0.0);
  std::vector<double> outer(size, 0.0);
  for (std::size_t n = 1; n < size; ++n) {
    inner[n] = inner[n - 1] + 0.5 * h * (p_row[n - 1] + p_row[n]);
  }
  for (std::size_t n = 1; n < size; ++n) {
    outer[n] = outer[n - 1] + 0.5 * h * (inner[n - 1] + inner[n]);
  }
  const std::size_t last = size - 1;
  std::vector<double> e(size, 0.0);
  for (std::size_t n = 1; n < last; ++n) {
    const double x = static_cast<double>(n) / static_cast<double>(last);
    e[n] = -outer[n] + x * outer[last];
  }
  return e;
}

ValueSurface entropy_from_p(const PField& p) {
  const Grid& grid = p.grid();
  Field values(grid.M + 1, grid.N + 1);
  for (int m = 0; m <= grid.M; ++m) {
    const std::vector<double> e = entropy_row_from_p(p.row(grid.M - m), grid.h);
    std::copy(e.begin(), e.end(), values.row(m).begin());
  }
  return ValueSurface(grid, std::move(values));
}

std::vector<PField> solve_ladder(const Grid& grid, std::span<const int> n_values,
                                 const LadderConfig& base) {
  if (n_values.size() < 2) throw ValidationError("ladder: need at least two n values");
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) {
      throw ValidationError("ladder: n values must be strictly increasing");
    }
  }
  std::vector<PField> members;
  members.reserve(n_values.size());
  for (int n : n_values) {
    LadderConfig cfg = base;
    cfg.regularisation_n = n;
    members.push_back(solve_log_diffusion(grid, cfg));
  }
  return members;
}

double max_increase(const Field& earlier, const Field& later) {
  if (earlier.rows() != later.rows() || earlier.cols() != later.cols()) {
    throw ValidationError("max_increase: field shapes differ");
  }
  double worst = -std::numeric_limits<double>::infinity();
  const auto a = earlier.data();
  const auto b = later.data();
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, b[i] - a[i]);
  return worst;
}

PField ladder_limit(const Grid& grid, std::span<const int> n_values, double tol) {
  std::vector<PField> members = solve_ladder(grid, n_values);
  for (std::size_t i = 1; i < members.size(); ++i) {
    const double rise = max_increase(members[i - 1].values(), members[i].values());
    if (rise > tol) {
      throw NumericalError("ladder_limit: p^" + std::to_string(n_values[i]) +
                           " exceeds p^" + std::to_string(n_values[i - 1]) + " by " +
                           std::to_string(rise) + " (tolerance " + std::to_string(tol) +
                           ")");
    }
  }
  return std::move(members.back());
}

}  // namespace maxent
