#include "maxent/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "maxent/error.hpp"
#include "maxent/tridiagonal.hpp"

namespace maxent {

namespace {

void check_row(std::span<const double> row, const Grid& grid, const char* what) {
  if (row.size() != static_cast<std::size_t>(grid.N) + 1) {
    throw ValidationError(std::string(what) + ": row has " + std::to_string(row.size()) +
                          " entries, grid expects " + std::to_string(grid.N + 1));
  }
}

// Residual of the implicit step at node n, scaled by the magnitude of the terms
// that enter it once that magnitude exceeds one. With a ~ 1e6 the product
// a * (A u) carries round-off far above 1e-12 in absolute terms.
double step_residual(std::span<const double> u, std::span<const double> v_next, int n,
                     const Grid& grid, double cap_d) {
  const double h2 = grid.h * grid.h;
  const double q = (u[n + 1] - 2.0 * u[n] + u[n - 1]) / h2;
  const HamiltonianValue ham = hamiltonian_capped(q, cap_d);
  const double r = u[n] + 0.5 * grid.k * ham.value - v_next[n];
  const double scale =
      std::abs(u[n]) + std::abs(v_next[n]) +
      0.5 * grid.k *
          (ham.argmin * (std::abs(u[n + 1]) + 2.0 * std::abs(u[n]) + std::abs(u[n - 1])) / h2 +
           std::abs(std::log(ham.argmin)) + 1.0);
  return std::abs(r) / std::max(1.0, scale);
}

}  // namespace

void SchemeConfig::validate() const {
  if (!(cap_d >= kControlFloor) || !std::isfinite(cap_d)) {
    throw ValidationError("cap_d must be finite and >= 1/e, got " + std::to_string(cap_d));
  }
  if (!(policy_tol > 0.0)) throw ValidationError("policy_tol must be positive");
  if (max_policy_iters < 1) throw ValidationError("max_policy_iters must be >= 1");
  if (terminal_regularisation_n && *terminal_regularisation_n < 1) {
    throw ValidationError("terminal_regularisation_n must be >= 1");
  }
}

HamiltonianValue hamiltonian_capped(double q, double cap_d) {
  if (!std::isfinite(q)) throw ValidationError("hamiltonian_capped: q is not finite");
  if (!(cap_d >= kControlFloor)) {
    throw ValidationError("hamiltonian_capped: cap_d must be >= 1/e");
  }
  if (q >= 0.0) return {-cap_d * q - std::log(cap_d) - 1.0, cap_d};
  const double unconstrained = -1.0 / q;
  if (unconstrained >= kControlFloor && unconstrained <= cap_d) {
    return {std::log(-q), unconstrained};
  }
  const double a = std::clamp(unconstrained, kControlFloor, cap_d);
  return {-a * q - std::log(a) - 1.0, a};
}

double transition_probability(double a, const Grid& grid) {
  return grid.k * a / (2.0 * grid.h * grid.h);
}

void check_cfl(const Grid& grid, double cap_d) {
  const double ratio = grid.k * cap_d / (grid.h * grid.h);
  if (ratio > 1.0) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "explicit scheme violates k*d/h^2 <= 1: k=" << grid.k << ", h=" << grid.h
        << ", cap_d=" << cap_d << " give k*d/h^2=" << ratio
        << "; need k <= " << grid.h * grid.h / cap_d;
    throw CflError(msg.str());
  }
}

std::vector<double> explicit_step(std::span<const double> v_next, const Grid& grid,
                                  const SchemeConfig& cfg) {
  check_row(v_next, grid, "explicit_step");
  check_cfl(grid, cfg.cap_d);
  std::vector<double> v_prev(v_next.size(), 0.0);
  for (int n = 1; n < grid.N; ++n) {
    const double q = second_difference(v_next, n, grid.h);
    // sup_a {pi v[n+1] + (1 - 2 pi) v[n] + pi v[n-1] + k (log a + 1)/2}
    //   = v[n] - k/2 * min_a {-a q - log a - 1}
    v_prev[n] = v_next[n] - 0.5 * grid.k * hamiltonian_capped(q, cfg.cap_d).value;
  }
  return v_prev;
}

std::vector<double> policy_update(std::span<const double> u, const Grid& grid,
                                  const SchemeConfig& cfg) {
  check_row(u, grid, "policy_update");
  std::vector<double> a(u.size(), 1.0);
  for (int n = 1; n < grid.N; ++n) {
    a[n] = hamiltonian_capped(second_difference(u, n, grid.h), cfg.cap_d).argmin;
  }
  return a;
}

ImplicitStep implicit_step(std::span<const double> v_next, const Grid& grid,
                           const SchemeConfig& cfg) {
  check_row(v_next, grid, "implicit_step");
  const int interior = grid.N - 1;
  const double half_k = 0.5 * grid.k;
  const double c0 = grid.k / (2.0 * grid.h * grid.h);

  std::vector<double> u(v_next.begin(), v_next.end());
  u.front() = 0.0;
  u.back() = 0.0;
  std::vector<double> next(u.size(), 0.0);
  TridiagonalSystem system(static_cast<std::size_t>(interior));

  for (int iter = 1; iter <= cfg.max_policy_iters; ++iter) {
    const std::vector<double> a = policy_update(u, grid, cfg);
    for (int j = 0; j < interior; ++j) {
      const int n = j + 1;
      const double c = c0 * a[n];
      system.lower[j] = -c;
      system.diag[j] = 1.0 + 2.0 * c;
      system.upper[j] = -c;
      system.rhs[j] = v_next[n] + half_k * (std::log(a[n]) + 1.0);
    }
    system.solve(std::span<double>(next).subspan(1, interior));

    double change = 0.0;
    for (int n = 1; n < grid.N; ++n) change = std::max(change, std::abs(next[n] - u[n]));
    u.swap(next);

    if (change <= cfg.policy_tol) {
      double residual = 0.0;
      for (int n = 1; n < grid.N; ++n) {
        residual = std::max(residual, step_residual(u, v_next, n, grid, cfg.cap_d));
      }
      if (residual <= cfg.policy_tol) return {std::move(u), iter};
    }
  }
  throw NumericalError("implicit_step: policy iteration did not converge within " +
                       std::to_string(cfg.max_policy_iters) + " iterations");
}

ValueSurface solve_hjb(const Grid& grid, const SchemeConfig& cfg,
                       std::vector<int>* policy_iterations) {
  cfg.validate();
  if (cfg.scheme == Scheme::Explicit) check_cfl(grid, cfg.cap_d);

  Field values(grid.M + 1, grid.N + 1, 0.0);
  if (cfg.terminal_regularisation_n) {
    const double scale = 1.0 / *cfg.terminal_regularisation_n;
    const std::vector<double> e_inf = stationary_entropy_row(grid);
    auto terminal = values.row(grid.M);
    for (int n = 0; n <= grid.N; ++n) terminal[n] = e_inf[n] * scale;
  }
  if (policy_iterations) policy_iterations->clear();

  for (int m = grid.M; m > 0; --m) {
    std::vector<double> prev;
    if (cfg.scheme == Scheme::Explicit) {
      prev = explicit_step(values.row(m), grid, cfg);
    } else {
      ImplicitStep step = implicit_step(values.row(m), grid, cfg);
      if (policy_iterations) policy_iterations->push_back(step.iterations);
      prev = std::move(step.values);
    }
    prev.front() = 0.0;
    prev.back() = 0.0;
    std::copy(prev.begin(), prev.end(), values.row(m - 1).begin());
  }
  return ValueSurface(grid, std::move(values));
}

ControlField::ControlField(Grid grid, Field a_star, double cap_d)
    : grid_(grid), cap_d_(cap_d), a_star_(std::move(a_star)) {
  if (a_star_.rows() != grid_.M + 1 || a_star_.cols() != grid_.N + 1) {
    throw ValidationError("ControlField: shape does not match grid");
  }
  if (!(cap_d_ >= kControlFloor)) throw ValidationError("ControlField: cap_d must be >= 1/e");
  const double slack = 1e-12;
  sigma_star_ = Field(a_star_.rows(), a_star_.cols());
  for (int m = 0; m <= grid_.M; ++m) {
    for (int n = 0; n <= grid_.N; ++n) {
      const double a = a_star_(m, n);
      if (!(a >= kControlFloor * (1.0 - slack) && a <= cap_d_ * (1.0 + slack))) {
        throw ValidationError("ControlField: a*=" + std::to_string(a) + " at (m=" +
                              std::to_string(m) + ", n=" + std::to_string(n) +
                              ") lies outside [1/e, cap_d]");
      }
      sigma_star_(m, n) = std::sqrt(a);
    }
  }
}

ControlField ControlField::constant(const Grid& grid, double a) {
  return ControlField(grid, Field(grid.M + 1, grid.N + 1, a), std::max(a, kControlFloor));
}

double ControlField::diffusion_at(double t, double x) const {
  if (!(t >= 0.0 && t <= grid_.T && x >= 0.0 && x <= 1.0)) {
    throw ValidationError("ControlField: query (t=" + std::to_string(t) +
                          ", x=" + std::to_string(x) + ") outside [0,T]x[0,1]");
  }
  const double tm = t / grid_.k;
  const double xn = x * grid_.N;
  const int m = std::min(static_cast<int>(tm), grid_.M - 1);
  const int n = std::min(static_cast<int>(xn), grid_.N - 1);
  const double ft = std::clamp(tm - m, 0.0, 1.0);
  const double fx = std::clamp(xn - n, 0.0, 1.0);
  const double lo = (1.0 - fx) * a_star_(m, n) + fx * a_star_(m, n + 1);
  const double hi = (1.0 - fx) * a_star_(m + 1, n) + fx * a_star_(m + 1, n + 1);
  return (1.0 - ft) * lo + ft * hi;
}

ControlField optimal_control_field(const ValueSurface& surface, const SchemeConfig& cfg) {
  const Grid& grid = surface.grid();
  Field a(grid.M + 1, grid.N + 1, 1.0);
  for (int m = 0; m <= grid.M; ++m) {
    const auto row = surface.row(m);
    for (int n = 1; n < grid.N; ++n) {
      a(m, n) = hamiltonian_capped(second_difference(row, n, grid.h), cfg.cap_d).argmin;
    }
  }
  return ControlField(grid, std::move(a), cfg.cap_d);
}

}  // namespace maxent
