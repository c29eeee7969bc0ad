#pragma once

// Backward solvers for the entropy HJB equation
//
//   d/dt e = 1/2 inf_{a in [1/e, d]} { -a e_xx - log a - 1 },
//   e(T,.) = 0 (or e_inf/n),  e(.,0) = e(.,1) = 0,
//
// with a monotone explicit scheme (transition-probability form, requires
// k d / h^2 <= 1) and an unconditionally stable implicit scheme whose
// nonlinear step is solved by policy iteration.

#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "maxent/grid.hpp"

namespace maxent {

/// Optimal controls never fall below 1/e, so the control set is [1/e, d].
inline constexpr double kControlFloor = 1.0 / std::numbers::e;

enum class Scheme { Explicit, Implicit };

struct SchemeConfig {
  double cap_d = 1e6;
  Scheme scheme = Scheme::Implicit;
  double policy_tol = 1e-12;
  int max_policy_iters = 50;
  /// When set, terminal data is e_inf / n instead of 0.
  std::optional<int> terminal_regularisation_n;

  /// Throws ValidationError if any field is out of range.
  void validate() const;
};

struct HamiltonianValue {
  double value;   ///< min over a in [1/e, d] of (-a q - log a - 1)
  double argmin;  ///< the minimising a
};

/// Capped Legendre-type Hamiltonian. The objective is convex in a, so the
/// minimiser is clamp(-1/q, 1/e, d) for q < 0 and d for q >= 0.
HamiltonianValue hamiltonian_capped(double q, double cap_d);

/// Transition probability k a / (2 h^2) of the explicit scheme's random walk.
double transition_probability(double a, const Grid& grid);

/// Throws CflError unless k * cap_d / h^2 <= 1.
void check_cfl(const Grid& grid, double cap_d);

/// One backward step of the explicit scheme: v_next is level m, the result is
/// level m-1. Boundaries are set to zero.
std::vector<double> explicit_step(std::span<const double> v_next, const Grid& grid,
                                  const SchemeConfig& cfg);

/// Per-node maximising controls for the current iterate u. Boundary entries
/// are set to 1.
std::vector<double> policy_update(std::span<const double> u, const Grid& grid,
                                  const SchemeConfig& cfg);

struct ImplicitStep {
  std::vector<double> values;
  int iterations = 0;  ///< linear solves performed
};

/// One backward step of the implicit scheme,
///   min_a { ((1 - k a / 2 A) u)_n - k (log a + 1) / 2 } = v_next[n],
/// solved by policy iteration warm-started at v_next.
ImplicitStep implicit_step(std::span<const double> v_next, const Grid& grid,
                           const SchemeConfig& cfg);

/// Full backward sweep from the terminal row. If policy_iterations is given
/// it receives the iteration count of each implicit step (row M-1 first).
ValueSurface solve_hjb(const Grid& grid, const SchemeConfig& cfg,
                       std::vector<int>* policy_iterations = nullptr);

/// Feedback diffusion coefficient a*(t,x) and volatility sqrt(a*).
class ControlField {
 public:
  /// Validates 1/e <= a <= cap_d (up to round-off) and derives sigma.
  ControlField(Grid grid, Field a_star, double cap_d);

  static ControlField constant(const Grid& grid, double a);

  const Grid& grid() const { return grid_; }
  double cap_d() const { return cap_d_; }
  const Field& a_star() const { return a_star_; }
  const Field& sigma_star() const { return sigma_star_; }

  /// Bilinear interpolation of a* at (t, x). Throws ValidationError outside
  /// [0,T] x [0,1].
  double diffusion_at(double t, double x) const;

 private:
  Grid grid_;
  double cap_d_;
  Field a_star_;
  Field sigma_star_;
};

/// a* = clamp(-1/(A e), 1/e, d) at interior nodes, 1 at x in {0, 1}.
ControlField optimal_control_field(const ValueSurface& surface, const SchemeConfig& cfg);

}  // namespace maxent
