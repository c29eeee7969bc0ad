#pragma once

// Structural checks on solved entropy surfaces: bounds, monotonicity in time,
// symmetry and concavity in x, agreement of the two solver routes, and the
// exponential approach to the stationary entropy.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "maxent/grid.hpp"

namespace maxent {

inline constexpr double kBoundsTolerance = 1e-10;
inline constexpr double kTimeMonotoneTolerance = 1e-10;
inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kConcavityTolerance = 1e-8;
/// Round-off floor used when comparing decay distances across horizons.
inline constexpr double kDistanceRoundoff = 1e-12;

struct CheckEntry {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;  ///< passed iff worst_violation <= tolerance
  double tolerance = 0.0;
  int m = -1;
  int n = -1;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckEntry> checks;

  void add(CheckEntry entry) { checks.push_back(std::move(entry)); }
  void append(const CheckReport& other);
  int passed_count() const;
  int failed_count() const;
  bool all_passed() const { return failed_count() == 0; }
  const CheckEntry* find(const std::string& name) const;

  std::string to_json() const;
  std::string to_table() const;
};

/// 0 <= e <= e_inf, e non-increasing in t, symmetric about x = 1/2, concave in x.
CheckReport check_theorem1(const ValueSurface& surface, const std::string& label = "");

/// Sup-norm distance between two surfaces on the same grid.
double cross_solver_gap(const ValueSurface& hjb, const ValueSurface& represented);

/// (alpha - 1) / (pi alpha^2); throws ValidationError for odd or small alpha.
double decay_rate_constant(int alpha);

/// x (1 - x) exp(-rate (T - t)).
double decay_bound(double x, double time_to_go, int alpha);

using SurfaceFactory = std::function<ValueSurface(double horizon)>;

/// For each horizon: |e^T(0,x) - e_inf(x)| <= decay_bound(x, T) + 10 (k + h^2)
/// at every node, plus one entry checking that sup_x |e^T(0,.) - e_inf| is
/// non-increasing in T.
CheckReport decay_rate_check(const SurfaceFactory& solver, std::span<const double> horizons,
                             int alpha);

/// sup_x |e(0,x) - e_inf(x)|.
double distance_to_stationary(const ValueSurface& surface);

}  // namespace maxent
