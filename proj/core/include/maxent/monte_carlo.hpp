#pragma once

// Euler-Maruyama simulation of the controlled martingale dX = sqrt(a(t,X)) dW
// on (0,1) with absorption at the boundary, estimating the entropy reward
// J = E[1/2 int_0^{tau ^ T} (1 + log a) dt] and exit-time statistics.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "maxent/density.hpp"
#include "maxent/hjb.hpp"

namespace maxent {

struct SimConfig {
  long n_paths = 100000;
  double dt = 1e-3;
  std::uint64_t base_seed = 20240601;
  double x0 = 0.5;
  /// Times at which the absorbed fraction is reported.
  std::vector<double> probe_times;
  /// If set, X at this time (boundary value once absorbed) is recorded per path.
  std::optional<double> snapshot_time;
  /// Kill a surviving step with the Brownian-bridge crossing probability.
  bool bridge_correction = true;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  int threads = 0;

  void validate(double horizon) const;
};

struct PathStats {
  long n_paths = 0;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  double x0 = 0.5;

  double reward_mean = 0.0;
  double reward_stderr = 0.0;
  double qv_mean = 0.0;  ///< mean of int sigma^2 dt up to stopping
  double qv_stderr = 0.0;

  /// Exit time per path; +infinity for paths alive at the horizon.
  std::vector<double> exit_time_samples;
  std::map<double, double> fraction_absorbed_by;
  /// Stopped state per path: 0 or 1 when absorbed, X_T otherwise.
  std::vector<double> terminal_states;
  std::vector<double> snapshot_states;

  bool operator==(const PathStats&) const = default;
};

/// Simulates n_paths paths of the feedback diffusion a(t,x) on [0, horizon].
/// Path i draws from a generator seeded by (base_seed, i), so results do not
/// depend on the thread count; aggregation runs in path order.
PathStats simulate_paths(const DiffusionFn& diffusion, double horizon, const SimConfig& cfg);
PathStats simulate_paths(const ControlField& control, const SimConfig& cfg);
/// For the full-length model the last step carries infinite volatility, so a
/// path alive at T - dt exits at T to 1 with probability X and to 0 otherwise,
/// booking the step's expected quadratic variation X (1 - X).
PathStats simulate_paths(const VolatilityModel& model, const SimConfig& cfg);

struct QuadraticVariationReport {
  double qv_mean = 0.0;
  double second_moment_increment = 0.0;  ///< mean(X_stop^2) - x0^2
  double combined_stderr = 0.0;
  double gap = 0.0;  ///< |qv_mean - second_moment_increment|
  bool passed = false;
};

/// Ito identity E[int sigma^2 dt] = E[X_stop^2] - x0^2 within 3 combined
/// standard errors.
QuadraticVariationReport quadratic_variation_check(const PathStats& stats,
                                                   const SimConfig& cfg);

/// Sample mean and standard error of the mean.
struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanStderr mean_stderr(std::span<const double> samples);

/// sup_m |P_mc(tau <= t_m) - (absorbed_left + absorbed_right)(t_m)| over the
/// density grid.
double exit_cdf_distance(const PathStats& stats, const DensitySurface& density);

/// Kolmogorov-Smirnov distance between samples and the distribution of
/// X_{t_m} given by the density (atoms at 0 and 1 included).
double ks_distance(std::span<const double> samples, const DensitySurface& density, int m);

}  // namespace maxent
