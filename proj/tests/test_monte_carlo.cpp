#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "maxent/error.hpp"
#include "maxent/monte_carlo.hpp"

namespace maxent {
namespace {

constexpr double kPi = std::numbers::pi;

// E[min(tau, T)] for Brownian motion on (0,1) from x0.
double brownian_expected_stop(double x0, double T) {
  double s = 0.0;
  for (int j = 1; j < 400; j += 2) {
    const double lambda = 0.5 * j * j * kPi * kPi;
    s += 4.0 / (j * kPi) * std::sin(j * kPi * x0) * (1.0 - std::exp(-lambda * T)) / lambda;
  }
  return s;
}

DiffusionFn constant(double a) {
  return [a](double, double) { return a; };
}

SimConfig small_config(long paths) {
  SimConfig cfg;
  cfg.n_paths = paths;
  cfg.dt = 1e-3;
  cfg.base_seed = 77;
  cfg.probe_times = {0.1, 0.5, 0.9};
  return cfg;
}

TEST(MonteCarlo, ZeroRewardControl) {
  const PathStats s = simulate_paths(constant(1.0 / std::numbers::e), 1.0, small_config(2000));
  EXPECT_NEAR(s.reward_mean, 0.0, 1e-15);
  EXPECT_NEAR(s.reward_stderr, 0.0, 1e-15);
}

TEST(MonteCarlo, DeterministicAcrossRunsAndThreadCounts) {
  SimConfig cfg = small_config(3000);
  cfg.snapshot_time = 0.5;
  cfg.threads = 1;
  const PathStats a = simulate_paths(constant(1.0), 1.0, cfg);
  const PathStats b = simulate_paths(constant(1.0), 1.0, cfg);
  cfg.threads = 3;
  const PathStats c = simulate_paths(constant(1.0), 1.0, cfg);
  EXPECT_TRUE(a == b);
  EXPECT_TRUE(a == c);
  cfg.base_seed = 78;
  EXPECT_FALSE(a == simulate_paths(constant(1.0), 1.0, cfg));
}

TEST(MonteCarlo, BrownianRewardMatchesSeries) {
  const PathStats s = simulate_paths(constant(1.0), 1.0, small_config(40000));
  const double exact = 0.5 * brownian_expected_stop(0.5, 1.0);
  EXPECT_NEAR(s.reward_mean, exact, 4.0 * s.reward_stderr) << exact;
  EXPECT_LE(s.reward_mean, stationary_entropy(0.5) + 3.0 * s.reward_stderr);
}

TEST(MonteCarlo, MartingaleAndItoIdentity) {
  const SimConfig cfg = small_config(20000);
  const PathStats s = simulate_paths(constant(2.0), 1.0, cfg);
  const MeanStderr stop = mean_stderr(s.terminal_states);
  EXPECT_NEAR(stop.mean, 0.5, 3.0 * stop.stderr_);
  const QuadraticVariationReport qv = quadratic_variation_check(s, cfg);
  EXPECT_TRUE(qv.passed) << qv.gap << " vs " << qv.combined_stderr;
}

TEST(MonteCarlo, FullLengthQuadraticVariationIsQuarter) {
  const SimConfig cfg = small_config(20000);
  const PathStats s = simulate_paths(VolatilityModel::full_length(1.0), cfg);
  const QuadraticVariationReport qv = quadratic_variation_check(s, cfg);
  EXPECT_TRUE(qv.passed) << qv.gap << " vs " << qv.combined_stderr;
  EXPECT_NEAR(s.qv_mean, 0.25, 3.0 * s.qv_stderr);
  for (double x : s.terminal_states) EXPECT_TRUE(x == 0.0 || x == 1.0);
  EXPECT_EQ(s.fraction_absorbed_by.at(0.9), 0.0);
}

TEST(MonteCarlo, TinyHorizonHasNoQuadraticVariation) {
  SimConfig cfg = small_config(500);
  cfg.dt = 1e-6;
  cfg.probe_times.clear();
  const PathStats s = simulate_paths(constant(1.0), 1e-6, cfg);
  EXPECT_NEAR(s.qv_mean, 1e-6, 1e-12);
}

TEST(MonteCarlo, AbsorbedFractionsAreMonotone) {
  const PathStats s = simulate_paths(constant(1.0), 1.0, small_config(5000));
  double prev = 0.0;
  for (const auto& [t, f] : s.fraction_absorbed_by) {
    EXPECT_GE(f, prev);
    EXPECT_LE(f, 1.0);
    prev = f;
  }
  ASSERT_EQ(s.exit_time_samples.size(), 5000u);
}

TEST(MonteCarlo, ExitTimesAndSnapshotsMatchDensity) {
  const Grid g = make_grid(200, 400, 1.0);
  auto control = std::make_shared<const ControlField>(ControlField::constant(g, 1.0));
  const auto model = VolatilityModel::early_termination(control);
  const DensitySurface q = solve_forward_density(model, g, 0.5);
  SimConfig cfg = small_config(20000);
  cfg.snapshot_time = 0.5;
  const PathStats s = simulate_paths(model, cfg);
  EXPECT_LE(exit_cdf_distance(s, q), 0.02);
  EXPECT_LE(ks_distance(s.snapshot_states, q, g.M / 2), 0.02);
}

TEST(MonteCarlo, ConfigValidation) {
  SimConfig cfg = small_config(0);
  EXPECT_THROW(simulate_paths(constant(1.0), 1.0, cfg), ValidationError);
  cfg = small_config(10);
  cfg.dt = 2.0;
  EXPECT_THROW(simulate_paths(constant(1.0), 1.0, cfg), ValidationError);
  cfg = small_config(10);
  cfg.x0 = 1.0;
  EXPECT_THROW(simulate_paths(constant(1.0), 1.0, cfg), ValidationError);
}

TEST(MeanStderr, Basic) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MeanStderr r = mean_stderr(v);
  EXPECT_DOUBLE_EQ(r.mean, 2.5);
  EXPECT_NEAR(r.stderr_, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

}  // namespace
}  // namespace maxent
