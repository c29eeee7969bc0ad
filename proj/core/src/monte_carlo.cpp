#include "maxent/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "maxent/error.hpp"

namespace maxent {

namespace {

struct PathResult {
  double reward = 0.0;
  double qv = 0.0;
  double exit_time = std::numeric_limits<double>::infinity();
  double stop_state = 0.0;
  double snapshot = 0.0;
};

std::mt19937_64 path_generator(std::uint64_t seed, long path) {
  const auto index = static_cast<std::uint64_t>(path);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

PathResult run_path(const DiffusionFn& diffusion, double horizon, long steps,
                    long snapshot_step, bool terminal_split, const SimConfig& cfg, long path) {
  std::mt19937_64 rng = path_generator(cfg.base_seed, path);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;

  PathResult out;
  double x = cfg.x0;
  if (snapshot_step == 0) out.snapshot = x;
  for (long j = 0; j < steps; ++j) {
    const double t = static_cast<double>(j) * cfg.dt;
    const double dt = std::min(cfg.dt, horizon - t);
    const double a = diffusion(t, x);
    if (terminal_split && j + 1 == steps) {
      out.reward += 0.5 * (1.0 + std::log(a)) * dt;
      out.qv += x * (1.0 - x);
      x = uniform(rng) < x ? 1.0 : 0.0;
      out.exit_time = horizon;
      if (j + 1 == snapshot_step) out.snapshot = x;
      break;
    }
    const double variance = a * dt;
    const double next = x + std::sqrt(variance) * normal(rng);

    int side = 0;  // -1 left, +1 right
    if (next <= 0.0) {
      side = -1;
    } else if (next >= 1.0) {
      side = 1;
    } else if (cfg.bridge_correction) {
      const double u = uniform(rng);
      const double p_left = std::exp(-2.0 * x * next / variance);
      const double p_right = std::exp(-2.0 * (1.0 - x) * (1.0 - next) / variance);
      if (u < p_left) {
        side = -1;
      } else if (u < p_left + p_right) {
        side = 1;
      }
    }

    const double reward_rate = 0.5 * (1.0 + std::log(a));
    if (side != 0) {
      // hitting time taken at the step midpoint
      out.reward += 0.5 * reward_rate * dt;
      out.qv += 0.5 * variance;
      out.exit_time = t + dt;
      x = side < 0 ? 0.0 : 1.0;
      if (j < snapshot_step) out.snapshot = x;
      break;
    }
    out.reward += reward_rate * dt;
    out.qv += variance;
    x = next;
    if (j + 1 == snapshot_step) out.snapshot = x;
  }
  out.stop_state = x;
  return out;
}

}  // namespace

void SimConfig::validate(double horizon) const {
  if (n_paths < 1) throw ValidationError("n_paths must be >= 1");
  if (!(dt > 0.0 && dt <= horizon)) throw ValidationError("dt must satisfy 0 < dt <= T");
  if (!(x0 > 0.0 && x0 < 1.0)) throw ValidationError("x0 must lie in (0,1)");
  if (snapshot_time && !(*snapshot_time >= 0.0 && *snapshot_time <= horizon)) {
    throw ValidationError("snapshot_time must lie in [0,T]");
  }
  if (threads < 0) throw ValidationError("threads must be >= 0");
}

MeanStderr mean_stderr(std::span<const double> samples) {
  if (samples.empty()) return {};
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double mean = sum / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double variance = samples.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(variance / n)};
}

namespace {

PathStats simulate(const DiffusionFn& diffusion, double horizon, bool terminal_split,
                   const SimConfig& cfg) {
  cfg.validate(horizon);
  const long steps = static_cast<long>(std::ceil(horizon / cfg.dt - 1e-9));
  const long snapshot_step =
      cfg.snapshot_time ? std::lround(*cfg.snapshot_time / cfg.dt) : -1;

  std::vector<PathResult> results(static_cast<std::size_t>(cfg.n_paths));
  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<long>(workers, cfg.n_paths));

  auto run_block = [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      results[static_cast<std::size_t>(i)] =
          run_path(diffusion, horizon, steps, snapshot_step, terminal_split, cfg, i);
    }
  };
  if (workers <= 1) {
    run_block(0, cfg.n_paths);
  } else {
    std::vector<std::jthread> pool;
    const long block = (cfg.n_paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const long begin = static_cast<long>(w) * block;
      const long end = std::min(cfg.n_paths, begin + block);
      if (begin < end) pool.emplace_back(run_block, begin, end);
    }
  }

  PathStats stats;
  stats.n_paths = cfg.n_paths;
  stats.seed = cfg.base_seed;
  stats.horizon = horizon;
  stats.x0 = cfg.x0;
  std::vector<double> rewards(results.size());
  std::vector<double> qvs(results.size());
  stats.exit_time_samples.resize(results.size());
  stats.terminal_states.resize(results.size());
  if (cfg.snapshot_time) stats.snapshot_states.resize(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    rewards[i] = results[i].reward;
    qvs[i] = results[i].qv;
    stats.exit_time_samples[i] = results[i].exit_time;
    stats.terminal_states[i] = results[i].stop_state;
    if (cfg.snapshot_time) stats.snapshot_states[i] = results[i].snapshot;
  }
  const MeanStderr reward = mean_stderr(rewards);
  const MeanStderr qv = mean_stderr(qvs);
  stats.reward_mean = reward.mean;
  stats.reward_stderr = reward.stderr_;
  stats.qv_mean = qv.mean;
  stats.qv_stderr = qv.stderr_;

  std::vector<double> sorted = stats.exit_time_samples;
  std::sort(sorted.begin(), sorted.end());
  for (double probe : cfg.probe_times) {
    const double edge = probe + 1e-9 * cfg.dt;
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), edge) - sorted.begin();
    stats.fraction_absorbed_by[probe] =
        static_cast<double>(count) / static_cast<double>(cfg.n_paths);
  }
  return stats;
}

}  // namespace

PathStats simulate_paths(const DiffusionFn& diffusion, double horizon, const SimConfig& cfg) {
  return simulate(diffusion, horizon, false, cfg);
}

PathStats simulate_paths(const ControlField& control, const SimConfig& cfg) {
  const DiffusionFn a = [&control](double t, double x) { return control.diffusion_at(t, x); };
  return simulate(a, control.grid().T, false, cfg);
}

PathStats simulate_paths(const VolatilityModel& model, const SimConfig& cfg) {
  const DiffusionFn a = [&model](double t, double x) { return model.diffusion(t, x); };
  return simulate(a, model.horizon(), model.kind() == ModelKind::FullLength, cfg);
}

QuadraticVariationReport quadratic_variation_check(const PathStats& stats,
                                                   const SimConfig& cfg) {
  if (stats.terminal_states.empty()) {
    throw ValidationError("quadratic_variation_check: no terminal states recorded");
  }
  std::vector<double> increments(stats.terminal_states.size());
  for (std::size_t i = 0; i < increments.size(); ++i) {
    const double x = stats.terminal_states[i];
    increments[i] = x * x - cfg.x0 * cfg.x0;
  }
  const MeanStderr moment = mean_stderr(increments);
  QuadraticVariationReport report;
  report.qv_mean = stats.qv_mean;
  report.second_moment_increment = moment.mean;
  report.combined_stderr = std::hypot(stats.qv_stderr, moment.stderr_);
  report.gap = std::abs(report.qv_mean - report.second_moment_increment);
  report.passed = report.gap <= 3.0 * report.combined_stderr;
  return report;
}

double exit_cdf_distance(const PathStats& stats, const DensitySurface& density) {
  const Grid& grid = density.grid();
  std::vector<double> sorted = stats.exit_time_samples;
  std::sort(sorted.begin(), sorted.end());
  const double total = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (int m = 0; m <= grid.M; ++m) {
    const double edge = grid.t(m) + 1e-9 * grid.k;
    const double empirical =
        static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), edge) -
                            sorted.begin()) /
        total;
    const double absorbed = density.absorbed_left()[m] + density.absorbed_right()[m];
    worst = std::max(worst, std::abs(empirical - absorbed));
  }
  return worst;
}

double ks_distance(std::span<const double> samples, const DensitySurface& density, int m) {
  if (samples.empty()) throw ValidationError("ks_distance: no samples");
  const Grid& grid = density.grid();
  const std::vector<double> cdf = density.cdf(m);
  const double right_atom = density.absorbed_right()[m];
  // model distribution function, right-continuous
  auto model = [&](double x) {
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double pos = x * grid.N;
    const int n = std::min(static_cast<int>(pos), grid.N - 1);
    const double f = pos - n;
    return (1.0 - f) * cdf[n] + f * cdf[n + 1];
  };
  auto model_left = [&](double x) {
    if (x <= 0.0) return 0.0;
    if (x == 1.0) return cdf[grid.N] - right_atom;
    return model(x);
  };

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double total = static_cast<double>(sorted.size());
  double worst = 0.0;
  auto compare_at = [&](double x) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const auto upto = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    worst = std::max(worst, std::abs(static_cast<double>(upto) / total - model(x)));
    worst = std::max(worst, std::abs(static_cast<double>(below) / total - model_left(x)));
  };
  for (double s : sorted) compare_at(s);
  for (int n = 0; n <= grid.N; ++n) compare_at(grid.x(n));
  return worst;
}

}  // namespace maxent
