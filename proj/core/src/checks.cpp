#include "maxent/checks.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "maxent/error.hpp"

namespace maxent {

namespace {

struct Worst {
  double value = -std::numeric_limits<double>::infinity();
  int m = -1;
  int n = -1;

  void update(double v, int mm, int nn) {
    if (v > value) {
      value = v;
      m = mm;
      n = nn;
    }
  }
};

CheckEntry make_entry(std::string name, const Worst& worst, double tolerance) {
  CheckEntry e;
  e.name = std::move(name);
  e.worst_violation = std::isfinite(worst.value) ? worst.value : 0.0;
  e.tolerance = tolerance;
  e.passed = e.worst_violation <= tolerance;
  e.m = worst.m;
  e.n = worst.n;
  return e;
}

std::string prefixed(const std::string& label, const char* name) {
  return label.empty() ? std::string(name) : label + "/" + name;
}

}  // namespace

void CheckReport::append(const CheckReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

int CheckReport::passed_count() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [](const CheckEntry& e) { return e.passed; }));
}

int CheckReport::failed_count() const {
  return static_cast<int>(checks.size()) - passed_count();
}

const CheckEntry* CheckReport::find(const std::string& name) const {
  for (const auto& e : checks) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string CheckReport::to_json() const {
  nlohmann::ordered_json out;
  out["summary"] = {{"total", checks.size()},
                    {"passed", passed_count()},
                    {"failed", failed_count()}};
  auto list = nlohmann::ordered_json::array();
  for (const auto& e : checks) {
    list.push_back({{"name", e.name},
                    {"status", e.passed ? "pass" : "fail"},
                    {"worst_violation", e.worst_violation},
                    {"tolerance", e.tolerance},
                    {"m", e.m},
                    {"n", e.n},
                    {"detail", e.detail}});
  }
  out["checks"] = std::move(list);
  return out.dump(2);
}

std::string CheckReport::to_table() const {
  std::size_t width = 5;
  for (const auto& e : checks) width = std::max(width, e.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "check"
     << "  status  worst_violation  tolerance    (m, n)\n";
  for (const auto& e : checks) {
    os << std::left << std::setw(static_cast<int>(width)) << e.name << "  "
       << std::setw(6) << (e.passed ? "pass" : "FAIL") << "  " << std::scientific
       << std::setprecision(3) << std::setw(15) << std::right << e.worst_violation << "  "
       << std::setw(9) << e.tolerance << "    (" << e.m << ", " << e.n << ")";
    if (!e.detail.empty()) os << "  " << e.detail;
    os << std::defaultfloat << '\n';
  }
  os << passed_count() << "/" << checks.size() << " checks passed\n";
  return os.str();
}

CheckReport check_theorem1(const ValueSurface& surface, const std::string& label) {
  const Grid& grid = surface.grid();
  const std::vector<double> e_inf = stationary_entropy_row(grid);

  Worst bounds, time, symmetry, concavity;
  for (int m = 0; m <= grid.M; ++m) {
    const auto row = surface.row(m);
    for (int n = 0; n <= grid.N; ++n) {
      bounds.update(std::max(-row[n], row[n] - e_inf[n]), m, n);
      if (m > 0) time.update(surface(m, n) - surface(m - 1, n), m, n);
      symmetry.update(std::abs(row[n] - row[grid.N - n]), m, n);
      if (n > 0 && n < grid.N) concavity.update(second_difference(row, n, grid.h), m, n);
    }
  }

  CheckReport report;
  report.add(make_entry(prefixed(label, "bounds"), bounds, kBoundsTolerance));
  report.add(make_entry(prefixed(label, "time_monotone"), time, kTimeMonotoneTolerance));
  report.add(make_entry(prefixed(label, "symmetry"), symmetry, kSymmetryTolerance));
  report.add(make_entry(prefixed(label, "concavity"), concavity, kConcavityTolerance));
  return report;
}

double cross_solver_gap(const ValueSurface& hjb, const ValueSurface& represented) {
  if (!(hjb.grid() == represented.grid())) {
    throw ValidationError("cross_solver_gap: surfaces live on different grids");
  }
  double gap = 0.0;
  const auto a = hjb.values().data();
  const auto b = represented.values().data();
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

double decay_rate_constant(int alpha) {
  if (alpha < 2 || alpha % 2 != 0) {
    throw ValidationError("decay rate: alpha must be an even integer >= 2, got " +
                          std::to_string(alpha));
  }
  const double a = alpha;
  return (a - 1.0) / (std::numbers::pi * a * a);
}

double decay_bound(double x, double time_to_go, int alpha) {
  return x * (1.0 - x) * std::exp(-decay_rate_constant(alpha) * time_to_go);
}

double distance_to_stationary(const ValueSurface& surface) {
  const Grid& grid = surface.grid();
  double worst = 0.0;
  for (int n = 0; n <= grid.N; ++n) {
    worst = std::max(worst, std::abs(surface(0, n) - stationary_entropy(grid.x(n))));
  }
  return worst;
}

CheckReport decay_rate_check(const SurfaceFactory& solver, std::span<const double> horizons,
                             int alpha) {
  decay_rate_constant(alpha);
  CheckReport report;
  std::vector<double> distances;
  for (double horizon : horizons) {
    const ValueSurface surface = solver(horizon);
    const Grid& grid = surface.grid();
    const double slack = 10.0 * (grid.k + grid.h * grid.h);
    Worst worst;
    for (int n = 0; n <= grid.N; ++n) {
      const double x = grid.x(n);
      const double gap = std::abs(surface(0, n) - stationary_entropy(x));
      worst.update(gap - decay_bound(x, grid.T, alpha), 0, n);
    }
    std::ostringstream name;
    name << "decay/T=" << horizon;
    CheckEntry entry = make_entry(name.str(), worst, slack);
    distances.push_back(distance_to_stationary(surface));
    std::ostringstream detail;
    detail << "sup|e-e_inf|=" << std::scientific << std::setprecision(3) << distances.back();
    entry.detail = detail.str();
    report.add(std::move(entry));
  }
  Worst rise;
  for (std::size_t i = 1; i < distances.size(); ++i) {
    rise.update(distances[i] - distances[i - 1], 0, static_cast<int>(i));
  }
  if (distances.size() < 2) rise.update(0.0, -1, -1);
  CheckEntry mono = make_entry("decay/monotone_in_T", rise, kDistanceRoundoff);
  mono.m = -1;
  report.add(std::move(mono));
  return report;
}

}  // namespace maxent
