#include "cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "maxent/checks.hpp"
#include "maxent/error.hpp"
#include "maxent/log_diffusion.hpp"
#include "maxent/monte_carlo.hpp"
#include "maxent/surface_io.hpp"
#include "maxent/version.hpp"

namespace maxent::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> metadata_lines(const RunConfig& cfg) {
  std::vector<std::string> lines{std::string("maxent ") + kVersion,
                                 "command=" + to_string(cfg.command)};
  std::istringstream text(to_config_text(cfg));
  for (std::string line; std::getline(text, line);) lines.push_back(line);
  return lines;
}

Json metadata_json(const RunConfig& cfg) {
  Json config = Json::object();
  std::istringstream text(to_config_text(cfg));
  for (std::string line; std::getline(text, line);) {
    const auto eq = line.find('=');
    std::string value = line.substr(eq + 1);
    if (value.size() >= 2 && value.front() == '"') value = value.substr(1, value.size() - 2);
    config[line.substr(0, eq)] = value;
  }
  return Json{{"artifact", "maxent"},
              {"version", kVersion},
              {"command", to_string(cfg.command)},
              {"config", config}};
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

void write_json(const fs::path& path, const Json& doc) {
  auto os = open_output(path);
  os << doc.dump(2) << '\n';
  finish(os, path);
}

struct CsvRows {
  std::string header;
  std::vector<std::vector<double>> rows;
};

void write_rows_csv(const fs::path& path, const RunConfig& cfg, const CsvRows& table) {
  auto os = open_output(path);
  for (const auto& line : metadata_lines(cfg)) os << "# " << line << '\n';
  os << table.header << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
  finish(os, path);
}

Format format_or(const RunConfig& cfg, Format fallback) { return cfg.format.value_or(fallback); }

fs::path output_or(const RunConfig& cfg, const std::string& name) {
  return cfg.output_path.empty() ? default_output(name) : fs::path(cfg.output_path);
}

SchemeConfig scheme_config(const RunConfig& cfg) {
  SchemeConfig s;
  s.cap_d = cfg.cap_d;
  s.scheme = cfg.scheme;
  s.terminal_regularisation_n = cfg.regularisation_n;
  return s;
}

Grid grid_of(const RunConfig& cfg) { return make_grid(cfg.grid_n, cfg.grid_m, cfg.horizon); }

/// Nearest time level to each probe fraction of the horizon.
std::vector<int> probe_levels(const Grid& grid) {
  std::vector<int> levels;
  for (double f : kProbeFractions) {
    levels.push_back(static_cast<int>(std::lround(f * grid.M)));
  }
  return levels;
}

double interpolate_row(std::span<const double> row, const Grid& grid, double x) {
  const double s = x * grid.N;
  const int n = std::clamp(static_cast<int>(std::floor(s)), 0, grid.N - 1);
  const double w = s - n;
  return (1.0 - w) * row[n] + w * row[n + 1];
}

double median(std::vector<int> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

VolatilityModel build_model(const RunConfig& cfg, const Grid& grid,
                            std::optional<ValueSurface>* surface = nullptr) {
  if (cfg.model == ModelKind::FullLength) return VolatilityModel::full_length(grid.T);
  const SchemeConfig scheme = scheme_config(cfg);
  ValueSurface e = solve_hjb(grid, scheme);
  auto control = std::make_shared<const ControlField>(optimal_control_field(e, scheme));
  if (surface) surface->emplace(std::move(e));
  return VolatilityModel::early_termination(std::move(control));
}

Json density_summary(const DensitySurface& q) {
  const Grid& grid = q.grid();
  Json times = Json::array(), mass = Json::array();
  for (int m = 0; m <= grid.M; ++m) {
    times.push_back(grid.t(m));
    mass.push_back(q.interior_mass(m));
  }
  Json probes = Json::array();
  for (int m : probe_levels(grid)) {
    const double interior = q.interior_mass(m);
    probes.push_back(Json{{"t", grid.t(m)},
                          {"interior_mass", interior},
                          {"absorbed_left", q.absorbed_left()[m]},
                          {"absorbed_right", q.absorbed_right()[m]},
                          {"match_over", q.absorbed_left()[m] + q.absorbed_right()[m]}});
  }
  return Json{{"probes", probes},
              {"times", times},
              {"interior_mass", mass},
              {"absorbed_left", q.absorbed_left()},
              {"absorbed_right", q.absorbed_right()}};
}

void print_probes(std::ostream& out, const std::string& label, const DensitySurface& q) {
  for (int m : probe_levels(q.grid())) {
    const double over = q.absorbed_left()[m] + q.absorbed_right()[m];
    out << label << " t=" << q.grid().t(m) << " interior_mass=" << q.interior_mass(m)
        << " match_over=" << over << '\n';
  }
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = grid_of(cfg);
  std::vector<int> iterations;
  const ValueSurface e = solve_hjb(grid, scheme_config(cfg), &iterations);
  const Format format = format_or(cfg, Format::Csv);
  const fs::path path = output_or(cfg, format == Format::Csv ? "entropy.csv" : "entropy.json");
  if (format == Format::Csv) {
    auto os = open_output(path);
    write_surface_csv(os, e, CsvOptions{metadata_lines(cfg), cfg.time_stride});
    finish(os, path);
  } else {
    Json doc{{"meta", metadata_json(cfg)}};
    doc.update(Json::parse(surface_to_json(e)));
    write_json(path, doc);
  }
  out << "e(0," << format_double(cfg.x0) << ") = " << interpolate_row(e.row(0), grid, cfg.x0) << '\n';
  if (cfg.scheme == Scheme::Implicit) {
    out << "median policy iterations per step: " << median(iterations) << '\n';
  }
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int run_forward_p(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = grid_of(cfg);
  LadderConfig ladder;
  ladder.regularisation_n = cfg.regularisation_n.value_or(1);
  const PField p = solve_log_diffusion(grid, ladder);
  const Format format = format_or(cfg, Format::Csv);
  const fs::path path = output_or(cfg, format == Format::Csv ? "p.csv" : "p.json");
  if (format == Format::Csv) {
    auto os = open_output(path);
    write_pfield_csv(os, p, CsvOptions{metadata_lines(cfg), cfg.time_stride});
    finish(os, path);
  } else {
    Json doc{{"meta", metadata_json(cfg)}};
    doc.update(Json::parse(field_to_json(grid, p.values())));
    write_json(path, doc);
  }
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int run_density(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = grid_of(cfg);
  const DensitySurface q = solve_forward_density(build_model(cfg, grid), grid, cfg.x0);
  Json summary{{"meta", metadata_json(cfg)}, {"model", to_string(cfg.model)}, {"x0", cfg.x0}};
  summary.update(density_summary(q));

  const Format format = format_or(cfg, Format::Csv);
  if (format == Format::Csv) {
    const fs::path path = output_or(cfg, "density.csv");
    auto os = open_output(path);
    write_density_csv(os, q, CsvOptions{metadata_lines(cfg), cfg.time_stride});
    finish(os, path);
    fs::path sidecar = path;
    sidecar.replace_extension(".json");
    write_json(sidecar, summary);
    out << "wrote " << path.string() << " and " << sidecar.string() << '\n';
  } else {
    const fs::path path = output_or(cfg, "density.json");
    write_json(path, summary);
    out << "wrote " << path.string() << '\n';
  }
  print_probes(out, to_string(cfg.model), q);
  return kExitOk;
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = grid_of(cfg);
  std::optional<ValueSurface> e;
  const VolatilityModel model = build_model(cfg, grid, &e);

  SimConfig sim;
  sim.n_paths = cfg.n_paths;
  sim.dt = cfg.dt;
  sim.base_seed = cfg.seed;
  sim.x0 = cfg.x0;
  for (double f : kProbeFractions) sim.probe_times.push_back(f * grid.T);
  const PathStats stats = simulate_paths(model, sim);
  const QuadraticVariationReport qv = quadratic_variation_check(stats, sim);

  Json absorbed = Json::object();
  for (const auto& [t, fraction] : stats.fraction_absorbed_by) {
    std::ostringstream key;
    key << t;
    absorbed[key.str()] = fraction;
  }
  Json doc{{"meta", metadata_json(cfg)},
           {"model", to_string(cfg.model)},
           {"n_paths", stats.n_paths},
           {"seed", stats.seed},
           {"x0", stats.x0},
           {"reward_mean", stats.reward_mean},
           {"reward_stderr", stats.reward_stderr},
           {"qv_mean", stats.qv_mean},
           {"qv_stderr", stats.qv_stderr},
           {"ito_check",
            Json{{"second_moment_increment", qv.second_moment_increment},
                 {"gap", qv.gap},
                 {"combined_stderr", qv.combined_stderr},
                 {"passed", qv.passed}}},
           {"absorbed_by", absorbed}};
  if (e) doc["pde_value"] = interpolate_row(e->row(0), grid, cfg.x0);

  const fs::path path = output_or(cfg, "simulate.json");
  write_json(path, doc);
  out << "reward = " << stats.reward_mean << " +/- " << stats.reward_stderr << '\n';
  if (e) out << "pde value = " << doc["pde_value"].get<double>() << '\n';
  for (const auto& [t, fraction] : stats.fraction_absorbed_by) {
    out << "absorbed by t=" << t << ": " << fraction << '\n';
  }
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

CheckEntry bound_entry(std::string name, double violation, double tolerance, std::string detail = {}) {
  CheckEntry entry;
  entry.name = std::move(name);
  entry.worst_violation = violation;
  entry.tolerance = tolerance;
  entry.passed = violation <= tolerance;
  entry.detail = std::move(detail);
  return entry;
}

CheckReport check_suite(const RunConfig& cfg) {
  const Grid grid = grid_of(cfg);
  SchemeConfig plain = scheme_config(cfg);
  plain.terminal_regularisation_n.reset();

  CheckReport report = check_theorem1(solve_hjb(grid, plain), "invariants");

  const double cross_tol = 10.0 * (grid.k + grid.h * grid.h);
  for (int n : {1, 2, 4}) {
    SchemeConfig regularised = plain;
    regularised.terminal_regularisation_n = n;
    LadderConfig ladder;
    ladder.regularisation_n = n;
    const double gap = cross_solver_gap(solve_hjb(grid, regularised),
                                        entropy_from_p(solve_log_diffusion(grid, ladder)));
    report.add(bound_entry("cross_solver/n=" + std::to_string(n), gap, cross_tol,
                           "sup |e_hjb - e_from_p|"));
  }

  const std::vector<int> ns = default_ladder();
  const std::vector<PField> members = solve_ladder(grid, ns);
  for (std::size_t i = 0; i + 1 < members.size(); ++i) {
    const std::string step = std::to_string(ns[i]) + "->" + std::to_string(ns[i + 1]);
    const double dp = max_increase(members[i].values(), members[i + 1].values());
    const double de = max_increase(entropy_from_p(members[i]).values(),
                                   entropy_from_p(members[i + 1]).values());
    report.add(bound_entry("ladder/p/" + step, std::max(dp, 0.0), 1e-9));
    report.add(bound_entry("ladder/e/" + step, std::max(de, 0.0), 1e-9));
  }

  const double k = grid.k;
  const SurfaceFactory factory = [&](double T) {
    const int M = std::max(1, static_cast<int>(std::lround(T / k)));
    return solve_hjb(make_grid(grid.N, M, T), plain);
  };
  const double horizons[] = {2.0, 5.0, 10.0, 20.0};
  report.append(decay_rate_check(factory, horizons, 2));
  return report;
}

int run_check(const RunConfig& cfg, std::ostream& out) {
  const CheckReport report = check_suite(cfg);
  Json doc{{"meta", metadata_json(cfg)}};
  doc.update(Json::parse(report.to_json()));
  const fs::path path = output_or(cfg, "check.json");
  write_json(path, doc);
  out << report.to_table();
  out << report.passed_count() << " passed, " << report.failed_count() << " failed\n";
  out << "wrote " << path.string() << '\n';
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

CsvRows density_rows(const DensitySurface& q) {
  CsvRows table{"t,x,q", {}};
  const Grid& grid = q.grid();
  for (int m : probe_levels(grid)) {
    for (int n = 0; n <= grid.N; ++n) table.rows.push_back({grid.t(m), grid.x(n), q.row(m)[n]});
  }
  return table;
}

int run_figures(const RunConfig& cfg, std::ostream& out) {
  const Grid grid = grid_of(cfg);
  const fs::path dir = cfg.output_path.empty() ? default_output("figures") : fs::path(cfg.output_path);

  const SchemeConfig scheme = scheme_config(cfg);
  const ValueSurface e = solve_hjb(grid, scheme);
  auto control = std::make_shared<const ControlField>(optimal_control_field(e, scheme));
  const DensitySurface early =
      solve_forward_density(VolatilityModel::early_termination(control), grid, cfg.x0);
  const DensitySurface full =
      solve_forward_density(VolatilityModel::full_length(grid.T), grid, cfg.x0);

  write_rows_csv(dir / "fig1_early_termination.csv", cfg, density_rows(early));
  write_rows_csv(dir / "fig1_full_length.csv", cfg, density_rows(full));
  Json summary{{"meta", metadata_json(cfg)},
               {"early_termination", density_summary(early)["probes"]},
               {"full_length", density_summary(full)["probes"]}};
  write_json(dir / "fig1_summary.json", summary);

  {
    const fs::path path = dir / "fig2_entropy.csv";
    auto os = open_output(path);
    write_surface_csv(os, e, CsvOptions{metadata_lines(cfg), cfg.time_stride});
    finish(os, path);
  }

  // Boundary columns carry a* = 1, i.e. e_xx = -1.
  CsvRows fig3{"t,x,e_xx,sigma_star", {}};
  for (int m : probe_levels(grid)) {
    const auto row = e.row(m);
    const auto sigma = control->sigma_star().row(m);
    for (int n = 0; n <= grid.N; ++n) {
      const bool edge = n == 0 || n == grid.N;
      const double exx = edge ? -1.0 : second_difference(row, n, grid.h);
      fig3.rows.push_back({grid.t(m), grid.x(n), exx, sigma[n]});
    }
  }
  write_rows_csv(dir / "fig3_rows.csv", cfg, fig3);

  print_probes(out, "early_termination", early);
  print_probes(out, "full_length", full);
  out << "wrote figure data to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

fs::path default_output(const std::string& name) {
  const char* dir = std::getenv("MAXENT_OUTPUT_DIR");
  return (dir && *dir ? fs::path(dir) : fs::path(".")) / name;
}

int run(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::Solve: return run_solve(cfg, out);
    case Command::ForwardP: return run_forward_p(cfg, out);
    case Command::Density: return run_density(cfg, out);
    case Command::Simulate: return run_simulate(cfg, out);
    case Command::Check: return run_check(cfg, out);
    case Command::ReproduceFigures: return run_figures(cfg, out);
  }
  throw ValidationError("unknown command");
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_config(args, &err), out);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const CflError& e) {
    err << "error: CFL condition violated: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace maxent::cli
