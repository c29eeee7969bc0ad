#include "cli/config.hpp"

#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "maxent/error.hpp"
#include "maxent/surface_io.hpp"

namespace maxent::cli {

namespace {

const std::map<std::string, Command> kCommands = {
    {"solve", Command::Solve},         {"forward-p", Command::ForwardP},
    {"density", Command::Density},     {"simulate", Command::Simulate},
    {"check", Command::Check},         {"reproduce-figures", Command::ReproduceFigures}};

const std::map<std::string, Scheme> kSchemes = {{"explicit", Scheme::Explicit},
                                                {"implicit", Scheme::Implicit}};
const std::map<std::string, ModelKind> kModels = {
    {"early_termination", ModelKind::EarlyTermination}, {"full_length", ModelKind::FullLength}};
const std::map<std::string, Format> kFormats = {{"csv", Format::Csv}, {"json", Format::Json}};

template <typename E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

}  // namespace

std::string to_string(Command c) { return name_of(kCommands, c); }
std::string to_string(Scheme s) { return name_of(kSchemes, s); }
std::string to_string(ModelKind m) { return name_of(kModels, m); }
std::string to_string(Format f) { return name_of(kFormats, f); }

void validate(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg.grid_n, cfg.grid_m, cfg.horizon);
  SchemeConfig scheme;
  scheme.cap_d = cfg.cap_d;
  scheme.scheme = cfg.scheme;
  scheme.terminal_regularisation_n = cfg.regularisation_n;
  scheme.validate();
  if (cfg.n_paths < 1) throw ValidationError("n-paths must be >= 1");
  if (!(cfg.dt > 0.0 && cfg.dt <= cfg.horizon)) throw ValidationError("dt must lie in (0, T]");
  if (!(cfg.x0 > 0.0 && cfg.x0 < 1.0)) throw ValidationError("x0 must lie in (0,1)");
  if (cfg.time_stride < 1) throw ValidationError("time-stride must be >= 1");
  const bool surface_command = cfg.command == Command::Solve ||
                               cfg.command == Command::ForwardP || cfg.command == Command::Density;
  if (cfg.format && !surface_command) {
    throw ValidationError("--format applies to solve, forward-p and density only");
  }
  if (cfg.scheme == Scheme::Explicit) check_cfl(grid, cfg.cap_d);
}

RunConfig parse_config(const std::vector<std::string>& args, std::ostream* echo) {
  RunConfig cfg;
  CLI::App app{"Maximum-entropy win-probability martingale with early termination", "maxent"};
  app.set_config("--config", "", "Flat key=value file; flags given on the command line win");
  app.require_subcommand(1);

  std::string scheme_name = to_string(cfg.scheme);
  std::string model_name = to_string(cfg.model);
  std::string format_name;
  int regularisation = 0;
  long sim_steps = 0;

  app.add_option("--grid-n", cfg.grid_n, "spatial intervals N");
  app.add_option("--grid-m", cfg.grid_m, "time steps M");
  app.add_option("--horizon", cfg.horizon, "horizon T");
  app.add_option("--cap-d", cfg.cap_d, "control upper bound d (>= 1/e)");
  app.add_option("--scheme", scheme_name, "explicit | implicit")
      ->check(CLI::IsMember({"explicit", "implicit"}));
  app.add_option("--model", model_name, "early_termination | full_length")
      ->check(CLI::IsMember({"early_termination", "full_length"}));
  app.add_option("--regularisation-n", regularisation,
                 "ladder index n: terminal e_inf/n, initial p = 1/n");
  app.add_option("--n-paths", cfg.n_paths, "Monte Carlo paths");
  app.add_option("--seed", cfg.seed, "base seed of the per-path generators");
  auto* dt_opt = app.add_option("--dt", cfg.dt, "simulation step");
  auto* steps_opt = app.add_option("--sim-steps", sim_steps, "simulation steps (sets dt = T/steps)");
  dt_opt->excludes(steps_opt);
  app.add_option("--x0", cfg.x0, "initial win probability");
  app.add_option("--output", cfg.output_path, "output file (directory for reproduce-figures)");
  app.add_option("--format", format_name, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--time-stride", cfg.time_stride, "emit every n-th time level in CSV output");

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, command] : kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    subs[name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw ValidationError(std::string(e.get_name()) + ": " + e.what());
  }

  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cfg.command = kCommands.at(name);
  }
  cfg.scheme = kSchemes.at(scheme_name);
  cfg.model = kModels.at(model_name);
  if (!format_name.empty()) cfg.format = kFormats.at(format_name);
  if (app.count("--regularisation-n") > 0) cfg.regularisation_n = regularisation;
  if (steps_opt->count() > 0) {
    if (sim_steps < 1) throw ValidationError("sim-steps must be >= 1");
    cfg.dt = cfg.horizon / static_cast<double>(sim_steps);
  }

  validate(cfg);
  if (echo) *echo << "# resolved configuration\n" << to_config_text(cfg);
  return cfg;
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << "grid-n=" << cfg.grid_n << '\n'
     << "grid-m=" << cfg.grid_m << '\n'
     << "horizon=" << format_double(cfg.horizon) << '\n'
     << "cap-d=" << format_double(cfg.cap_d) << '\n'
     << "scheme=" << to_string(cfg.scheme) << '\n'
     << "model=" << to_string(cfg.model) << '\n';
  if (cfg.regularisation_n) os << "regularisation-n=" << *cfg.regularisation_n << '\n';
  os << "n-paths=" << cfg.n_paths << '\n'
     << "seed=" << cfg.seed << '\n'
     << "dt=" << format_double(cfg.dt) << '\n'
     << "x0=" << format_double(cfg.x0) << '\n';
  if (!cfg.output_path.empty()) os << "output=\"" << cfg.output_path << "\"\n";
  if (cfg.format) os << "format=" << to_string(*cfg.format) << '\n';
  os << "time-stride=" << cfg.time_stride << '\n';
  return os.str();
}

std::vector<std::string> to_args(const RunConfig& cfg) {
  std::vector<std::string> args{to_string(cfg.command)};
  std::istringstream lines(to_config_text(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    std::string value = line.substr(eq + 1);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    args.push_back("--" + line.substr(0, eq));
    args.push_back(value);
  }
  return args;
}

}  // namespace maxent::cli
