#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxent/density.hpp"
#include "maxent/hjb.hpp"

namespace maxent::cli {

enum class Command { Solve, ForwardP, Density, Simulate, Check, ReproduceFigures };
enum class Format { Csv, Json };

struct RunConfig {
  Command command = Command::Solve;
  int grid_n = 1000;
  int grid_m = 1000;
  double horizon = 1.0;
  double cap_d = 1e6;
  Scheme scheme = Scheme::Implicit;
  ModelKind model = ModelKind::EarlyTermination;
  std::optional<int> regularisation_n;
  long n_paths = 100000;
  std::uint64_t seed = 20240601;
  double dt = 1e-3;
  double x0 = 0.5;
  std::string output_path;
  std::optional<Format> format;
  int time_stride = 1;

  bool operator==(const RunConfig&) const = default;
};

/// Thrown for --help; the message is the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(Command c);
std::string to_string(Scheme s);
std::string to_string(ModelKind m);
std::string to_string(Format f);

/// argv without the program name: the subcommand followed by flags. Values
/// from --config FILE (flat key=value lines) sit between defaults and flags.
/// The resolved configuration is echoed to `echo` if non-null. Throws
/// ValidationError (including CflError) on bad input.
RunConfig parse_config(const std::vector<std::string>& args, std::ostream* echo = nullptr);

/// Flat key=value text accepted by --config (the command is not included).
std::string to_config_text(const RunConfig& cfg);

/// Argument vector that parse_config maps back to cfg.
std::vector<std::string> to_args(const RunConfig& cfg);

/// Range and consistency checks, including the explicit scheme's CFL bound.
void validate(const RunConfig& cfg);

}  // namespace maxent::cli
