#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace maxent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitCheckFailed = 3;
inline constexpr int kExitIo = 4;

/// Probe times of the figures, as fractions of the horizon.
inline constexpr double kProbeFractions[] = {0.5, 0.9, 0.99};

/// Default output location: $MAXENT_OUTPUT_DIR/<name>, or ./<name>.
std::filesystem::path default_output(const std::string& name);

/// Executes a validated configuration. Summaries go to `out`; returns
/// kExitOk or kExitCheckFailed. Module errors propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& out);

/// parse_config + run with every error mapped to its exit code. The resolved
/// configuration and diagnostics go to `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxent::cli
