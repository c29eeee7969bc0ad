#pragma once

// Plot-ready serialisation of fields: CSV "t,x,<name>" ordered by t then x with
// 17 significant digits, and a JSON envelope {"grid":{N,M,T},"values":[[...]]}.

#include <iosfwd>
#include <string>
#include <vector>

#include "maxent/density.hpp"
#include "maxent/grid.hpp"

namespace maxent {

struct CsvOptions {
  /// Written first, each prefixed with "# ".
  std::vector<std::string> metadata_lines;
  /// Emit every time_stride-th row; the last row is always emitted.
  int time_stride = 1;
};

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_double(double v);

void write_field_csv(std::ostream& os, const Grid& grid, const Field& field,
                     const std::string& value_name, const CsvOptions& opts = {});
void write_surface_csv(std::ostream& os, const ValueSurface& surface, const CsvOptions& opts = {});
void write_pfield_csv(std::ostream& os, const PField& p, const CsvOptions& opts = {});
void write_density_csv(std::ostream& os, const DensitySurface& density,
                       const CsvOptions& opts = {});

std::string field_to_json(const Grid& grid, const Field& field);
std::string surface_to_json(const ValueSurface& surface);
/// Inverse of surface_to_json; throws ValidationError on malformed input.
ValueSurface surface_from_json(const std::string& text);

}  // namespace maxent
