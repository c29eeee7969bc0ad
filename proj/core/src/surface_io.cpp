#include "maxent/surface_io.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "maxent/error.hpp"

namespace maxent {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const Grid& grid, const Field& field,
                     const std::string& value_name, const CsvOptions& opts) {
  if (opts.time_stride < 1) throw ValidationError("csv: time_stride must be >= 1");
  for (const auto& line : opts.metadata_lines) os << "# " << line << '\n';
  os << "t,x," << value_name << '\n';
  for (int m = 0; m <= grid.M; ++m) {
    if (m % opts.time_stride != 0 && m != grid.M) continue;
    const std::string t = format_double(grid.t(m));
    const auto row = field.row(m);
    for (int n = 0; n <= grid.N; ++n) {
      os << t << ',' << format_double(grid.x(n)) << ',' << format_double(row[n]) << '\n';
    }
  }
  if (!os) throw IoError("csv: write failed");
}

void write_surface_csv(std::ostream& os, const ValueSurface& surface, const CsvOptions& opts) {
  write_field_csv(os, surface.grid(), surface.values(), "value", opts);
}

void write_pfield_csv(std::ostream& os, const PField& p, const CsvOptions& opts) {
  write_field_csv(os, p.grid(), p.values(), "p", opts);
}

void write_density_csv(std::ostream& os, const DensitySurface& density, const CsvOptions& opts) {
  write_field_csv(os, density.grid(), density.values(), "q", opts);
}

std::string field_to_json(const Grid& grid, const Field& field) {
  nlohmann::ordered_json out;
  out["grid"] = {{"N", grid.N}, {"M", grid.M}, {"T", grid.T}};
  auto rows = nlohmann::ordered_json::array();
  for (int m = 0; m <= grid.M; ++m) {
    const auto row = field.row(m);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  out["values"] = std::move(rows);
  return out.dump();
}

std::string surface_to_json(const ValueSurface& surface) {
  return field_to_json(surface.grid(), surface.values());
}

ValueSurface surface_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto& g = doc.at("grid");
    const Grid grid = make_grid(g.at("N").get<int>(), g.at("M").get<int>(), g.at("T").get<double>());
    const auto& rows = doc.at("values");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(grid.M) + 1) {
      throw ValidationError("surface json: expected M+1 rows");
    }
    Field values(grid.M + 1, grid.N + 1);
    for (int m = 0; m <= grid.M; ++m) {
      const auto& row = rows[static_cast<std::size_t>(m)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(grid.N) + 1) {
        throw ValidationError("surface json: row " + std::to_string(m) + " has wrong length");
      }
      for (int n = 0; n <= grid.N; ++n) values(m, n) = row[static_cast<std::size_t>(n)].get<double>();
    }
    return ValueSurface(grid, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("surface json: ") + e.what());
  }
}

}  // namespace maxent
