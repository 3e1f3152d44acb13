#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "swe/analysis.hpp"
#include "swe/state.hpp"
#include "swe/swe2d.hpp"

namespace swe {

inline constexpr int kSchemaVersion = 1;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

// Values are written with 17 significant digits so that reading back is exact.
// Missing values (NaN) are written as empty cells.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

// Flat little-endian float64 fields stored one after another in <stem>.bin,
// described by the sidecar <stem>.json (shape, dx, t, field names).
struct Snapshot {
  std::vector<std::size_t> shape;
  double dx = 0.0;
  double t = 0.0;
  std::vector<std::string> names;
  std::vector<Field> fields;

  const Field& field(const std::string& name) const;
};

void write_snapshot(const std::filesystem::path& stem, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& stem);

// Columns m, err_<name>..., q_<name>...; the first row has empty rates.
CsvTable convergence_csv(const ConvergenceTable& table);
// Columns n, E_n, E_omega.
CsvTable spectra_csv(const Spectra& spectra);
// Columns re, im.
CsvTable eigen_csv(const EigenReport& report);
// Columns t, energy, enstrophy, vorticity, mass and the four relative changes.
CsvTable diagnostics_csv(const std::vector<DiagnosticsRecord>& series);

}  // namespace swe
