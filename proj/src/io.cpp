#include "swe/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "swe/error.hpp"

namespace swe {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) parts.push_back(cell);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

std::uint64_t to_little(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int k = 0; k < 8; ++k) r |= ((bits >> (8 * k)) & 0xffu) << (8 * (7 - k));
    return r;
  }
  return bits;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* ext) {
  std::filesystem::path p = stem;
  p += ext;
  return p;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorCode::IoError, "no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out = open_out(path);
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw Error(ErrorCode::IoError, "row width differs from the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (std::isnan(row[c])) continue;
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoError, path.string() + " is empty");
  table.columns = split(line, ',');
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != table.columns.size()) {
      throw Error(ErrorCode::IoError, path.string() + ":" + std::to_string(line_no) + ": wrong number of cells");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) {
      if (cell.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw Error(ErrorCode::IoError, path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
  }
}

const Field& Snapshot::field(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorCode::IoError, "snapshot has no field " + name);
  return fields[static_cast<std::size_t>(it - names.begin())];
}

void write_snapshot(const std::filesystem::path& stem, const Snapshot& snap) {
  std::size_t count = 1;
  for (std::size_t s : snap.shape) count *= s;
  if (snap.names.size() != snap.fields.size()) throw Error(ErrorCode::IoError, "snapshot names and fields differ");
  for (const Field& f : snap.fields) {
    if (f.size() != count) throw Error(ErrorCode::IoError, "snapshot field does not match its shape");
  }
  std::ofstream bin = open_out(with_suffix(stem, ".bin"), std::ios::out | std::ios::binary);
  for (const Field& f : snap.fields) {
    for (double v : f) {
      const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
      bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!bin) throw Error(ErrorCode::IoError, "write failed for " + with_suffix(stem, ".bin").string());
  nlohmann::json side = {{"schema_version", kSchemaVersion},
                         {"format", "float64-le"},
                         {"layout", "row-major, fields stored consecutively"},
                         {"shape", snap.shape},
                         {"dx", snap.dx},
                         {"t", snap.t},
                         {"fields", snap.names},
                         {"data", with_suffix(stem, ".bin").filename().string()}};
  write_json(with_suffix(stem, ".json"), side);
}

Snapshot read_snapshot(const std::filesystem::path& stem) {
  const nlohmann::json side = read_json(with_suffix(stem, ".json"));
  Snapshot snap;
  try {
    if (side.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::IoError, "snapshot schema version mismatch");
    }
    snap.shape = side.at("shape").get<std::vector<std::size_t>>();
    snap.dx = side.at("dx").get<double>();
    snap.t = side.at("t").get<double>();
    snap.names = side.at("fields").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, "bad snapshot sidecar: " + std::string(e.what()));
  }
  std::size_t count = 1;
  for (std::size_t s : snap.shape) count *= s;
  std::ifstream bin = open_in(with_suffix(stem, ".bin"), std::ios::in | std::ios::binary);
  for (std::size_t k = 0; k < snap.names.size(); ++k) {
    Field f(count);
    for (double& v : f) {
      std::uint64_t bits = 0;
      bin.read(reinterpret_cast<char*>(&bits), sizeof bits);
      v = std::bit_cast<double>(to_little(bits));
    }
    if (!bin) throw Error(ErrorCode::IoError, "snapshot data shorter than its sidecar declares");
    snap.fields.push_back(std::move(f));
  }
  if (bin.peek() != std::ifstream::traits_type::eof()) {
    throw Error(ErrorCode::IoError, "snapshot data longer than its sidecar declares");
  }
  return snap;
}

CsvTable convergence_csv(const ConvergenceTable& table) {
  CsvTable csv;
  csv.columns.push_back("m");
  for (const auto& n : table.names) csv.columns.push_back("err_" + n);
  for (const auto& n : table.names) csv.columns.push_back("q_" + n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : table.rows) {
    std::vector<double> r{static_cast<double>(row.m)};
    r.insert(r.end(), row.errors.begin(), row.errors.end());
    for (std::size_t k = 0; k < table.names.size(); ++k) r.push_back(k < row.rates.size() ? row.rates[k] : nan);
    csv.rows.push_back(std::move(r));
  }
  return csv;
}

CsvTable spectra_csv(const Spectra& spectra) {
  CsvTable csv{{"n", "E_n", "E_omega"}, {}};
  for (std::size_t k = 0; k < spectra.energy.size(); ++k) {
    csv.rows.push_back({static_cast<double>(k), spectra.energy[k], spectra.enstrophy[k]});
  }
  return csv;
}

CsvTable eigen_csv(const EigenReport& report) {
  CsvTable csv{{"re", "im"}, {}};
  for (const auto& z : report.eigenvalues) csv.rows.push_back({z.real(), z.imag()});
  return csv;
}

CsvTable diagnostics_csv(const std::vector<DiagnosticsRecord>& series) {
  CsvTable csv{{"t", "energy", "enstrophy", "vorticity", "mass", "rel_energy", "rel_enstrophy", "rel_vorticity",
                "rel_mass"},
               {}};
  for (const auto& d : series) {
    csv.rows.push_back({d.t, d.energy, d.enstrophy, d.vorticity, d.mass, d.rel_energy, d.rel_enstrophy,
                        d.rel_vorticity, d.rel_mass});
  }
  return csv;
}

}  // namespace swe
