#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "doctest.h"
#include "swe/error.hpp"
#include "swe/io.hpp"

using namespace swe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("swe_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("CSV round trip is exact") {
  const fs::path dir = scratch("csv");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CsvTable t{{"a", "b", "c"}, {}};
  for (int k = 0; k < 50; ++k) t.rows.push_back({uni(rng) * 1e-300, uni(rng) * 1e300, uni(rng) / 3.0});
  t.rows.push_back({0.0, -0.0, 1.0 / 3.0});
  t.rows.push_back({std::numeric_limits<double>::quiet_NaN(), 5e-324, -1.7976931348623157e308});
  write_csv(dir / "t.csv", t);
  const CsvTable r = read_csv(dir / "t.csv");
  REQUIRE(r.columns == t.columns);
  REQUIRE(r.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (std::isnan(t.rows[i][c])) {
        CHECK(std::isnan(r.rows[i][c]));
      } else {
        CHECK(same_bits(r.rows[i][c], t.rows[i][c]));
      }
    }
  }
  CHECK(r.column("b") == 1);
  CHECK_THROWS_AS(r.column("zz"), Error);
}

TEST_CASE("CSV reader rejects malformed input") {
  const fs::path dir = scratch("csvbad");
  {
    std::ofstream(dir / "short.csv") << "a,b\n1,2\n3\n";
    std::ofstream(dir / "word.csv") << "a,b\n1,x\n";
    std::ofstream(dir / "empty.csv");
  }
  for (const char* f : {"short.csv", "word.csv", "empty.csv", "missing.csv"}) {
    try {
      read_csv(dir / f);
      FAIL("expected IoError for " << f);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
  }
}

TEST_CASE("snapshot round trip and byte layout") {
  const fs::path dir = scratch("snap");
  Snapshot s;
  s.shape = {3, 4};
  s.dx = 0.25;
  s.t = 1.5;
  s.names = {"h", "u"};
  Field h(12), u(12);
  for (std::size_t q = 0; q < 12; ++q) {
    h[q] = 1.0 + 0.1 * static_cast<double>(q);
    u[q] = -1.0 / (1.0 + static_cast<double>(q));
  }
  s.fields = {h, u};
  write_snapshot(dir / "s", s);
  CHECK(fs::file_size(dir / "s.bin") == 2 * 12 * 8);

  std::ifstream bin(dir / "s.bin", std::ios::binary);
  unsigned char bytes[8];
  bin.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int k = 7; k >= 0; --k) bits = (bits << 8) | bytes[k];
  double first = 0.0;
  std::memcpy(&first, &bits, 8);
  CHECK(first == 1.0);

  const nlohmann::json side = read_json(dir / "s.json");
  CHECK(side["shape"] == nlohmann::json::array({3, 4}));
  CHECK(side["fields"] == nlohmann::json::array({"h", "u"}));
  CHECK(side["format"] == "float64-le");

  const Snapshot r = read_snapshot(dir / "s");
  CHECK(r.shape == s.shape);
  CHECK(r.dx == s.dx);
  CHECK(r.t == s.t);
  CHECK(r.field("u") == u);
  CHECK(r.field("h") == h);
  CHECK_THROWS_AS(r.field("v"), Error);
}

TEST_CASE("snapshot reader rejects size mismatches") {
  const fs::path dir = scratch("snapbad");
  Snapshot s{{2}, 1.0, 0.0, {"h"}, {Field{1.0, 2.0}}};
  write_snapshot(dir / "s", s);
  {
    std::ofstream bin(dir / "s.bin", std::ios::binary | std::ios::app);
    bin << 'x';
  }
  CHECK_THROWS_AS(read_snapshot(dir / "s"), Error);
  fs::resize_file(dir / "s.bin", 8);
  CHECK_THROWS_AS(read_snapshot(dir / "s"), Error);
  Snapshot bad{{3}, 1.0, 0.0, {"h"}, {Field{1.0, 2.0}}};
  CHECK_THROWS_AS(write_snapshot(dir / "b", bad), Error);
}

TEST_CASE("table writers") {
  const fs::path dir = scratch("tables");
  const ConvergenceTable t = make_table({"u", "h"}, {10, 20}, {{1e-2, 2e-2}, {1.25e-3, 2.5e-3}});
  const CsvTable c = convergence_csv(t);
  CHECK(c.columns == std::vector<std::string>{"m", "err_u", "err_h", "q_u", "q_h"});
  write_csv(dir / "c.csv", c);
  const CsvTable r = read_csv(dir / "c.csv");
  CHECK(std::isnan(r.rows[0][3]));
  CHECK(r.rows[1][3] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(r.rows[1][0] == 20.0);

  const CsvTable e = eigen_csv(EigenReport{{{1.0, -2.0}, {0.5, 3.0}}, 1.0, 1.0, 4.0, 2});
  CHECK(e.rows[1] == std::vector<double>{0.5, 3.0});
  const CsvTable sp = spectra_csv(Spectra{{0.0, 1.0, 0.5}, {0.0, 1.0, 2.0}});
  CHECK(sp.columns == std::vector<std::string>{"n", "E_n", "E_omega"});
  CHECK(sp.rows[2] == std::vector<double>{2.0, 0.5, 2.0});
  DiagnosticsRecord d;
  d.t = 0.5;
  d.rel_mass = 1e-16;
  const CsvTable dg = diagnostics_csv({d});
  CHECK(dg.rows[0][dg.column("rel_mass")] == 1e-16);
}
