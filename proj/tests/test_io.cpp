#include <cstdio>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "enso/io.hpp"

using namespace enso;
namespace fs = std::filesystem;

namespace {

fs::path io_dir() {
  const fs::path dir = fs::temp_directory_path() / "enso_io_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("g17 round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 3.141592653589793, 1e17, 0.0,
                   -7.000000000000001}) {
    CHECK(std::stod(g17(v)) == v);
  }
}

TEST_CASE("csv_to_string writes the units comment and 17 significant digits") {
  CsvTable t;
  t.units = "t dimensionless";
  t.columns = {"t", "x"};
  t.rows = {{0.0, 0.1}, {1.0, -2.0 / 3.0}};
  const std::string text = csv_to_string(t);
  CHECK(text.rfind("# units: t dimensionless\n", 0) == 0);
  CHECK(text.find("t,x\n") != std::string::npos);
  CHECK(text.find(g17(-2.0 / 3.0)) != std::string::npos);
}

TEST_CASE("csv text round-trips through parse_csv") {
  CsvTable t;
  t.units = "a units; b units";
  t.columns = {"a", "b", "c"};
  t.rows = {{1.5, -2.25, 1e-12}, {0.1, 0.2, 0.3}};
  const CsvTable back = parse_csv(csv_to_string(t));
  CHECK(back.units == t.units);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(back.rows[i][j] == t.rows[i][j]);
    }
  }
}

TEST_CASE("parse_csv tolerates comments and CRLF line endings") {
  const std::string text =
      "# units: s\r\n# a free comment\r\nt,v\r\n0,1\r\n# between rows\r\n2,3\r\n";
  const CsvTable t = parse_csv(text);
  CHECK(t.units == "s");
  CHECK(t.columns == std::vector<std::string>{"t", "v"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][0] == 2.0);
  CHECK(t.rows[1][1] == 3.0);
}

TEST_CASE("parse_csv rejects malformed input") {
  CHECK_THROWS_AS((void)parse_csv("a,b\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_csv("a,b\n1,zebra\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_csv(""), std::invalid_argument);
}

TEST_CASE("csv_to_string rejects ragged rows") {
  CsvTable t;
  t.columns = {"a", "b"};
  t.rows = {{1.0}};
  CHECK_THROWS_AS((void)csv_to_string(t), std::invalid_argument);
}

TEST_CASE("write_csv / read_csv round-trip through the filesystem") {
  const fs::path path = io_dir() / "roundtrip.csv";
  CsvTable t;
  t.units = "x dimensionless";
  t.columns = {"x"};
  t.rows = {{-4.0}, {0.5}};
  write_csv(path.string(), t);
  const CsvTable back = read_csv(path.string());
  CHECK(back.units == t.units);
  CHECK(back.rows == t.rows);
  fs::remove(path);
}

TEST_CASE("text files round-trip bytes and report open failures") {
  const fs::path path = io_dir() / "note.txt";
  write_text_file(path.string(), "line1\nline2\n");
  CHECK(read_text_file(path.string()) == "line1\nline2\n");
  fs::remove(path);
  CHECK_THROWS_AS((void)read_text_file((io_dir() / "missing.txt").string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      write_text_file((io_dir() / "no_dir" / "x.txt").string(), "hi"),
      std::invalid_argument);
}

TEST_CASE("manifest_path_for appends the manifest suffix") {
  CHECK(manifest_path_for("out/traj.csv") == "out/traj.csv.manifest.json");
  CHECK(manifest_path_for("scan.json") == "scan.json.manifest.json");
}

}  // TEST_SUITE
