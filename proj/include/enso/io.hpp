#pragma once

#include <string>
#include <vector>

namespace enso {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal rendering of a double (printf %.17g).
[[nodiscard]] std::string g17(double v);

/// Comma-separated numeric table with a '#'-prefixed units/metadata line.
struct CsvTable {
  std::string units;  ///< written as "# units: <text>" when nonempty
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  ///< row-major, matching columns
};

[[nodiscard]] std::string csv_to_string(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

/// Inverse of csv_to_string. Tolerates extra '#' comment lines (ignored
/// beyond the first units line) and a missing final newline. Throws
/// std::invalid_argument on ragged rows or unparsable numbers.
[[nodiscard]] CsvTable parse_csv(const std::string& text);
[[nodiscard]] CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
[[nodiscard]] std::string read_text_file(const std::string& path);

/// Sidecar manifest path written next to every CLI output.
[[nodiscard]] std::string manifest_path_for(const std::string& out_path);

}  // namespace enso
