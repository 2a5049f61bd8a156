#include "enso/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace enso {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_to_string(const CsvTable& table) {
  std::ostringstream out;
  if (!table.units.empty()) out << "# units: " << table.units << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("csv: row width does not match header");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << g17(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
  write_text_file(path, csv_to_string(table));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr const char* kUnitsTag = "# units: ";
      if (table.units.empty() && line.rfind(kUnitsTag, 0) == 0) {
        table.units = line.substr(std::string(kUnitsTag).size());
      }
      continue;
    }
    if (!header_seen) {
      table.columns = split_fields(line);
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != table.columns.size()) {
      throw std::invalid_argument("csv: ragged row '" + line + "'");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("csv: unparsable number '" + f + "'");
      }
      if (used != f.size()) {
        throw std::invalid_argument("csv: unparsable number '" + f + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::invalid_argument("csv: missing header row");
  return table;
}

CsvTable read_csv(const std::string& path) {
  return parse_csv(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string manifest_path_for(const std::string& out_path) {
  return out_path + ".manifest.json";
}

}  // namespace enso
