#pragma once

#include <string>
#include <vector>

#include "bmb/matrix.hpp"

namespace bmb {

// Comma-separated text with a header row. Fields never contain commas,
// quotes or newlines; names that would need quoting are rejected on write.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);
std::string to_csv_text(const CsvTable& table);

// Shortest text that parses back to the same double; NaN is written as NA.
std::string format_double(double x);
// Accepts NA (NaN); throws Io on anything that is not a complete number.
double parse_double(const std::string& field);

// Data files hold observations in rows and variables in columns.
struct LoadedData {
  Matrix values;  // variables x observations, NaN for NA
  std::vector<std::string> names;
};

LoadedData read_data_csv(const std::string& path);
void write_data_csv(const std::string& path, const Matrix& values, const std::vector<std::string>& names);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace bmb
