#include "bmb/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bmb {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void check_field(const std::string& f) {
  if (f.find_first_of(",\"\n\r") != std::string::npos) {
    throw Error(ErrorKind::Io, "field needs quoting: " + f);
  }
}

}  // namespace

std::string to_csv_text(const CsvTable& table) {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      check_field(row[k]);
      if (k) out += ',';
      out += row[k];
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw Error(ErrorKind::Io, "row width differs from header");
    append_row(row);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "write to " + path + " failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const CsvTable& table) { write_text(path, to_csv_text(table)); }

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  CsvTable table;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (first) throw Error(ErrorKind::Io, path + " has no header row");
  return table;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  if (field == "NA") return std::nan("");
  double x = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, x);
  if (res.ec != std::errc() || res.ptr != end || field.empty()) {
    throw Error(ErrorKind::Io, "not a number: '" + field + "'");
  }
  return x;
}

LoadedData read_data_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.rows.empty()) throw Error(ErrorKind::Io, path + " has no observations");
  LoadedData d;
  d.names = t.header;
  d.values.resize(static_cast<Index>(t.header.size()), static_cast<Index>(t.rows.size()));
  for (std::size_t j = 0; j < t.rows.size(); ++j)
    for (std::size_t i = 0; i < t.header.size(); ++i)
      d.values(static_cast<Index>(i), static_cast<Index>(j)) = parse_double(t.rows[j][i]);
  return d;
}

void write_data_csv(const std::string& path, const Matrix& values, const std::vector<std::string>& names) {
  if (static_cast<Index>(names.size()) != values.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "one name per variable required");
  }
  CsvTable t;
  t.header = names;
  t.rows.reserve(static_cast<std::size_t>(values.cols()));
  for (Index j = 0; j < values.cols(); ++j) {
    std::vector<std::string> row;
    row.reserve(names.size());
    for (Index i = 0; i < values.rows(); ++i) row.push_back(format_double(values(i, j)));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

}  // namespace bmb
