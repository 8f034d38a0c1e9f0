#include "table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "tailrisk/error.hpp"

namespace tailrisk::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // std::to_chars gives the shortest representation that parses back exactly.
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  return std::string(buf, end);
}

std::string format_number(std::int64_t v) { return std::to_string(v); }

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<std::string> cells) {
  detail::require(cells.size() == columns_.size(), ErrorCode::invalid_argument, "row width does not match columns");
  cells_.push_back(std::move(cells));
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw Error(ErrorCode::malformed_header, "table has no column '" + std::string(name) + "'");
}

const std::string& Table::text(std::size_t row, std::string_view name) const { return cells_.at(row)[column(name)]; }

double Table::number(std::size_t row, std::string_view name) const {
  const auto& s = text(row, name);
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw Error(ErrorCode::invalid_argument, "not a number in column '" + std::string(name) + "': " + s);
  }
  return v;
}

std::vector<double> Table::numbers(std::string_view name) const {
  std::vector<double> out;
  out.reserve(rows());
  for (std::size_t r = 0; r < rows(); ++r) out.push_back(number(r, name));
  return out;
}

// Cells never contain commas or quotes (series names and numbers only).
void Table::write_csv(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(columns_);
  for (const auto& row : cells_) line(row);
}

Table Table::read_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::malformed_header, "empty table");
  Table t(split(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.add_row(split(line));
  }
  return t;
}

void Table::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
  write_csv(out);
}

Table Table::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file_not_found, "cannot open " + path.string());
  return read_csv(in);
}

}  // namespace tailrisk::cli
