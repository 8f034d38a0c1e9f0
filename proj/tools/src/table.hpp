#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tailrisk::cli {

/// Data table behind every figure. Cells are stored as text exactly as written
/// to CSV, so a figure rendered from a table read back from disk matches the
/// one rendered in memory.
class Table {
 public:
  explicit Table(std::vector<std::string> columns = {});

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return cells_.size(); }

  /// Appends a row; values are rendered with format_number.
  void add_row(std::vector<std::string> cells);

  std::size_t column(std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
  std::vector<double> numbers(std::string_view name) const;

  void write_csv(std::ostream& out) const;
  static Table read_csv(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static Table load(const std::filesystem::path& path);

  bool operator==(const Table&) const = default;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> cells_;
};

/// Shortest text that round-trips the double ("%.17g" trimmed by trial).
std::string format_number(double v);
std::string format_number(std::int64_t v);
inline std::string format_number(std::size_t v) { return format_number(static_cast<std::int64_t>(v)); }
inline std::string format_number(int v) { return format_number(static_cast<std::int64_t>(v)); }

}  // namespace tailrisk::cli
