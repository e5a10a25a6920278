#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace odt::csv {

/// A parsed comma-separated file. Fields are not quoted anywhere in this
/// project, so splitting is on bare commas.
struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based, parallel to rows

  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  /// Column index by name; throws ParseError on line 1 when absent.
  std::size_t require_column(std::string_view name) const;
};

Table read_file(const std::filesystem::path& path);
Table parse(std::string_view text, std::string source);

std::vector<std::string> split(std::string_view line);

// Field conversions; all throw ParseError naming the source and line.
double to_double(const Table& t, std::size_t row, std::size_t col);
std::int64_t to_int(const Table& t, std::size_t row, std::size_t col);

/// Shortest text that reads back to exactly the same double.
std::string exact(double v);
/// Fixed-point text with `decimals` digits after the point.
std::string fixed(double v, int decimals);

/// Writes to `path` through a sibling temp file and a rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace odt::csv
