#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace emac::csv {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split_line(std::string_view line, char sep = ',');

/// Writes `fields` joined by commas and a trailing newline.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Parsed CSV with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::out_of_range when missing.
  std::size_t column(std::string_view name) const;
};

Table read_table(std::istream& in);

}  // namespace emac::csv
