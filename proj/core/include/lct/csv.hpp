#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lct::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row

  /// Index of a header column, or nullopt.
  std::optional<std::size_t> find(std::string_view name) const;
};

/// RFC-4180 style reader: quoted fields, doubled quotes, CRLF, leading BOM.
/// Blank lines are skipped. Every row must have as many fields as the header.
Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

/// Parses a decimal number with '.' separator. Surrounding blanks are ignored.
/// Returns nullopt for empty or malformed text; "nan"/"inf" parse to the
/// corresponding non-finite value so callers can report them precisely.
std::optional<double> parse_number(std::string_view text);
std::optional<int> parse_int(std::string_view text);

std::string escape(std::string_view field);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace lct::csv
