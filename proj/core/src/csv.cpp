#include "lct/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "lct/error.hpp"

namespace lct::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Reads one logical record; quoted fields may span physical lines.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      // swallowed; '\n' terminates the record
    } else if (ch == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) fail(ErrorCode::SchemaMismatch, "csv", "unterminated quoted field near line " + std::to_string(line));
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields.front()).empty();
}

}  // namespace

std::optional<std::size_t> Table::find(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

Table read(std::istream& in) {
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
    if (!(bom[0] == '\xEF' && bom[1] == '\xBB' && bom[2] == '\xBF')) {
      fail(ErrorCode::SchemaMismatch, "csv", "unexpected leading bytes");
    }
  }
  Table table;
  std::vector<std::string> fields;
  std::size_t line = 1;
  bool have_header = false;
  while (true) {
    const std::size_t start = line;
    if (!read_record(in, fields, line)) break;
    if (blank(fields)) continue;
    for (auto& f : fields) f = std::string(trim(f));
    if (!have_header) {
      table.header = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      fail(ErrorCode::SchemaMismatch, "csv",
           "line " + std::to_string(start) + " has " + std::to_string(fields.size()) +
               " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(fields);
    table.line_numbers.push_back(start);
  }
  if (!have_header) fail(ErrorCode::SchemaMismatch, "csv", "missing header row");
  return table;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "csv", "cannot open " + path.string());
  return read(in);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view text) {
  text = trim(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << escape(fields[i]);
  }
  out_ << '\n';
}

}  // namespace lct::csv
