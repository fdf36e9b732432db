#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "foodaug/error.hpp"

namespace foodaug {

// Minimal RFC 4180 reader: quoted fields may contain commas, doubled quotes
// and newlines. Rows are returned as raw string vectors.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads one record; returns nullopt at end of input.
  std::optional<std::vector<std::string>> next() {
    if (in_.peek() == EOF) return std::nullopt;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = in_.get()) != EOF) {
      any = true;
      char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        row.push_back(std::move(field));
        field.clear();
      } else if (ch == '\r') {
        if (in_.peek() == '\n') in_.get();
        break;
      } else if (ch == '\n') {
        break;
      } else {
        field.push_back(ch);
      }
    }
    if (quoted) throw Error(ErrorKind::parse, "unterminated quoted CSV field");
    if (!any) return std::nullopt;
    row.push_back(std::move(field));
    return row;
  }

 private:
  std::istream& in_;
};

inline std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(',');
    out << csv_escape(fields[i]);
  }
  out.put('\n');
}

}  // namespace foodaug
