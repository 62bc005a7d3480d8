// SPDX-License-Identifier: Apache-2.0
#include "echotk/csv.hpp"

#include <string>

#include "echotk/error.hpp"

namespace echotk {

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_;
  record_line_ = line_;

  std::string field;
  bool in_quotes = false;
  bool any = false;
  std::size_t i = 0;
  for (;;) {
    if (i >= line.size()) {
      if (!in_quotes) break;
      // Quoted field continues on the next physical line.
      if (!std::getline(in_, line)) {
        throw FormatError("unterminated quoted field starting at line " +
                          std::to_string(record_line_));
      }
      ++line_;
      field += '\n';
      i = 0;
      continue;
    }
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field += ch;
        ++i;
      }
    } else if (ch == '"' && field.empty()) {
      in_quotes = true;
      any = true;
      ++i;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      any = true;
      ++i;
    } else if (ch == '\r' && i + 1 == line.size()) {
      ++i;  // trailing CR from CRLF input
    } else {
      field += ch;
      ++i;
    }
  }
  if (any || !field.empty()) fields.push_back(std::move(field));
  if (fields.empty()) fields.push_back({});  // blank line = one empty field
  return true;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

}  // namespace echotk
