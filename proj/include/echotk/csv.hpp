// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace echotk {

// Minimal RFC-4180-style reader: quoted fields, doubled quotes, CRLF line
// endings, quoted fields spanning lines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads one record into `fields`. Returns false at end of input.
  // Throws FormatError on an unterminated quoted field.
  bool next(std::vector<std::string>& fields);

  // 1-based line number where the last record started.
  std::uint64_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::uint64_t line_ = 0;
  std::uint64_t record_line_ = 0;
};

// Quotes a field only when needed (comma, quote, or newline present).
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace echotk
