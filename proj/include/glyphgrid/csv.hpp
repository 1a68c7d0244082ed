#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace glyphgrid {

// Streaming RFC-4180 CSV reader: quoted fields, doubled-quote escapes,
// embedded newlines, CRLF line endings. Rows are delivered one at a
// time; empty lines are skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Next data row, or nullopt at end of input. Throws CsvError on an
  // unterminated quoted field.
  std::optional<std::vector<std::string>> next_row();

  // 1-based line number where the most recent row started.
  std::size_t row_line() const { return row_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t row_line_ = 0;
};

}  // namespace glyphgrid
