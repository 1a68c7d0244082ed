#include "glyphgrid/csv.hpp"

#include "glyphgrid/errors.hpp"

namespace glyphgrid {

std::optional<std::vector<std::string>> CsvReader::next_row() {
  // skip blank lines between records
  int c;
  while ((c = in_.get()) != EOF) {
    if (c == '\n') {
      ++line_;
    } else if (c != '\r') {
      break;
    }
  }
  if (c == EOF) return std::nullopt;

  row_line_ = line_;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool at_field_start = true;

  while (true) {
    if (quoted) {
      if (c == EOF) throw CsvError(row_line_, "unterminated quoted field");
      if (c == '"') {
        const int peek = in_.get();
        if (peek == '"') {
          field.push_back('"');
        } else {
          quoted = false;
          c = peek;
          continue;  // reprocess the char after the closing quote
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(static_cast<char>(c));
      }
    } else {
      if (c == EOF || c == '\n') {
        if (c == '\n') ++line_;
        if (!field.empty() && field.back() == '\r') field.pop_back();
        row.push_back(std::move(field));
        return row;
      }
      if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
        at_field_start = true;
        c = in_.get();
        continue;
      }
      if (c == '"' && at_field_start && field.empty()) {
        quoted = true;
      } else {
        field.push_back(static_cast<char>(c));
        at_field_start = false;
      }
    }
    c = in_.get();
  }
}

}  // namespace glyphgrid
