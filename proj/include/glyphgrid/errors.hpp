#pragma once

#include <stdexcept>
#include <string>

namespace glyphgrid {

// Process exit codes used by the CLI. Library errors carry the code they
// map to so main() can translate uniformly.
enum class ExitCode : int {
  ok = 0,
  io_error = 1,
  config_error = 2,
  font_error = 3,
  mismatch_error = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode exit_code() const { return code_; }

 private:
  ExitCode code_;
};

// File system and input data failures (unreadable files, malformed CSV).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::io_error, what) {}
};

// CSV record errors keep the 1-based line where the offending row starts.
class CsvError : public IoError {
 public:
  CsvError(std::size_t line, const std::string& what)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration: geometry that does not divide, cut_length that is
// not grid_dim^2, bad model shapes, plan/config disagreement.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::config_error, what) {}
};

class FontError : public Error {
 public:
  explicit FontError(const std::string& what) : Error(ExitCode::font_error, what) {}
};

// Dataset/model pairing violations: wrong image size, labels out of range,
// config-hash mismatch between a manifest and a trained model.
class MismatchError : public Error {
 public:
  explicit MismatchError(const std::string& what) : Error(ExitCode::mismatch_error, what) {}
};

}  // namespace glyphgrid
