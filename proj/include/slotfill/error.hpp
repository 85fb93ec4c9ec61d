#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slotfill {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid configuration, manifest or argument combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training produced a NaN or infinity.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Model file could not be decoded.
class ModelFormatError : public Error {
 public:
  enum class Kind { BadMagic, VersionMismatch, Truncated, Corrupt };

  ModelFormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace slotfill
