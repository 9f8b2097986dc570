#ifndef STOPPROFILER_ERRORS_HPP
#define STOPPROFILER_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stopprofiler {

// Base for all data-domain errors. The CLI maps any Error to exit code 2;
// command-line usage problems exit with code 1 instead.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A field value outside its legal range. Carries the offending field name.
class RangeError : public Error {
public:
  explicit RangeError(std::string field, const std::string& detail = "")
      : Error("out-of-range value for field '" + field + "'" +
              (detail.empty() ? "" : ": " + detail)),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

// Malformed input text. Line numbers are 1-based; the header is line 1.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::string column, const std::string& detail = "")
      : Error("parse error at line " + std::to_string(line) + ", column '" + column +
              "'" + (detail.empty() ? "" : ": " + detail)),
        line_(line),
        column_(std::move(column)) {}
  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

private:
  std::size_t line_;
  std::string column_;
};

class MixedTripError : public Error {
public:
  explicit MixedTripError(const std::string& detail)
      : Error("events span multiple trips: " + detail) {}
};

class DuplicateEventError : public Error {
public:
  explicit DuplicateEventError(const std::string& detail)
      : Error("duplicate event: " + detail) {}
};

// A profile with total 0 where a positive total is required. Carries the
// offending stop ids when known.
class ZeroTotalError : public Error {
public:
  explicit ZeroTotalError(std::vector<std::string> stops)
      : Error(make_message(stops)), stops_(std::move(stops)) {}
  const std::vector<std::string>& stops() const { return stops_; }

private:
  static std::string make_message(const std::vector<std::string>& stops) {
    std::string msg = "zero total where a positive total is required";
    if (!stops.empty()) {
      msg += " (stops:";
      for (const auto& s : stops) msg += " " + s;
      msg += ")";
    }
    return msg;
  }
  std::vector<std::string> stops_;
};

class LengthMismatchError : public Error {
public:
  explicit LengthMismatchError(const std::string& detail)
      : Error("length mismatch: " + detail) {}
};

class TooFewCurvesError : public Error {
public:
  explicit TooFewCurvesError(std::size_t n)
      : Error("band distance needs at least 2 curves, got " + std::to_string(n)) {}
};

class TooFewStopsError : public Error {
public:
  explicit TooFewStopsError(std::size_t n)
      : Error("at least 2 stops required, got " + std::to_string(n)) {}
};

class NotAPermutationError : public Error {
public:
  explicit NotAPermutationError(const std::string& detail)
      : Error("not a permutation: " + detail) {}
};

class UnknownVariationError : public Error {
public:
  explicit UnknownVariationError(const std::string& variation_id)
      : Error("no events for variation '" + variation_id + "'") {}
};

class UnknownStopError : public Error {
public:
  explicit UnknownStopError(const std::string& stop_id)
      : Error("unknown stop '" + stop_id + "'") {}
};

class BadKError : public Error {
public:
  BadKError(int k, std::size_t n)
      : Error("k must satisfy 1 <= k <= n, got k=" + std::to_string(k) +
              " with n=" + std::to_string(n)) {}
};

class LabelMismatchError : public Error {
public:
  explicit LabelMismatchError(const std::string& detail)
      : Error("label mismatch: " + detail) {}
};

// A quantity whose definition degenerates on the given input (for example a
// rank correlation of a constant vector). Reported, never silently zeroed.
class DegenerateError : public Error {
public:
  explicit DegenerateError(const std::string& detail)
      : Error("degenerate input: " + detail) {}
};

class EmptyInputError : public Error {
public:
  explicit EmptyInputError(const std::string& detail)
      : Error("empty input: " + detail) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& detail)
      : Error("bad configuration: " + detail) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& detail) : Error("i/o error: " + detail) {}
};

}  // namespace stopprofiler

#endif  // STOPPROFILER_ERRORS_HPP
