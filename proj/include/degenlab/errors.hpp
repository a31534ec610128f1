#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace degenlab {

// Common base so callers can catch everything from this library at once and
// still recover the precise kind for dispatch (CLI exit codes, reports).
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

struct InvalidDomainParams : Error {
  explicit InvalidDomainParams(const std::string& m) : Error("InvalidDomainParams", m) {}
};

struct PointOutsideDomain : Error {
  explicit PointOutsideDomain(const std::string& m) : Error("PointOutsideDomain", m) {}
};

struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& m) : Error("GridTooCoarse", m) {}
};

struct InvalidOperatorParams : Error {
  explicit InvalidOperatorParams(const std::string& m) : Error("InvalidOperatorParams", m) {}
};

struct NoValidAlpha : Error {
  explicit NoValidAlpha(const std::string& m) : Error("NoValidAlpha", m) {}
};

struct DegenerateTimestep : Error {
  explicit DegenerateTimestep(const std::string& m) : Error("DegenerateTimestep", m) {}
};

struct NonFiniteValue : Error {
  explicit NonFiniteValue(const std::string& m) : Error("NonFiniteValue", m) {}
};

struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& m) : Error("OutOfDomain", m) {}
};

struct SupercriticalParams : Error {
  explicit SupercriticalParams(const std::string& m) : Error("SupercriticalParams", m) {}
};

struct EmptyFilter : Error {
  explicit EmptyFilter(const std::string& m) : Error("EmptyFilter", m) {}
};

struct DegenerateField : Error {
  explicit DegenerateField(const std::string& m) : Error("DegenerateField", m) {}
};

struct NonPositiveTrace : Error {
  explicit NonPositiveTrace(const std::string& m) : Error("NonPositiveTrace", m) {}
};

// Config text could not be tokenized/shaped; carries 1-based position.
class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& message)
      : Error("ParseError",
              "line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& m) : Error("ValidationError", m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error("IoError", m) {}
};

}  // namespace degenlab
