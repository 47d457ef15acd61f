#pragma once

#include <stdexcept>
#include <string>

namespace ipd {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Payoff-matrix validation failure.
class PayoffError : public Error {
 public:
  enum class Kind { OrderingViolated, SocialWelfareViolated };

  PayoffError(Kind kind, std::string detail)
      : Error(kind == Kind::OrderingViolated
                  ? "OrderingViolated: " + detail
                  : "SocialWelfareViolated: " + detail),
        kind_(kind),
        detail_(std::move(detail)) {}

  Kind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::string detail_;
};

/// Invalid experiment configuration (unknown key, wrong type, bad value).
/// CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problem with an input data file. CLI maps this to exit code 3.
/// `kind` is one of "ParseError", "SchemaError", "ActionCodeError", "IoError".
class DataError : public Error {
 public:
  DataError(std::string kind, const std::string& msg, int line = 0, int column = 0)
      : Error(kind + ": " + msg), kind_(std::move(kind)), line_(line), column_(column) {}

  const std::string& kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string kind_;
  int line_ = 0;
  int column_ = 0;
};

/// Contract violation inside a simulation component, e.g. "ArityMismatch",
/// "DimensionMismatch", "UnknownState", "EmptySeries", "CountExceedsTotal",
/// "MalformedAdvice", "EmptyTestSet".
class DomainError : public Error {
 public:
  DomainError(std::string kind, const std::string& msg)
      : Error(kind + ": " + msg), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace ipd
