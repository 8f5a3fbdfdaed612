#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace thompson {

enum class ErrorCode {
  NonMonotone,
  BadSlope,
  NonDyadic,
  BadEndpoints,
  OutOfRange,
  BadInterval,
  ParseError,
  UnknownConstant,
  UnboundVariable,
  UnknownSet,
  NegativeCoefficient,
  NotASolution,
  DecompositionNotFound,
  NotInImage,
  NotInCommutatorSubgroup,
  ResourceLimit,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::BadSlope: return "BadSlope";
    case ErrorCode::NonDyadic: return "NonDyadic";
    case ErrorCode::BadEndpoints: return "BadEndpoints";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownConstant: return "UnknownConstant";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::UnknownSet: return "UnknownSet";
    case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
    case ErrorCode::NotASolution: return "NotASolution";
    case ErrorCode::DecompositionNotFound: return "DecompositionNotFound";
    case ErrorCode::NotInImage: return "NotInImage";
    case ErrorCode::NotInCommutatorSubgroup: return "NotInCommutatorSubgroup";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures report a 1-based line and column. Line 0 means the input
/// was a single string rather than a file.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& msg)
      : Error(code, location(line, column) + msg), line_(line), column_(column), message_(msg) {}
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : ParseError(ErrorCode::ParseError, line, column, msg) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  /// The message without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string location(std::size_t line, std::size_t column) {
    if (line == 0) return "column " + std::to_string(column) + ": ";
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
  }

  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace thompson
