#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asnf {

enum class ErrorCode {
  SyntaxError,
  UndeclaredStart,
  LhsWithoutNonterminal,
  KindConflict,
  UnknownSymbol,
  NotContextFree,
  NonCfgEpsilonUndecided,
  ShapeViolation,
  InputNotStrongSavitch,
  WordHasNonterminal,
  SegmentRewritten,
  FormViolation,
  CapExceeded,
  TraceMismatch,
  InvalidDerivation,
  UnknownNode,
  AlphabetMismatch,
  BadInput,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// that the CLI can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures keep the 1-based location of the offending token.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                        message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace asnf
