#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vvicert {

enum class ErrorKind {
  Parse,
  DivisionByZero,
  NonSmoothOperator,
  DimensionMismatch,
  OutOfDomain,
  NoActivePiece,
  InconsistentPieces,
  InvalidE,
  Degenerate,
  GenerationFailed,
  Validation,
  Usage,
};

const char* toString(ErrorKind kind);

/// Base of every error the library throws. The kind lets callers map
/// failures onto exit codes or Inapplicable verdicts without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Syntax error inside an expression or predicate string. `offset` is the
/// zero-based byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(ErrorKind::Parse,
              "offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        detail_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

}  // namespace vvicert
