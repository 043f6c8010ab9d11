// Recursive-descent parser shared by expressions and region predicates.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "vvicert/expr.hpp"
#include "vvicert/predicate.hpp"

namespace vvicert::detail {

class Parser {
 public:
  Parser(std::string_view text, int dim, ParseContext context);

  Expr parseExpression();
  Predicate parsePredicate();

  void skipSpace();
  bool atEnd();
  std::size_t position() const { return pos_; }
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void failAt(std::size_t offset, const std::string& message) const;

 private:
  Expr parseSum();
  Expr parseTerm();
  Expr parseUnary();
  Expr parsePower();
  Expr parsePrimary();
  Expr parseIdentifier();
  Expr parseNumber();
  int parseExponent();

  Predicate parseDisjunction();
  Predicate parseConjunction();
  Predicate parseAtom();
  Predicate parseComparison();
  bool tryComparison(Comparison& cmp);
  bool matchWord(std::string_view word);
  bool match(std::string_view symbol);

  std::string_view text_;
  std::size_t pos_ = 0;
  int dim_;
  ParseContext context_;
};

}  // namespace vvicert::detail
