#include "vvicert/predicate.hpp"

#include <algorithm>
#include <cmath>

#include "parser.hpp"

namespace vvicert {

struct Predicate::Node {
  Kind kind;
  Expr lhs;
  Comparison cmp = Comparison::Equal;
  Expr rhs;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Predicate::Predicate() : Predicate(always()) {}

Predicate::Predicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Predicate Predicate::always() {
  return Predicate(std::make_shared<Node>(Node{Kind::True, {}, Comparison::Equal, {}, {}, {}}));
}

Predicate Predicate::compare(Expr lhs, Comparison cmp, Expr rhs) {
  return Predicate(std::make_shared<Node>(
      Node{Kind::Compare, std::move(lhs), cmp, std::move(rhs), {}, {}}));
}

Predicate Predicate::conjunction(Predicate a, Predicate b) {
  return Predicate(std::make_shared<Node>(
      Node{Kind::And, {}, Comparison::Equal, {}, std::move(a.node_), std::move(b.node_)}));
}

Predicate Predicate::disjunction(Predicate a, Predicate b) {
  return Predicate(std::make_shared<Node>(
      Node{Kind::Or, {}, Comparison::Equal, {}, std::move(a.node_), std::move(b.node_)}));
}

Predicate::Kind Predicate::kind() const { return node_->kind; }

bool Predicate::holds(std::span<const double> x, double slack) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::True:
      return true;
    case Kind::And:
      return Predicate(n.a).holds(x, slack) && Predicate(n.b).holds(x, slack);
    case Kind::Or:
      return Predicate(n.a).holds(x, slack) || Predicate(n.b).holds(x, slack);
    case Kind::Compare:
      break;
  }
  const double d = n.lhs.eval(x) - n.rhs.eval(x);
  switch (n.cmp) {
    case Comparison::Less: return d < slack;
    case Comparison::LessEqual: return d <= slack;
    case Comparison::Equal: return std::fabs(d) <= std::max(kEqualityTolerance, slack);
    case Comparison::GreaterEqual: return d >= -slack;
    case Comparison::Greater: return d > -slack;
  }
  return false;
}

int Predicate::maxIndex() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::True:
      return -1;
    case Kind::Compare:
      return std::max(n.lhs.maxIndex(Arg::X), n.rhs.maxIndex(Arg::X));
    default:
      return std::max(Predicate(n.a).maxIndex(), Predicate(n.b).maxIndex());
  }
}

namespace {

const char* symbol(Comparison cmp) {
  switch (cmp) {
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Equal: return "=";
    case Comparison::GreaterEqual: return ">=";
    case Comparison::Greater: return ">";
  }
  return "?";
}

}  // namespace

std::string print(const Predicate& p) {
  const auto& n = *p.node_;
  switch (n.kind) {
    case Predicate::Kind::True:
      return "true";
    case Predicate::Kind::Compare:
      return print(n.lhs) + " " + symbol(n.cmp) + " " + print(n.rhs);
    case Predicate::Kind::And:
      return "(" + print(Predicate(n.a)) + ") and (" + print(Predicate(n.b)) + ")";
    case Predicate::Kind::Or:
      return "(" + print(Predicate(n.a)) + ") or (" + print(Predicate(n.b)) + ")";
  }
  return {};
}

namespace detail {

//   disjunction := conjunction (('or' | '||') conjunction)*
//   conjunction := atom (('and' | '&&') atom)*
//   atom        := 'true' | '(' disjunction ')' | sum cmp sum
Predicate Parser::parsePredicate() {
  if (atEnd()) fail("empty predicate");
  Predicate p = parseDisjunction();
  if (!atEnd()) fail(std::string("unexpected '") + text_[pos_] + "'");
  return p;
}

Predicate Parser::parseDisjunction() {
  Predicate acc = parseConjunction();
  while (matchWord("or") || match("||")) {
    acc = Predicate::disjunction(acc, parseConjunction());
  }
  return acc;
}

Predicate Parser::parseConjunction() {
  Predicate acc = parseAtom();
  while (matchWord("and") || match("&&")) {
    acc = Predicate::conjunction(acc, parseAtom());
  }
  return acc;
}

Predicate Parser::parseAtom() {
  if (matchWord("true")) return Predicate::always();
  skipSpace();
  if (pos_ < text_.size() && text_[pos_] == '(') {
    // "(x1 + 1) >= 0" and "(x1 >= 0 or x2 >= 0)" both start with '(';
    // try the nested predicate first and fall back to a comparison.
    const std::size_t start = pos_;
    try {
      ++pos_;
      Predicate inner = parseDisjunction();
      if (match(")")) return inner;
    } catch (const ParseError&) {
    }
    pos_ = start;
  }
  return parseComparison();
}

bool Parser::tryComparison(Comparison& cmp) {
  if (match("<=") || match("≤")) { cmp = Comparison::LessEqual; return true; }
  if (match(">=") || match("≥")) { cmp = Comparison::GreaterEqual; return true; }
  if (match("==")) { cmp = Comparison::Equal; return true; }
  if (match("<")) { cmp = Comparison::Less; return true; }
  if (match(">")) { cmp = Comparison::Greater; return true; }
  if (match("=")) { cmp = Comparison::Equal; return true; }
  return false;
}

Predicate Parser::parseComparison() {
  Expr lhs = parseSum();
  Comparison cmp{};
  if (!tryComparison(cmp)) fail("expected a comparison operator");
  Expr rhs = parseSum();
  return Predicate::compare(std::move(lhs), cmp, std::move(rhs));
}

}  // namespace detail

Predicate parsePredicate(std::string_view text, int dim) {
  if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  detail::Parser parser(text, dim, ParseContext::Predicate);
  return parser.parsePredicate();
}

}  // namespace vvicert
