#include "vvicert/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "parser.hpp"

namespace vvicert {

const char* toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NonSmoothOperator: return "NonSmoothOperator";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NoActivePiece: return "NoActivePiece";
    case ErrorKind::InconsistentPieces: return "InconsistentPieces";
    case ErrorKind::InvalidE: return "InvalidE";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Usage: return "UsageError";
  }
  return "Error";
}

struct Expr::Node {
  Op op;
  double value = 0.0;
  Variable var;
  int exponent = 0;
  Expr a;
  Expr b;
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::make(Op op, Expr a, Expr b, double value, Variable v, int k) {
  return Expr(std::make_shared<Node>(Node{op, value, v, k, std::move(a), std::move(b)}));
}

Expr Expr::constant(double value) {
  auto node = std::make_shared<Node>(Node{Op::Const, value, {}, 0, Expr(nullptr), Expr(nullptr)});
  return Expr(std::move(node));
}

Expr Expr::variable(Variable v) {
  auto node = std::make_shared<Node>(Node{Op::Var, 0.0, v, 0, Expr(nullptr), Expr(nullptr)});
  return Expr(std::move(node));
}

Expr::Op Expr::op() const { return node_->op; }
double Expr::constantValue() const { return node_->value; }
Variable Expr::var() const { return node_->var; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.isConstant() && b.isConstant()) {
    return Expr::constant(a.constantValue() + b.constantValue());
  }
  if (a.isConstant(0.0)) return b;
  if (b.isConstant(0.0)) return a;
  return Expr::make(Expr::Op::Add, a, b, 0.0, {}, 0);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.isConstant() && b.isConstant()) {
    return Expr::constant(a.constantValue() - b.constantValue());
  }
  if (b.isConstant(0.0)) return a;
  if (a.isConstant(0.0)) return -b;
  return Expr::make(Expr::Op::Sub, a, b, 0.0, {}, 0);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.isConstant() && b.isConstant()) {
    return Expr::constant(a.constantValue() * b.constantValue());
  }
  if (a.isConstant(1.0)) return b;
  if (b.isConstant(1.0)) return a;
  if (a.isConstant(0.0) || b.isConstant(0.0)) return Expr::constant(0.0);
  return Expr::make(Expr::Op::Mul, a, b, 0.0, {}, 0);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.isConstant() && b.isConstant() && b.constantValue() != 0.0) {
    return Expr::constant(a.constantValue() / b.constantValue());
  }
  if (b.isConstant(1.0)) return a;
  return Expr::make(Expr::Op::Div, a, b, 0.0, {}, 0);
}

Expr operator-(const Expr& a) {
  if (a.isConstant()) return Expr::constant(-a.constantValue());
  if (a.op() == Expr::Op::Neg) return a.lhs();
  return Expr::make(Expr::Op::Neg, a, Expr::constant(0.0), 0.0, {}, 0);
}

namespace {

double integerPower(double base, int k) {
  double result = 1.0;
  for (int i = 0; i < std::abs(k); ++i) result *= base;
  return result;
}

}  // namespace

Expr Expr::power(const Expr& base, int k) {
  if (k == 0) return constant(1.0);
  if (k == 1) return base;
  if (base.isConstant() && (k > 0 || base.constantValue() != 0.0)) {
    const double p = integerPower(base.constantValue(), k);
    return constant(k > 0 ? p : 1.0 / p);
  }
  return make(Op::Pow, base, constant(0.0), 0.0, {}, k);
}

Expr Expr::absolute(const Expr& operand) {
  if (operand.isConstant()) return constant(std::fabs(operand.constantValue()));
  return make(Op::Abs, operand, constant(0.0), 0.0, {}, 0);
}

double Expr::eval(std::span<const double> x, std::span<const double> y) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var: {
      const auto& point = n.var.arg == Arg::X ? x : y;
      if (n.var.index >= static_cast<int>(point.size())) {
        throw Error(ErrorKind::DimensionMismatch,
                    "variable " + print(*this) + " is outside a point of dimension " +
                        std::to_string(point.size()));
      }
      return point[static_cast<std::size_t>(n.var.index)];
    }
    case Op::Add:
      return n.a.eval(x, y) + n.b.eval(x, y);
    case Op::Sub:
      return n.a.eval(x, y) - n.b.eval(x, y);
    case Op::Mul:
      return n.a.eval(x, y) * n.b.eval(x, y);
    case Op::Div: {
      const double num = n.a.eval(x, y);
      const double den = n.b.eval(x, y);
      if (den == 0.0) {
        throw Error(ErrorKind::DivisionByZero,
                    "division by zero: denominator '" + print(n.b) + "' evaluates to 0");
      }
      return num / den;
    }
    case Op::Neg:
      return -n.a.eval(x, y);
    case Op::Pow: {
      const double base = n.a.eval(x, y);
      if (n.exponent < 0) {
        if (base == 0.0) {
          throw Error(ErrorKind::DivisionByZero,
                      "division by zero: base '" + print(n.a) +
                          "' of a negative power evaluates to 0");
        }
        return 1.0 / integerPower(base, n.exponent);
      }
      return integerPower(base, n.exponent);
    }
    case Op::Abs:
      return std::fabs(n.a.eval(x, y));
  }
  return 0.0;
}

bool Expr::containsAbs() const {
  switch (op()) {
    case Op::Const:
    case Op::Var:
      return false;
    case Op::Abs:
      return true;
    case Op::Neg:
    case Op::Pow:
      return lhs().containsAbs();
    default:
      return lhs().containsAbs() || rhs().containsAbs();
  }
}

int Expr::maxIndex(Arg arg) const {
  switch (op()) {
    case Op::Const:
      return -1;
    case Op::Var:
      return var().arg == arg ? var().index : -1;
    case Op::Neg:
    case Op::Pow:
    case Op::Abs:
      return lhs().maxIndex(arg);
    default:
      return std::max(lhs().maxIndex(arg), rhs().maxIndex(arg));
  }
}

std::size_t Expr::nodeCount() const {
  switch (op()) {
    case Op::Const:
    case Op::Var:
      return 1;
    case Op::Neg:
    case Op::Pow:
    case Op::Abs:
      return 1 + lhs().nodeCount();
    default:
      return 1 + lhs().nodeCount() + rhs().nodeCount();
  }
}

Expr differentiate(const Expr& e, Variable v) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::Const:
      return Expr::constant(0.0);
    case Op::Var:
      return Expr::constant(e.var() == v ? 1.0 : 0.0);
    case Op::Add:
      return differentiate(e.lhs(), v) + differentiate(e.rhs(), v);
    case Op::Sub:
      return differentiate(e.lhs(), v) - differentiate(e.rhs(), v);
    case Op::Mul:
      return differentiate(e.lhs(), v) * e.rhs() + e.lhs() * differentiate(e.rhs(), v);
    case Op::Div: {
      const Expr& u = e.lhs();
      const Expr& w = e.rhs();
      return (differentiate(u, v) * w - u * differentiate(w, v)) / Expr::power(w, 2);
    }
    case Op::Neg:
      return -differentiate(e.lhs(), v);
    case Op::Pow: {
      const int k = e.exponent();
      return Expr::constant(k) * Expr::power(e.lhs(), k - 1) * differentiate(e.lhs(), v);
    }
    case Op::Abs:
      throw Error(ErrorKind::NonSmoothOperator,
                  "cannot differentiate through abs(" + print(e.lhs()) + ")");
  }
  return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Const:
      return e.constantValue() < 0.0 || std::signbit(e.constantValue()) ? 3 : 5;
    default:
      return 5;
  }
}

std::string formatNumber(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  // Shortest text that reproduces the value exactly.
  for (int digits = 1; digits < 17; ++digits) {
    char probe[32];
    std::snprintf(probe, sizeof probe, "%.*g", digits, value);
    if (std::strtod(probe, nullptr) == value) return probe;
  }
  return buf;
}

void printInto(const Expr& e, std::string& out);

void printChild(const Expr& child, int minPrecedence, std::string& out) {
  if (precedence(child) < minPrecedence) {
    out += '(';
    printInto(child, out);
    out += ')';
  } else {
    printInto(child, out);
  }
}

void printInto(const Expr& e, std::string& out) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::Const:
      out += formatNumber(e.constantValue());
      return;
    case Op::Var:
      out += e.var().arg == Arg::X ? 'x' : 'y';
      out += std::to_string(e.var().index + 1);
      return;
    case Op::Add:
      printChild(e.lhs(), 1, out);
      out += " + ";
      printChild(e.rhs(), 2, out);
      return;
    case Op::Sub:
      printChild(e.lhs(), 1, out);
      out += " - ";
      printChild(e.rhs(), 2, out);
      return;
    case Op::Mul:
      printChild(e.lhs(), 2, out);
      out += '*';
      printChild(e.rhs(), 3, out);
      return;
    case Op::Div:
      printChild(e.lhs(), 2, out);
      out += '/';
      printChild(e.rhs(), 3, out);
      return;
    case Op::Neg:
      out += '-';
      printChild(e.lhs(), 4, out);
      return;
    case Op::Pow:
      printChild(e.lhs(), 5, out);
      out += '^';
      if (e.exponent() < 0) {
        out += '(' + std::to_string(e.exponent()) + ')';
      } else {
        out += std::to_string(e.exponent());
      }
      return;
    case Op::Abs:
      out += "abs(";
      printInto(e.lhs(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  printInto(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   sum     := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' exponent)?
//   exponent:= integer | '-' integer | '(' '-'? integer ')'
//   primary := number | variable | '(' sum ')' | 'abs' '(' sum ')'

namespace detail {

Parser::Parser(std::string_view text, int dim, ParseContext context)
    : text_(text), dim_(dim), context_(context) {}

void Parser::skipSpace() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
}

bool Parser::atEnd() {
  skipSpace();
  return pos_ >= text_.size();
}

void Parser::fail(const std::string& message) const { failAt(pos_, message); }

void Parser::failAt(std::size_t offset, const std::string& message) const {
  throw ParseError(offset, message);
}

bool Parser::match(std::string_view symbol) {
  skipSpace();
  if (text_.substr(pos_, symbol.size()) == symbol) {
    pos_ += symbol.size();
    return true;
  }
  return false;
}

bool Parser::matchWord(std::string_view word) {
  skipSpace();
  if (text_.substr(pos_, word.size()) != word) return false;
  const std::size_t end = pos_ + word.size();
  if (end < text_.size() &&
      (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
    return false;
  }
  pos_ = end;
  return true;
}

Expr Parser::parseExpression() {
  if (atEnd()) fail("empty expression");
  Expr e = parseSum();
  if (!atEnd()) fail(std::string("unexpected '") + text_[pos_] + "'");
  return e;
}

Expr Parser::parseSum() {
  Expr acc = parseTerm();
  for (;;) {
    if (match("+")) {
      acc = acc + parseTerm();
    } else if (match("-")) {
      acc = acc - parseTerm();
    } else {
      return acc;
    }
  }
}

Expr Parser::parseTerm() {
  Expr acc = parseUnary();
  for (;;) {
    if (match("*")) {
      acc = acc * parseUnary();
    } else if (match("/")) {
      acc = acc / parseUnary();
    } else {
      return acc;
    }
  }
}

Expr Parser::parseUnary() {
  if (match("-")) return -parseUnary();
  if (match("+")) return parseUnary();
  return parsePower();
}

Expr Parser::parsePower() {
  Expr base = parsePrimary();
  if (match("^")) return Expr::power(base, parseExponent());
  return base;
}

int Parser::parseExponent() {
  skipSpace();
  const bool parenthesized = match("(");
  const bool negative = match("-");
  skipSpace();
  const std::size_t start = pos_;
  while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  if (start == pos_) fail("expected an integer exponent");
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
  if (ec != std::errc() || value > 64) failAt(start, "exponent out of range");
  if (parenthesized && !match(")")) fail("expected ')'");
  return negative ? -value : value;
}

Expr Parser::parsePrimary() {
  skipSpace();
  if (pos_ >= text_.size()) fail("expected an operand");
  const char c = text_[pos_];
  if (c == '(') {
    ++pos_;
    Expr inner = parseSum();
    if (!match(")")) fail("expected ')'");
    return inner;
  }
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
  if (std::isalpha(static_cast<unsigned char>(c))) return parseIdentifier();
  fail(std::string("expected an operand, found '") + c + "'");
}

Expr Parser::parseNumber() {
  const std::size_t start = pos_;
  while (pos_ < text_.size() &&
         (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
    ++pos_;
  }
  if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
    std::size_t p = pos_ + 1;
    if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
    if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
      pos_ = p;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
  }
  const std::string literal(text_.substr(start, pos_ - start));
  char* end = nullptr;
  const double value = std::strtod(literal.c_str(), &end);
  if (end != literal.c_str() + literal.size() || !std::isfinite(value)) {
    failAt(start, "malformed number '" + literal + "'");
  }
  return Expr::constant(value);
}

Expr Parser::parseIdentifier() {
  const std::size_t start = pos_;
  while (pos_ < text_.size() &&
         (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
    ++pos_;
  }
  const std::string_view name = text_.substr(start, pos_ - start);

  if (name == "abs") {
    if (context_ != ParseContext::Predicate) {
      failAt(start, "abs is only allowed in region predicates");
    }
    if (!match("(")) fail("expected '(' after abs");
    Expr inner = parseSum();
    if (!match(")")) fail("expected ')'");
    return Expr::absolute(inner);
  }

  if (name.front() == 'x' || name.front() == 'y') {
    const Arg arg = name.front() == 'x' ? Arg::X : Arg::Y;
    int index = 0;
    if (name.size() == 1) {
      if (dim_ != 1) failAt(start, "bare '" + std::string(name) + "' requires dimension 1");
      index = 1;
    } else {
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec != std::errc() || ptr != name.data() + name.size()) {
        failAt(start, "unknown identifier '" + std::string(name) + "'");
      }
    }
    if (index < 1 || index > dim_) {
      failAt(start, "variable '" + std::string(name) + "' out of range for dimension " +
                        std::to_string(dim_));
    }
    if (arg == Arg::Y && context_ != ParseContext::Kernel) {
      failAt(start, "second-argument variable '" + std::string(name) +
                        "' is only allowed in kernel expressions");
    }
    return Expr::variable({arg, index - 1});
  }
  failAt(start, "unknown identifier '" + std::string(name) + "'");
}

}  // namespace detail

Expr parse(std::string_view text, int dim, ParseContext context) {
  if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  detail::Parser parser(text, dim, context);
  return parser.parseExpression();
}

}  // namespace vvicert
