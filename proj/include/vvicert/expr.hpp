#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "vvicert/error.hpp"

namespace vvicert {

/// Where an expression string is allowed to appear. Kernel expressions may
/// reference the second argument (y1..yn); predicate expressions may use abs.
enum class ParseContext { Function, Kernel, Predicate };

enum class Arg { X, Y };

/// A free variable: `index` is zero-based, so x1 is {Arg::X, 0}.
struct Variable {
  Arg arg = Arg::X;
  int index = 0;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Immutable expression tree over rational operations and integer powers.
/// Copies share structure; values are safe to evaluate concurrently.
class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Abs };

  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable(Variable v);

  // Constructors that fold constants and drop additive/multiplicative
  // identities. Division by a literal zero is kept so evaluation reports it.
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  static Expr power(const Expr& base, int exponent);
  static Expr absolute(const Expr& operand);

  Op op() const;
  double constantValue() const;  // Op::Const only
  Variable var() const;          // Op::Var only
  int exponent() const;          // Op::Pow only
  const Expr& lhs() const;       // binary ops; also the operand of Neg/Pow/Abs
  const Expr& rhs() const;       // binary ops only

  bool isConstant() const { return op() == Op::Const; }
  bool isConstant(double value) const {
    return isConstant() && constantValue() == value;
  }

  /// Evaluate at `x` (and `y` for kernel expressions). Throws
  /// Error(DivisionByZero) naming the offending denominator, or
  /// Error(DimensionMismatch) if a variable index exceeds the point size.
  double eval(std::span<const double> x, std::span<const double> y = {}) const;

  bool containsAbs() const;
  /// Largest zero-based index of `arg` that occurs, or -1.
  int maxIndex(Arg arg) const;
  std::size_t nodeCount() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  static Expr make(Op op, Expr a, Expr b, double value, Variable v, int k);

  std::shared_ptr<const Node> node_;
};

/// Parse `text` over variables x1..x`dim` (plus y1..y`dim` in kernel
/// context). With dim == 1 the bare names `x` and `y` are accepted as
/// aliases. Throws ParseError with the byte offset of the problem.
Expr parse(std::string_view text, int dim, ParseContext context);

/// Symbolic partial derivative with respect to `var`. Throws
/// Error(NonSmoothOperator) if an abs node is reached.
Expr differentiate(const Expr& e, Variable var);

/// Text that parses back to an expression with identical values.
std::string print(const Expr& e);

}  // namespace vvicert
