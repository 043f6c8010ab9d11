#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "vvicert/expr.hpp"

namespace vvicert {

/// Absolute tolerance applied to `=` comparisons.
inline constexpr double kEqualityTolerance = 1e-9;

enum class Comparison { Less, LessEqual, Equal, GreaterEqual, Greater };

/// Boolean combination of comparisons between expressions; describes the
/// region on which a function piece is active.
class Predicate {
 public:
  enum class Kind { True, Compare, And, Or };

  Predicate();  // always true

  static Predicate always();
  static Predicate compare(Expr lhs, Comparison cmp, Expr rhs);
  static Predicate conjunction(Predicate a, Predicate b);
  static Predicate disjunction(Predicate a, Predicate b);

  Kind kind() const;

  /// Evaluate at `x`. Every comparison is relaxed by `slack` in the
  /// direction that enlarges the region, so `slack > 0` evaluates the
  /// region inflated by roughly that distance in value space.
  bool holds(std::span<const double> x, double slack = 0.0) const;

  int maxIndex() const;

  friend std::string print(const Predicate& p);

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Parse comparisons joined by `and`/`or` (also `&&`, `||`), with
/// parentheses. `abs(...)` is allowed inside the compared expressions.
Predicate parsePredicate(std::string_view text, int dim);

std::string print(const Predicate& p);

}  // namespace vvicert
