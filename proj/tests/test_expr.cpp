#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vvicert/error.hpp"
#include "vvicert/expr.hpp"
#include "vvicert/predicate.hpp"

using namespace vvicert;

namespace {

double at(const Expr& e, double x) {
  const double p[] = {x};
  return e.eval(p);
}

Expr fn(const char* text, int dim = 1) { return parse(text, dim, ParseContext::Function); }

}  // namespace

TEST_CASE("parse and evaluate polynomial pieces") {
  CHECK(at(fn("4*x1 - x1^2"), 2.0) == 4.0);
  CHECK(at(fn("x1^2 - 2*x1"), 1.0) == -1.0);
  CHECK(at(fn("4*x1 - x1^2"), 0.5) == 1.75);

  const Expr f1 = fn("-x1^3 - x1^2 + 5*x1");
  for (double x : {-0.7, 0.0, 0.3, 1.0, 2.5}) {
    CHECK(at(f1, x) == doctest::Approx(-x * x * x - x * x + 5 * x).epsilon(1e-15));
  }
}

TEST_CASE("parse errors carry the offset") {
  try {
    parse("x1 +", 1, ParseContext::Function);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("", 1, ParseContext::Function), ParseError);
  CHECK_THROWS_AS(parse("x3", 2, ParseContext::Function), ParseError);
  CHECK_THROWS_AS(parse("x0", 2, ParseContext::Function), ParseError);
  CHECK_THROWS_AS(parse("sin(x1)", 1, ParseContext::Function), ParseError);
  CHECK_THROWS_AS(parse("abs(x1)", 1, ParseContext::Function), ParseError);
  CHECK_THROWS_AS(parse("y1 - x1", 1, ParseContext::Function), ParseError);
  CHECK_THROWS_AS(parse("x1^0.5", 1, ParseContext::Function), ParseError);
  CHECK_THROWS_AS(parse("(x1 + 1", 1, ParseContext::Function), ParseError);
}

TEST_CASE("context rules for y variables and abs") {
  const Expr k = parse("x1 - y1", 1, ParseContext::Kernel);
  const double x[] = {3.0};
  const double y[] = {1.0};
  CHECK(k.eval(x, y) == 2.0);
  const Expr a = parse("abs(x1 - 2)", 1, ParseContext::Predicate);
  CHECK(at(a, -1.0) == 3.0);
  CHECK(a.containsAbs());
  CHECK(at(fn("x^2"), 3.0) == 9.0);
}

TEST_CASE("division by zero names the denominator") {
  const Expr e = fn("x1/x1");
  try {
    at(e, 0.0);
    FAIL("expected DivisionByZero");
  } catch (const Error& err) {
    CHECK(bool(err.kind() == ErrorKind::DivisionByZero));
    CHECK(std::string(err.what()).find("x1") != std::string::npos);
  }
  CHECK(at(e, 2.0) == 1.0);
  const Expr literal = fn("1/0");
  CHECK_THROWS_AS(at(literal, 1.0), Error);
}

TEST_CASE("symbolic derivatives of the fixture formulas") {
  const Variable x1{Arg::X, 0};
  const Expr d = differentiate(fn("-x1^3 - x1^2 + 5*x1"), x1);
  for (double x : {-1.0, -0.2, 0.0, 0.4, 1.0}) {
    CHECK(at(d, x) == doctest::Approx(-3 * x * x - 2 * x + 5).epsilon(1e-15));
  }
  const Expr d2 = differentiate(fn("x1^2 - 2*x1"), x1);
  CHECK(at(d2, 1.0) == 0.0);
  CHECK(at(differentiate(fn("4*x1 - x1^2"), x1), 0.0) == 4.0);
  const Expr c = differentiate(fn("7"), x1);
  CHECK(c.isConstant(0.0));
  CHECK_THROWS_AS(differentiate(parse("abs(x1)", 1, ParseContext::Predicate), x1), Error);
  CHECK(differentiate(fn("x1*x2", 2), Variable{Arg::X, 1}).maxIndex(Arg::X) == 0);
}

TEST_CASE("random expressions agree with an independent evaluator") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    testsupport::RandomExpression r(rng, dim, 4);
    const Expr e = parse(r.text(), dim, ParseContext::Function);
    for (int k = 0; k < 5; ++k) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      for (double& v : x) v = testsupport::uniform(rng, -2.0, 2.0);
      const double want = r.eval(x);
      CHECK(e.eval(x) == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("print round-trips at random points") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    testsupport::RandomExpression r(rng, dim, 5);
    const Expr e = parse(r.text(), dim, ParseContext::Function);
    const Expr back = parse(print(e), dim, ParseContext::Function);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      for (double& v : x) v = testsupport::uniform(rng, -2.0, 2.0);
      const double a = e.eval(x);
      const double b = back.eval(x);
      REQUIRE(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
    }
  }
}

TEST_CASE("derivatives match central differences and are linear") {
  std::mt19937_64 rng(13);
  const double h = 1e-5;
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    testsupport::RandomExpression ra(rng, dim, 3);
    testsupport::RandomExpression rb(rng, dim, 3);
    const Expr a = parse(ra.text(), dim, ParseContext::Function);
    const Expr b = parse(rb.text(), dim, ParseContext::Function);
    const Variable v{Arg::X, static_cast<int>(rng() % static_cast<std::uint64_t>(dim))};
    const Expr da = differentiate(a, v);
    const Expr dsum = differentiate(a + b, v);
    const Expr db = differentiate(b, v);
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (double& c : x) c = testsupport::uniform(rng, -1.0, 1.0);
    std::vector<double> xp = x, xm = x;
    xp[static_cast<std::size_t>(v.index)] += h;
    xm[static_cast<std::size_t>(v.index)] -= h;
    const double fd = (ra.eval(xp) - ra.eval(xm)) / (2 * h);
    const double sym = da.eval(x);
    CHECK(std::fabs(sym - fd) <= 1e-6 * std::max(1.0, std::fabs(fd)));
    CHECK(dsum.eval(x) == doctest::Approx(da.eval(x) + db.eval(x)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("predicates") {
  const Predicate p = parsePredicate("x1 >= 0 and x2 < 1", 2);
  const double a[] = {0.0, 0.5};
  const double b[] = {-1e-8, 0.5};
  CHECK(p.holds(a));
  CHECK_FALSE(p.holds(b));
  CHECK(p.holds(b, 1e-7));
  const Predicate eq = parsePredicate("x1 = 1", 1);
  const double near[] = {1.0 + 5e-10};
  const double far[] = {1.0 + 5e-9};
  CHECK(eq.holds(near));
  CHECK_FALSE(eq.holds(far));
  const Predicate nested = parsePredicate("(x1 + 1) >= 0 or (abs(x1) <= 0.5 && true)", 1);
  const double mid[] = {-0.3};
  const double low[] = {-2.0};
  CHECK(nested.holds(mid));
  CHECK_FALSE(nested.holds(low));
  CHECK(parsePredicate("x1 ≥ 0", 1).holds(a));
  CHECK_THROWS_AS(parsePredicate("x1", 1), ParseError);
  CHECK_THROWS_AS(parsePredicate("x1 >= 0 and", 1), ParseError);
  const Predicate back = parsePredicate(print(p), 2);
  CHECK(back.holds(a));
  CHECK_FALSE(back.holds(b));
}
