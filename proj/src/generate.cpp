#include "vvicert/generate.hpp"

#include <cmath>
#include <random>

#include "vvicert/error.hpp"
#include "vvicert/sampling.hpp"

namespace vvicert {

namespace {

constexpr int kMaxAttempts = 8;

double rounded(double v, double step) { return std::round(v / step) * step; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unitUniform(rng); }

Expr x(int i) { return Expr::variable({Arg::X, i}); }

// Exponent tuples of total degree <= d in n variables, degree 0 first.
void monomials(int n, int d, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n) {
    out.push_back(current);
    return;
  }
  int used = 0;
  for (int k : current) used += k;
  for (int k = 0; k + used <= d; ++k) {
    current.push_back(k);
    monomials(n, d, current, out);
    current.pop_back();
  }
}

Expr randomPolynomial(std::mt19937_64& rng, int n, int degree, bool withConstant) {
  std::vector<int> scratch;
  std::vector<std::vector<int>> terms;
  monomials(n, degree, scratch, terms);
  Expr sum;
  bool any = false;
  for (const auto& powers : terms) {
    int total = 0;
    for (int k : powers) total += k;
    if (total == 0 && !withConstant) continue;
    if (unitUniform(rng) < 0.4) continue;
    const double c = rounded(uniform(rng, -2.0, 2.0), 0.01);
    if (c == 0.0) continue;
    Expr term = Expr::constant(c);
    for (int i = 0; i < n; ++i) {
      if (powers[static_cast<std::size_t>(i)] > 0) term = term * Expr::power(x(i), powers[static_cast<std::size_t>(i)]);
    }
    sum = any ? sum + term : term;
    any = true;
  }
  if (!any) sum = Expr::constant(rounded(uniform(rng, 0.5, 2.0), 0.01)) * x(0);
  return sum;
}

Problem attempt(const RandomInstanceSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = spec.n;

  // Unit normal a (rounded), the level function L = a.x, and thresholds.
  Vector a(n);
  do {
    for (int i = 0; i < n; ++i) a(i) = uniform(rng, -1.0, 1.0);
  } while (a.norm() < 0.2);
  a /= a.norm();
  for (int i = 0; i < n; ++i) a(i) = rounded(a(i), 0.001);
  if (n == 1) a(0) = a(0) < 0 ? -1.0 : 1.0;
  Expr level;
  for (int i = 0; i < n; ++i) {
    if (a(i) != 0.0) level = level + Expr::constant(a(i)) * x(i);
  }
  std::vector<double> cuts{0.0};
  if (spec.pieces == 3) cuts.push_back(rounded(uniform(rng, 0.2, 0.6), 0.01));

  std::vector<std::vector<Expr>> components(static_cast<std::size_t>(spec.pieces));
  for (int i = 0; i < spec.m; ++i) components[0].push_back(randomPolynomial(rng, n, spec.degree, false));
  for (int k = 1; k < spec.pieces; ++k) {
    const Expr gap = level - Expr::constant(cuts[static_cast<std::size_t>(k - 1)]);
    for (int i = 0; i < spec.m; ++i) {
      const Expr q = randomPolynomial(rng, n, spec.degree - 1, true);
      components[static_cast<std::size_t>(k)].push_back(
          components[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)] + gap * q);
    }
  }

  std::vector<Piece> pieces;
  for (int k = 0; k < spec.pieces; ++k) {
    Predicate region;
    if (spec.pieces > 1) {
      const auto K = static_cast<std::size_t>(k);
      if (k == 0) {
        region = Predicate::compare(level, Comparison::LessEqual, Expr::constant(cuts[0]));
      } else if (k == spec.pieces - 1) {
        region = Predicate::compare(level, Comparison::GreaterEqual, Expr::constant(cuts[K - 1]));
      } else {
        region = Predicate::conjunction(
            Predicate::compare(level, Comparison::GreaterEqual, Expr::constant(cuts[K - 1])),
            Predicate::compare(level, Comparison::LessEqual, Expr::constant(cuts[K])));
      }
    }
    pieces.push_back(PiecewiseVectorFn::makePiece(region, components[static_cast<std::size_t>(k)], n));
  }

  Box domain{Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)};
  PiecewiseVectorFn f(n, spec.m, domain, std::move(pieces));
  Kernel kernel = spec.kernel == Kernel::Kind::NegNormDifference ? Kernel::negNormDifference(n)
                                                                 : Kernel::difference(n);
  Vector e(spec.m);
  for (int i = 0; i < spec.m; ++i) e(i) = rounded(uniform(rng, spec.eLow, spec.eHigh), 0.01);
  e = e.cwiseMax(spec.eLow);

  return Problem{"random-" + std::to_string(spec.seed),
                 std::move(f),
                 OrderingCone::orthant(spec.m),
                 std::move(kernel),
                 std::move(e),
                 {{"xi", Vector::Zero(n)}},
                 {}};
}

}  // namespace

Problem generateInstance(const RandomInstanceSpec& spec) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorKind::GenerationFailed, "seed " + std::to_string(spec.seed) + ": " + why);
  };
  if (spec.pieces < 1 || spec.pieces > 3) throw fail("piece count must be in 1..3");
  if (spec.n < 1 || spec.n > 3 || spec.m < 1 || spec.m > 3) throw fail("dimensions must be in 1..3");
  if (spec.degree < 1 || spec.degree > 3) throw fail("degree must be in 1..3");
  if (!(spec.eLow > 0.0) || spec.eHigh < spec.eLow) throw fail("e range must be positive and ordered");
  if (spec.kernel == Kernel::Kind::Custom) throw fail("random custom kernels are not supported");

  std::string last;
  for (int k = 0; k < kMaxAttempts; ++k) {
    const std::uint64_t seed = spec.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(k);
    try {
      Problem p = attempt(spec, seed);
      bool clean = true;
      for (const ModelIssue& issue : checkModelInvariants(p.f, 500, seed)) {
        clean = false;
        last = issue.invariant + ": " + issue.message;
      }
      if (clean) return p;
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw fail("no candidate passed the model invariants after " + std::to_string(kMaxAttempts) +
             " attempts (last: " + last + ")");
}

}  // namespace vvicert
