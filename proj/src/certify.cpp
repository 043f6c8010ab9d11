#include "vvicert/certify.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "vvicert/error.hpp"
#include "vvicert/sampling.hpp"

namespace vvicert {

const char* toString(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Refuted: return "Refuted";
    case VerdictStatus::CertifiedUpToSampling: return "CertifiedUpToSampling";
    case VerdictStatus::Inapplicable: return "Inapplicable";
  }
  return "Inapplicable";
}

const char* toString(VviVariant v) {
  switch (v) {
    case VviVariant::SVVI: return "SVVI";
    case VviVariant::MVVI: return "MVVI";
    case VviVariant::WSVVI: return "WSVVI";
    case VviVariant::WMVVI: return "WMVVI";
  }
  return "SVVI";
}

const char* toString(InvexClass c) {
  switch (c) {
    case InvexClass::Invex: return "invex";
    case InvexClass::PseudoI: return "pseudo1";
    case InvexClass::PseudoII: return "pseudo2";
    case InvexClass::QuasiI: return "quasi1";
    case InvexClass::QuasiII: return "quasi2";
  }
  return "invex";
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool isWeak(VviVariant v) { return v == VviVariant::WSVVI || v == VviVariant::WMVVI; }
bool isMinty(VviVariant v) { return v == VviVariant::MVVI || v == VviVariant::WMVVI; }

// Images A_i * eta of the polytope vertices.
std::vector<Vector> vertexImages(const JacobianPolytope& poly, const Vector& eta) {
  std::vector<Vector> images;
  images.reserve(poly.vertices.size());
  for (const Matrix& A : poly.vertices) images.push_back(A * eta);
  return images;
}

// Does some point of the (gridded) hull of `images` satisfy `test`? The
// grid starts at the pure vertices' first entry and always contains every
// vertex.
bool anyOnGrid(const std::vector<Vector>& images, int depth,
               const std::function<bool(const Vector&)>& test) {
  for (const Vector& v : images) {
    if (test(v)) return true;
  }
  if (images.size() == 1) return false;
  for (const Vector& w : simplexGrid(static_cast<int>(images.size()), depth)) {
    Vector mixed = Vector::Zero(images.front().size());
    for (std::size_t i = 0; i < images.size(); ++i) mixed += w(static_cast<Eigen::Index>(i)) * images[i];
    if (test(mixed)) return true;
  }
  return false;
}

bool allOf(const std::vector<Vector>& images, const std::function<bool(const Vector&)>& test) {
  return std::all_of(images.begin(), images.end(), test);
}

void requireE(const OrderingCone& cone, const Vector& e) {
  if (e.size() != cone.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "e has dimension " + std::to_string(e.size()) + ", expected " + std::to_string(cone.dim()));
  }
  if (!cone.validateE(e)) throw Error(ErrorKind::InvalidE, "e is not strictly inside the ordering cone");
}

void requireBall(const PiecewiseVectorFn& f, const Vector& center, double r) {
  f.requireInDomain(center);
  if (!(r > 0.0)) throw Error(ErrorKind::Validation, "radius must be positive");
  if (!f.domain().containsBall(center, r)) {
    throw Error(ErrorKind::OutOfDomain, "the ball of radius " + std::to_string(r) +
                                            " around the base point leaves the domain");
  }
}

SamplingStats baseStats(const SamplingPlan& plan, double radius) {
  SamplingStats s;
  s.seed = plan.seed;
  s.radius = radius;
  s.gridDepth = plan.simplexGridDepth;
  return s;
}

Verdict refutedAt(std::string check, SamplingStats stats, const Vector& x,
                  std::optional<Vector> y, std::string reason) {
  Verdict v;
  v.status = VerdictStatus::Refuted;
  v.check = std::move(check);
  v.witnessX = x;
  v.witnessY = std::move(y);
  v.stats = stats;
  v.reason = std::move(reason);
  return v;
}

Verdict certifiedWith(std::string check, SamplingStats stats, std::string reason) {
  Verdict v;
  v.status = VerdictStatus::CertifiedUpToSampling;
  v.check = std::move(check);
  v.stats = stats;
  v.reason = std::move(reason);
  return v;
}

}  // namespace

VviVariant parseVariant(const std::string& name) {
  const std::string s = lower(name);
  if (s == "svvi") return VviVariant::SVVI;
  if (s == "mvvi") return VviVariant::MVVI;
  if (s == "wsvvi") return VviVariant::WSVVI;
  if (s == "wmvvi") return VviVariant::WMVVI;
  throw Error(ErrorKind::Usage, "unknown variant '" + name + "' (svvi, mvvi, wsvvi, wmvvi)");
}

InvexClass parseInvexClass(const std::string& name) {
  const std::string s = lower(name);
  if (s == "invex") return InvexClass::Invex;
  if (s == "pseudo1" || s == "pseudoi") return InvexClass::PseudoI;
  if (s == "pseudo2" || s == "pseudoii") return InvexClass::PseudoII;
  if (s == "quasi1" || s == "quasii") return InvexClass::QuasiI;
  if (s == "quasi2" || s == "quasiii") return InvexClass::QuasiII;
  throw Error(ErrorKind::Usage, "unknown class '" + name + "' (invex, pseudo1, pseudo2, quasi1, quasi2)");
}

Verdict inapplicable(std::string check, std::string reason) {
  Verdict v;
  v.status = VerdictStatus::Inapplicable;
  v.check = std::move(check);
  v.reason = std::move(reason);
  return v;
}

// ---------------------------------------------------------------------------

bool violatesQuasiEfficiency(const CheckContext& ctx, const Vector& e, const Vector& xi,
                             const Vector& x, bool weak) {
  const double etaNorm = ctx.kernel.eval(x, xi).norm();
  const Vector lhs = ctx.f.eval(x) + e * etaNorm;
  const Vector rhs = ctx.f.eval(xi);
  return weak ? ctx.cone.lt(lhs, rhs) : ctx.cone.leq(lhs, rhs);
}

bool violatesVVI(const CheckContext& ctx, VviVariant variant, const Vector& xi, const Vector& x,
                 Quantifier quantifier, int gridDepth) {
  const Vector eta = ctx.kernel.eval(x, xi);
  const JacobianPolytope poly = ctx.f.clarkeJacobian(isMinty(variant) ? x : xi);
  const auto images = vertexImages(poly, eta);
  const bool strict = isWeak(variant);
  auto test = [&](const Vector& v) -> bool {
    return strict ? ctx.cone.strictlyContains(-v) : ctx.cone.contains(-v);
  };
  return quantifier == Quantifier::ForAll ? allOf(images, test)
                                          : anyOnGrid(images, gridDepth, test);
}

bool violatesInvexClass(const CheckContext& ctx, InvexClass cls, const Vector& e, const Vector& x,
                        const Vector& y, int gridDepth) {
  const OrderingCone& C = ctx.cone;
  const Vector eta = ctx.kernel.eval(x, y);
  const Vector slackE = e * eta.norm();
  const Vector delta = ctx.f.eval(x) - ctx.f.eval(y);
  const JacobianPolytope poly = ctx.f.clarkeJacobian(y);
  const auto images = vertexImages(poly, eta);

  switch (cls) {
    case InvexClass::Invex:
      // f(x) - f(y) >=_C A eta - e|eta| for every A
      return !allOf(images, [&](const Vector& v) { return C.contains(delta - v + slackE); });
    case InvexClass::PseudoI: {
      // f(x) - f(y) <_C -e|eta|  =>  A eta <_C 0 for every A
      if (!C.strictlyContains(-slackE - delta)) return false;
      return !allOf(images, [&](const Vector& v) { return C.strictlyContains(-v); });
    }
    case InvexClass::PseudoII: {
      // f(x) - f(y) <_C 0  =>  A eta + e|eta| <_C 0 for every A
      if (!C.strictlyContains(-delta)) return false;
      return !allOf(images, [&](const Vector& v) { return C.strictlyContains(-(v + slackE)); });
    }
    case InvexClass::QuasiI: {
      // (exists A: A eta - e|eta| >_C 0)  =>  f(x) - f(y) >_C 0
      const bool premise =
          anyOnGrid(images, gridDepth, [&](const Vector& v) { return C.strictlyContains(v - slackE); });
      return premise && !C.strictlyContains(delta);
    }
    case InvexClass::QuasiII: {
      // (exists A: A eta >_C 0)  =>  f(x) >_C f(y) + e|eta|
      const bool premise =
          anyOnGrid(images, gridDepth, [&](const Vector& v) { return C.strictlyContains(v); });
      return premise && !C.strictlyContains(delta - slackE);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

Verdict checkQuasiEfficient(const CheckContext& ctx, const Vector& e, const Vector& xi, double r,
                            bool weak, const SamplingPlan& plan) {
  requireE(ctx.cone, e);
  requireBall(ctx.f, xi, r);
  const std::string check = weak ? "quasi-weak-efficiency" : "quasi-efficiency";
  SamplingStats stats = baseStats(plan, r);

  auto visit = [&](const Vector& x) -> bool {
    if (plan.excludeZeroEta && ctx.kernel.eval(x, xi).norm() <= kZeroEtaTolerance) {
      ++stats.skipped;
      return false;
    }
    ++stats.evaluated;
    return violatesQuasiEfficiency(ctx, e, xi, x, weak);
  };

  for (const Vector& x : plan.extraPoints) {
    if ((x - xi).norm() < r && visit(x)) {
      return refutedAt(check, stats, x, std::nullopt,
                       "f(x) + e|eta(x, xi)| is dominated by f(xi) at the witness x");
    }
  }
  BallSampler ball(xi, r, plan.seed);
  for (int s = 0; s < plan.ballSampleCount; ++s) {
    const Vector x = ball.next();
    if (visit(x)) {
      return refutedAt(check, stats, x, std::nullopt,
                       "f(x) + e|eta(x, xi)| is dominated by f(xi) at the witness x");
    }
  }
  return certifiedWith(check, stats, "no sampled x in B(xi, r) violates the definition");
}

Verdict checkVVI(const CheckContext& ctx, VviVariant variant, const Vector& xi,
                 const SamplingPlan& plan) {
  ctx.f.requireInDomain(xi);
  const std::string check = std::string("vvi:") + toString(variant);
  Box search = plan.searchBox.value_or(ctx.f.domain());
  const Vector lo = search.lower.cwiseMax(ctx.f.domain().lower).array() + kDomainInset;
  const Vector hi = search.upper.cwiseMin(ctx.f.domain().upper).array() - kDomainInset;
  if (((hi - lo).array() <= 0.0).any()) {
    throw Error(ErrorKind::OutOfDomain, "the search box does not meet the domain");
  }
  SamplingStats stats = baseStats(plan, 0.0);

  // The Stampacchia forms only need the polytope at xi once.
  std::optional<JacobianPolytope> atXi;
  if (!isMinty(variant)) atXi = ctx.f.clarkeJacobian(xi);
  const bool strict = isWeak(variant);

  auto visit = [&](const Vector& x) -> bool {
    const Vector eta = ctx.kernel.eval(x, xi);
    if (plan.excludeZeroEta && eta.norm() <= kZeroEtaTolerance) {
      ++stats.skipped;
      return false;
    }
    ++stats.evaluated;
    if (!atXi) return violatesVVI(ctx, variant, xi, x, plan.vviQuantifier, plan.simplexGridDepth);
    const auto images = vertexImages(*atXi, eta);
    auto test = [&](const Vector& v) -> bool {
      return strict ? ctx.cone.strictlyContains(-v) : ctx.cone.contains(-v);
    };
    return plan.vviQuantifier == Quantifier::ForAll ? allOf(images, test)
                                                    : anyOnGrid(images, plan.simplexGridDepth, test);
  };

  const std::string why = "A eta(x, xi) lies in -C for the Jacobian elements at the witness x";
  for (const Vector& x : plan.extraPoints) {
    if (ctx.f.domain().containsInterior(x) && visit(x)) return refutedAt(check, stats, x, std::nullopt, why);
  }
  BoxSampler box(lo, hi, plan.seed);
  for (int s = 0; s < plan.ballSampleCount; ++s) {
    const Vector x = box.next();
    if (visit(x)) return refutedAt(check, stats, x, std::nullopt, why);
  }
  return certifiedWith(check, stats, "no sampled x satisfies the inequality system; xi solves it up to sampling");
}

Verdict checkInvexClass(const CheckContext& ctx, InvexClass cls, const Vector& e, const Vector& x0,
                        double r, const SamplingPlan& plan) {
  requireE(ctx.cone, e);
  requireBall(ctx.f, x0, r);
  const std::string check = std::string("invex:") + toString(cls);
  SamplingStats stats = baseStats(plan, r);
  const std::string why = "the defining implication fails at the witness pair (x, y)";

  auto visit = [&](const Vector& x, const Vector& y) -> bool {
    ++stats.evaluated;
    return violatesInvexClass(ctx, cls, e, x, y, plan.simplexGridDepth);
  };

  for (const auto& [x, y] : plan.extraPairs) {
    if ((x - x0).norm() < r && (y - x0).norm() < r && visit(x, y)) {
      return refutedAt(check, stats, x, y, why);
    }
  }
  // In every block of four, the first pair has x = x0 and the second y = x0.
  PairSampler pairs(x0, r, plan.seed);
  for (int s = 0; s < plan.pairSampleCount; ++s) {
    auto [x, y] = pairs.next();
    if (s % 4 == 0) x = x0;
    if (s % 4 == 1) y = x0;
    if (visit(x, y)) return refutedAt(check, stats, x, y, why);
  }
  return certifiedWith(check, stats, "no sampled pair in B(x0, r)^2 violates the definition");
}

}  // namespace vvicert
