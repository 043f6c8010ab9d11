#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vvicert/cone.hpp"
#include "vvicert/model.hpp"

namespace vvicert {

/// |eta| at or below this counts as eta = 0 for the exclusion rule.
inline constexpr double kZeroEtaTolerance = 1e-12;
/// Simplex grid depth for existential quantifiers over the Jacobian hull.
inline constexpr int kDefaultGridDepth = 8;

enum class VerdictStatus { Refuted, CertifiedUpToSampling, Inapplicable };

const char* toString(VerdictStatus s);

struct NamedVector {
  std::string name;
  Vector value;
};

/// Effort and tolerances behind a verdict.
struct SamplingStats {
  int evaluated = 0;  // points or pairs tested
  int skipped = 0;    // excluded because eta vanished
  std::uint64_t seed = 0;
  double radius = 0.0;
  int gridDepth = 0;
  double membershipTolerance = kMembershipTolerance;
  double strictMargin = kStrictMargin;
  double activeTolerance = kActiveTolerance;
};

/// Outcome of a semi-decision check. A Refuted verdict carries a witness
/// (a point x, or a pair (x, y) for invexity classes) that can be replayed;
/// CertifiedUpToSampling is never a proof.
struct Verdict {
  VerdictStatus status = VerdictStatus::Inapplicable;
  std::string check;
  std::optional<Vector> witnessX;
  std::optional<Vector> witnessY;
  std::vector<NamedVector> evidence;
  SamplingStats stats;
  std::string reason;

  bool refuted() const { return status == VerdictStatus::Refuted; }
  bool certified() const { return status == VerdictStatus::CertifiedUpToSampling; }
};

Verdict inapplicable(std::string check, std::string reason);

/// Reading of "there is no x with A eta(x, xi) <=_C 0 for all A": the
/// default ForAll requires every Jacobian element to satisfy the cone
/// inequality at the witness; Exists accepts one element of the hull.
enum class Quantifier { ForAll, Exists };

/// Deterministic description of the samples a checker draws. Extra points
/// and pairs are tested first, in order, before the generated samples.
struct SamplingPlan {
  std::uint64_t seed = 42;
  int ballSampleCount = 10000;
  int pairSampleCount = 10000;
  std::optional<Box> searchBox;
  int simplexGridDepth = kDefaultGridDepth;
  bool excludeZeroEta = true;
  Quantifier vviQuantifier = Quantifier::ForAll;
  std::vector<Vector> extraPoints;
  std::vector<std::pair<Vector, Vector>> extraPairs;
};

enum class VviVariant { SVVI, MVVI, WSVVI, WMVVI };
enum class InvexClass { Invex, PseudoI, PseudoII, QuasiI, QuasiII };

const char* toString(VviVariant v);
const char* toString(InvexClass c);
VviVariant parseVariant(const std::string& name);
InvexClass parseInvexClass(const std::string& name);

/// Shared inputs of every checker.
struct CheckContext {
  const PiecewiseVectorFn& f;
  const Kernel& kernel;
  const OrderingCone& cone;
};

// --- Point predicates. The sampling checkers below are loops over these;
// --- they are public so witnesses can be replayed independently.

/// f(x) + e |eta(x, xi)| <=_C f(xi)  (<_C when weak).
bool violatesQuasiEfficiency(const CheckContext& ctx, const Vector& e, const Vector& xi,
                             const Vector& x, bool weak);

/// A eta(x, xi) <=_C 0 (<_C for weak variants) over the Jacobian polytope at
/// xi (Stampacchia) or at x (Minty), read with `quantifier`.
bool violatesVVI(const CheckContext& ctx, VviVariant variant, const Vector& xi, const Vector& x,
                 Quantifier quantifier, int gridDepth);

/// The defining implication of `cls` fails at the pair (x, y).
bool violatesInvexClass(const CheckContext& ctx, InvexClass cls, const Vector& e,
                        const Vector& x, const Vector& y, int gridDepth);

// --- Sampling checkers.

/// Local (eta, e)-quasi (weak) efficiency of xi on B(xi, r).
Verdict checkQuasiEfficient(const CheckContext& ctx, const Vector& e, const Vector& xi, double r,
                            bool weak, const SamplingPlan& plan);

/// xi solves the variational inequality `variant` over the search box.
Verdict checkVVI(const CheckContext& ctx, VviVariant variant, const Vector& xi,
                 const SamplingPlan& plan);

/// f belongs to `cls` at x0 with radius r, tested on pairs from B(x0, r)^2.
Verdict checkInvexClass(const CheckContext& ctx, InvexClass cls, const Vector& e,
                        const Vector& x0, double r, const SamplingPlan& plan);

// --- Theorems of the alternative and criticality.

struct GordanResult {
  enum class Alternative { Primal, Dual };
  Alternative which = Alternative::Primal;
  Vector x;  // A x <_C 0          (Primal)
  Vector y;  // A^T y = 0, y in C*, y != 0 (Dual); sums to 1 for the orthant
  double primalValue = 0.0;  // best margin t with (N A x)_i <= -t, |x|_inf <= 1
  double dualValue = 0.0;    // min |A^T y|_inf over normalized dual multipliers
};

/// Exactly one of: x with A x <_C 0, or nonzero y in the dual cone with
/// A^T y = 0. For the orthant the dual cone is the orthant itself. Throws
/// Error(Degenerate) when the two linear programs do not separate cleanly
/// or a certificate fails re-verification.
GordanResult gordanAlternative(const Matrix& A, const OrderingCone& cone);

bool verifyGordanPrimal(const Matrix& A, const OrderingCone& cone, const Vector& x);
bool verifyGordanDual(const Matrix& A, const OrderingCone& cone, const Vector& y);

/// A multiplier mu strictly inside the dual cone with mu^T A = 0, normalized
/// so the generator coordinates sum to 1 (plain sum for the orthant), or
/// nothing if none exists with the cone's strictness margin.
std::optional<Vector> criticalMultiplier(const Matrix& A, const OrderingCone& cone);

/// Searches the simplex grid over the Jacobian polytope at xi for a matrix
/// admitting a strictly positive multiplier. Certified carries (lambda, mu);
/// Refuted carries the Gordan outcome for the first grid matrix.
Verdict checkVectorCritical(const PiecewiseVectorFn& f, const Vector& xi, const OrderingCone& cone,
                            const SamplingPlan& plan);

}  // namespace vvicert
