#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vvicert/certify.hpp"
#include "vvicert/problem.hpp"

namespace vvicert {

enum class CheckKind { QuasiEfficiency, QuasiWeakEfficiency, VVI, Invex, Critical };

/// How a refuting witness x of a rule's conclusion is fed back into a
/// hypothesis check before a violation is declared.
enum class Replay {
  None,
  Point,        // x as an extra sample point
  PairToBase,   // the pair (x, xi)
  PairFromBase  // the pair (xi, x)
};

/// One certify call, parameterized by the problem and base point at run time.
struct CheckSpec {
  CheckKind kind = CheckKind::QuasiEfficiency;
  VviVariant variant = VviVariant::SVVI;
  InvexClass invexClass = InvexClass::Invex;
  bool onNegated = false;  // run on -f
  Replay replay = Replay::None;
};

std::string describe(const CheckSpec& spec);

struct TheoremRule {
  std::string id;
  std::string summary;
  std::vector<std::string> kernelFlags;  // subset of skew, firstArgAffine, vanishesOnDiagonal
  std::vector<CheckSpec> hypotheses;
  CheckSpec conclusion;
  /// Move a refuting witness x of the conclusion to xi + t (x - xi) inside
  /// B(xi, r / 2) before replaying it.
  bool transportWitness = false;
};

/// The seven rules, in the order T3.1, T3.2, T3.3, T4.1, T4.2, T4.6, R4.0.
const std::vector<TheoremRule>& allRules();
/// "all" or a comma-separated list of ids. Throws Error(Usage) on unknown
/// ids or an empty selection.
std::vector<TheoremRule> selectRules(const std::string& list);

enum class AuditOutcome { ConsistentWithTheorem, HypothesisNotCertified, Violation };
const char* toString(AuditOutcome o);

struct FlagResult {
  std::string name;
  bool holds = false;
};

struct AuditSettings {
  double radius = 0.25;
  SamplingPlan plan;
  int flagSamples = 1000;
};

struct AuditResult {
  std::string rule;
  std::string instance;
  Vector point;
  std::vector<FlagResult> flags;
  std::vector<Verdict> hypotheses;
  std::optional<Verdict> conclusion;
  bool replayed = false;  // hypotheses were re-run on the conclusion's witness
  AuditOutcome outcome = AuditOutcome::HypothesisNotCertified;
};

/// Verdicts keyed by check description, shared by the rules of one
/// (instance, point, settings) triple.
using VerdictCache = std::map<std::string, Verdict>;

/// Hypotheses first; any flag false or check not certified gives
/// HypothesisNotCertified. Otherwise the conclusion runs, and a refutation
/// is replayed into the hypotheses: if one now fails the outcome is still
/// HypothesisNotCertified, else Violation. Checker errors become
/// Inapplicable verdicts.
AuditResult auditRule(const TheoremRule& rule, const Problem& problem, const Vector& xi,
                      const AuditSettings& settings, VerdictCache* cache = nullptr);

struct AuditInstance {
  std::shared_ptr<const Problem> problem;
  std::string pointName;
  Vector point;
  AuditSettings settings;
};

struct AuditSummary {
  std::vector<AuditResult> rows;  // instance-major, rules in the given order
  int consistent = 0;
  int notCertified = 0;
  int violations = 0;
};

/// Every rule on every instance. Throws Error(Usage) for empty inputs.
AuditSummary runMatrix(const std::vector<TheoremRule>& rules, const std::vector<AuditInstance>& instances);

}  // namespace vvicert
