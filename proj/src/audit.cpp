#include "vvicert/audit.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "vvicert/error.hpp"

namespace vvicert {

namespace {

CheckSpec quasi(bool weak) {
  CheckSpec s;
  s.kind = weak ? CheckKind::QuasiWeakEfficiency : CheckKind::QuasiEfficiency;
  return s;
}

CheckSpec vvi(VviVariant v, Replay replay) {
  CheckSpec s;
  s.kind = CheckKind::VVI;
  s.variant = v;
  s.replay = replay;
  return s;
}

CheckSpec invex(InvexClass c, bool negated, Replay replay) {
  CheckSpec s;
  s.kind = CheckKind::Invex;
  s.invexClass = c;
  s.onNegated = negated;
  s.replay = replay;
  return s;
}

CheckSpec critical() {
  CheckSpec s;
  s.kind = CheckKind::Critical;
  return s;
}

std::vector<TheoremRule> buildRules() {
  using enum Replay;
  std::vector<TheoremRule> rules;
  rules.push_back({"T3.1", "f invex at xi and xi solves SVVI imply local quasi efficiency", {},
                   {invex(InvexClass::Invex, false, PairToBase), vvi(VviVariant::SVVI, Point)},
                   quasi(false), false});
  rules.push_back({"T3.2", "skew kernel, -f invex at xi and xi solves MVVI imply local quasi efficiency",
                   {"skew"},
                   {invex(InvexClass::Invex, true, PairFromBase), vvi(VviVariant::MVVI, Point)},
                   quasi(false), false});
  rules.push_back({"T3.3", "f pseudo invex of type II at xi and xi solves SVVI imply local quasi efficiency",
                   {},
                   {invex(InvexClass::PseudoII, false, PairToBase), vvi(VviVariant::SVVI, Point)},
                   quasi(false), false});
  CheckSpec weakPoint = quasi(true);
  weakPoint.replay = Point;
  rules.push_back({"T4.1",
                   "kernel affine in its first argument and zero on the diagonal, -f quasi invex of type II "
                   "at xi and local quasi weak efficiency imply xi solves WSVVI",
                   {"firstArgAffine", "vanishesOnDiagonal"},
                   {invex(InvexClass::QuasiII, true, PairToBase), weakPoint},
                   vvi(VviVariant::WSVVI, None), true});
  rules.push_back({"T4.2", "skew kernel, -f pseudo invex of type I at xi and xi solves WMVVI imply local quasi "
                   "weak efficiency",
                   {"skew"},
                   {invex(InvexClass::PseudoI, true, PairFromBase), vvi(VviVariant::WMVVI, Point)},
                   quasi(true), false});
  rules.push_back({"T4.6", "f pseudo invex of type I at xi and xi vector critical imply local quasi weak efficiency",
                   {},
                   {invex(InvexClass::PseudoI, false, PairToBase), critical()},
                   quasi(true), false});
  rules.push_back({"R4.0", "f pseudo invex of type I at xi and xi solves WSVVI imply local quasi weak efficiency",
                   {},
                   {invex(InvexClass::PseudoI, false, PairToBase), vvi(VviVariant::WSVVI, Point)},
                   quasi(true), false});
  return rules;
}

bool flagValue(const KernelFlags& flags, const std::string& name) {
  if (name == "skew") return flags.skew;
  if (name == "firstArgAffine") return flags.firstArgAffine;
  if (name == "vanishesOnDiagonal") return flags.vanishesOnDiagonal;
  throw Error(ErrorKind::Validation, "unknown kernel flag '" + name + "'");
}

Verdict runCheck(const CheckSpec& spec, const Problem& problem, const PiecewiseVectorFn& f,
                 const Vector& xi, const AuditSettings& settings, const SamplingPlan& plan) {
  const CheckContext ctx{f, problem.kernel, problem.cone};
  try {
    switch (spec.kind) {
      case CheckKind::QuasiEfficiency:
      case CheckKind::QuasiWeakEfficiency:
        return checkQuasiEfficient(ctx, problem.e, xi, settings.radius,
                                   spec.kind == CheckKind::QuasiWeakEfficiency, plan);
      case CheckKind::VVI:
        return checkVVI(ctx, spec.variant, xi, plan);
      case CheckKind::Invex:
        return checkInvexClass(ctx, spec.invexClass, problem.e, xi, settings.radius, plan);
      case CheckKind::Critical:
        return checkVectorCritical(f, xi, problem.cone, plan);
    }
  } catch (const Error& e) {
    return inapplicable(describe(spec), std::string(toString(e.kind())) + ": " + e.what());
  }
  return inapplicable(describe(spec), "unknown check");
}

}  // namespace

std::string describe(const CheckSpec& spec) {
  const std::string target = spec.onNegated ? "(-f)" : "(f)";
  switch (spec.kind) {
    case CheckKind::QuasiEfficiency: return "quasi-efficiency" + target;
    case CheckKind::QuasiWeakEfficiency: return "quasi-weak-efficiency" + target;
    case CheckKind::VVI: return std::string("vvi:") + toString(spec.variant) + target;
    case CheckKind::Invex: return std::string("invex:") + toString(spec.invexClass) + target;
    case CheckKind::Critical: return "critical" + target;
  }
  return "?";
}

const std::vector<TheoremRule>& allRules() {
  static const std::vector<TheoremRule> rules = buildRules();
  return rules;
}

std::vector<TheoremRule> selectRules(const std::string& list) {
  if (list == "all") return allRules();
  std::vector<TheoremRule> out;
  std::stringstream in(list);
  std::string id;
  while (std::getline(in, id, ',')) {
    id.erase(std::remove_if(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c); }), id.end());
    if (id.empty()) continue;
    auto it = std::find_if(allRules().begin(), allRules().end(), [&](const TheoremRule& r) { return r.id == id; });
    if (it == allRules().end()) throw Error(ErrorKind::Usage, "unknown rule '" + id + "'");
    out.push_back(*it);
  }
  if (out.empty()) throw Error(ErrorKind::Usage, "the rule list is empty");
  return out;
}

const char* toString(AuditOutcome o) {
  switch (o) {
    case AuditOutcome::ConsistentWithTheorem: return "ConsistentWithTheorem";
    case AuditOutcome::HypothesisNotCertified: return "HypothesisNotCertified";
    case AuditOutcome::Violation: return "VIOLATION";
  }
  return "?";
}

AuditResult auditRule(const TheoremRule& rule, const Problem& problem, const Vector& xi,
                      const AuditSettings& settings, VerdictCache* cache) {
  AuditResult result;
  result.rule = rule.id;
  result.instance = problem.name;
  result.point = xi;

  bool allHold = true;
  if (!rule.kernelFlags.empty()) {
    const KernelFlags flags =
        kernelFlags(problem.kernel, problem.f.domain(), settings.flagSamples, settings.plan.seed);
    for (const std::string& name : rule.kernelFlags) {
      result.flags.push_back({name, flagValue(flags, name)});
      allHold = allHold && result.flags.back().holds;
    }
  }

  std::optional<PiecewiseVectorFn> negated;
  auto target = [&](const CheckSpec& spec) -> const PiecewiseVectorFn& {
    if (!spec.onNegated) return problem.f;
    if (!negated) negated = problem.f.negated();
    return *negated;
  };
  auto cached = [&](const CheckSpec& spec) -> Verdict {
    const std::string key = describe(spec);
    if (cache) {
      if (auto it = cache->find(key); it != cache->end()) return it->second;
    }
    Verdict v = runCheck(spec, problem, target(spec), xi, settings, settings.plan);
    if (cache) cache->emplace(key, v);
    return v;
  };

  for (const CheckSpec& spec : rule.hypotheses) {
    if (!allHold) break;
    result.hypotheses.push_back(cached(spec));
    allHold = result.hypotheses.back().certified();
  }
  if (!allHold) return result;

  result.conclusion = cached(rule.conclusion);
  const Verdict& conclusion = *result.conclusion;
  if (conclusion.status == VerdictStatus::Inapplicable) return result;
  if (!conclusion.refuted()) {
    result.outcome = AuditOutcome::ConsistentWithTheorem;
    return result;
  }

  // Replay the witness into each hypothesis.
  Vector x = *conclusion.witnessX;
  if (rule.transportWitness) {
    const double dist = (x - xi).norm();
    const double reach = std::min(dist, settings.radius / 2.0);
    if (dist > 0.0) x = xi + (reach / dist) * (x - xi);
  }
  result.replayed = true;
  result.hypotheses.clear();
  bool survive = true;
  for (const CheckSpec& spec : rule.hypotheses) {
    SamplingPlan plan = settings.plan;
    switch (spec.replay) {
      case Replay::None: break;
      case Replay::Point: plan.extraPoints.insert(plan.extraPoints.begin(), x); break;
      case Replay::PairToBase: plan.extraPairs.insert(plan.extraPairs.begin(), {x, xi}); break;
      case Replay::PairFromBase: plan.extraPairs.insert(plan.extraPairs.begin(), {xi, x}); break;
    }
    result.hypotheses.push_back(runCheck(spec, problem, target(spec), xi, settings, plan));
    survive = survive && result.hypotheses.back().certified();
  }
  result.outcome = survive ? AuditOutcome::Violation : AuditOutcome::HypothesisNotCertified;
  return result;
}

AuditSummary runMatrix(const std::vector<TheoremRule>& rules, const std::vector<AuditInstance>& instances) {
  if (rules.empty()) throw Error(ErrorKind::Usage, "no audit rules selected");
  if (instances.empty()) throw Error(ErrorKind::Usage, "no audit instances");
  AuditSummary summary;
  for (const AuditInstance& inst : instances) {
    VerdictCache cache;
    for (const TheoremRule& rule : rules) {
      AuditResult row = auditRule(rule, *inst.problem, inst.point, inst.settings, &cache);
      if (!inst.pointName.empty()) row.instance += "@" + inst.pointName;
      switch (row.outcome) {
        case AuditOutcome::ConsistentWithTheorem: ++summary.consistent; break;
        case AuditOutcome::HypothesisNotCertified: ++summary.notCertified; break;
        case AuditOutcome::Violation: ++summary.violations; break;
      }
      summary.rows.push_back(std::move(row));
    }
  }
  return summary;
}

}  // namespace vvicert
