#include "vvicert/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "vvicert/audit.hpp"
#include "vvicert/error.hpp"
#include "vvicert/generate.hpp"
#include "vvicert/problem.hpp"
#include "vvicert/report.hpp"

namespace vvicert {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;
constexpr double kDefaultRadius = 0.25;
constexpr int kDefaultRandomSamples = 10000;

struct Options {
  std::string problem;
  std::string at;
  std::string e;
  double r = kDefaultRadius;
  std::string kernel;
  bool weak = false;
  std::string variant = "svvi";
  std::string invexClass = "invex";
  std::uint64_t seed = kDefaultSeed;
  int samples = 0;
  bool strict = false;
  std::string out;
  std::string quantifier = "forall";
  std::string rules = "all";
  int random = 0;
  int randomSamples = kDefaultRandomSamples;
  std::string fixture;
  RandomInstanceSpec gen;
  std::string genKernel = "difference";
};

struct Outcome {
  int exitCode = kExitCertified;
  std::string problemHash;
  json payload;
  std::string summary;
  bool rawPayload = false;  // write the payload itself, not a report
};

Vector parseNumbers(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Usage, what + ": '" + item + "' is not a number");
    }
  }
  if (values.empty()) throw Error(ErrorKind::Usage, what + ": expected comma-separated numbers");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector resolvePoint(const Problem& p, const std::string& at) {
  if (at.empty()) {
    if (p.points.empty()) throw Error(ErrorKind::Usage, "--at is required: the problem names no points");
    return p.points.begin()->second;
  }
  if (auto it = p.points.find(at); it != p.points.end()) return it->second;
  Vector v = parseNumbers(at, "--at");
  if (v.size() != p.f.n()) {
    throw Error(ErrorKind::Usage, "--at has " + std::to_string(v.size()) + " entries, the problem has n = " +
                                      std::to_string(p.f.n()));
  }
  return v;
}

Vector resolveE(const Problem& p, const std::string& text) {
  if (text.empty()) return p.e;
  Vector e = parseNumbers(text, "--e");
  if (e.size() != p.f.m()) {
    throw Error(ErrorKind::Usage, "--e has " + std::to_string(e.size()) + " entries, the problem has m = " +
                                      std::to_string(p.f.m()));
  }
  return e;
}

SamplingPlan makePlan(const Options& o) {
  SamplingPlan plan;
  plan.seed = o.seed;
  if (o.samples > 0) {
    plan.ballSampleCount = o.samples;
    plan.pairSampleCount = o.samples;
  }
  if (o.quantifier == "exists") {
    plan.vviQuantifier = Quantifier::Exists;
  } else if (o.quantifier != "forall") {
    throw Error(ErrorKind::Usage, "--quantifier must be forall or exists");
  }
  return plan;
}

Problem load(const Options& o) {
  if (o.problem.empty()) throw Error(ErrorKind::Usage, "--problem is required");
  LoadOptions lo;
  lo.strict = o.strict;
  lo.seed = o.seed;
  return loadProblem(o.problem, lo);
}

Kernel chosenKernel(const Problem& p, const Options& o) {
  return o.kernel.empty() ? p.kernel : kernelByName(o.kernel, p.f.n());
}

int exitFor(const Verdict& v) {
  switch (v.status) {
    case VerdictStatus::CertifiedUpToSampling: return kExitCertified;
    case VerdictStatus::Refuted: return kExitRefuted;
    case VerdictStatus::Inapplicable: return kExitUsage;
  }
  return kExitUsage;
}

// Runs a checker, turning library errors into an Inapplicable verdict.
Outcome verdictOutcome(const Problem& p, const std::string& check, json inputs,
                       const std::function<Verdict()>& run) {
  Verdict v;
  try {
    v = run();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Usage) throw;
    v = inapplicable(check, std::string(toString(e.kind())) + ": " + e.what());
  }
  Outcome o;
  o.exitCode = exitFor(v);
  o.problemHash = problemHash(p);
  o.payload = {{"inputs", std::move(inputs)}, {"verdict", toJson(v)}};
  o.summary = v.check + ": " + toString(v.status);
  return o;
}

Outcome runJacobian(const Options& o) {
  const Problem p = load(o);
  const Vector x = resolvePoint(p, o.at);
  const JacobianPolytope poly = p.f.clarkeJacobian(x);
  Outcome out;
  out.problemHash = problemHash(p);
  out.payload = {{"polytope", toJson(poly)}, {"outerBox", toJson(p.f.cartesianOuterBox(x))}};
  out.summary = "jacobian: " + std::to_string(poly.vertices.size()) + " vertices";
  return out;
}

Outcome runEfficiency(const Options& o) {
  const Problem p = load(o);
  const Vector xi = resolvePoint(p, o.at);
  const Vector e = resolveE(p, o.e);
  const Kernel k = chosenKernel(p, o);
  const SamplingPlan plan = makePlan(o);
  json inputs = {{"point", toJson(xi)}, {"e", toJson(e)}, {"r", o.r}, {"kernel", k.name()}, {"weak", o.weak}};
  return verdictOutcome(p, o.weak ? "quasi-weak-efficiency" : "quasi-efficiency", inputs, [&] {
    return checkQuasiEfficient({p.f, k, p.cone}, e, xi, o.r, o.weak, plan);
  });
}

Outcome runVvi(const Options& o) {
  const Problem p = load(o);
  const Vector xi = resolvePoint(p, o.at);
  const VviVariant variant = parseVariant(o.variant);
  const Kernel k = chosenKernel(p, o);
  const SamplingPlan plan = makePlan(o);
  json inputs = {{"point", toJson(xi)}, {"variant", toString(variant)}, {"kernel", k.name()},
                 {"quantifier", o.quantifier}};
  return verdictOutcome(p, std::string("vvi:") + toString(variant), inputs,
                        [&] { return checkVVI({p.f, k, p.cone}, variant, xi, plan); });
}

Outcome runInvex(const Options& o) {
  const Problem p = load(o);
  const Vector x0 = resolvePoint(p, o.at);
  const Vector e = resolveE(p, o.e);
  const InvexClass cls = parseInvexClass(o.invexClass);
  const Kernel k = chosenKernel(p, o);
  const SamplingPlan plan = makePlan(o);
  json inputs = {{"point", toJson(x0)}, {"e", toJson(e)}, {"r", o.r}, {"kernel", k.name()},
                 {"class", toString(cls)}};
  return verdictOutcome(p, std::string("invex:") + toString(cls), inputs,
                        [&] { return checkInvexClass({p.f, k, p.cone}, cls, e, x0, o.r, plan); });
}

Outcome runCritical(const Options& o) {
  const Problem p = load(o);
  const Vector xi = resolvePoint(p, o.at);
  const SamplingPlan plan = makePlan(o);
  return verdictOutcome(p, "critical", {{"point", toJson(xi)}},
                        [&] { return checkVectorCritical(p.f, xi, p.cone, plan); });
}

RandomInstanceSpec auditInstanceSpec(std::uint64_t seed, int index) {
  RandomInstanceSpec spec;
  spec.seed = seed + static_cast<std::uint64_t>(index);
  spec.n = 1 + index % 3;
  spec.m = 1 + (index / 3) % 3;
  spec.pieces = 1 + (index / 9) % 3;
  spec.degree = 1 + (index / 2) % 3;
  spec.kernel = index % 5 == 4 ? Kernel::Kind::NegNormDifference : Kernel::Kind::Difference;
  return spec;
}

Outcome runAudit(const Options& o) {
  const std::vector<TheoremRule> rules = selectRules(o.rules);
  AuditSettings settings;
  settings.radius = o.r;
  settings.plan = makePlan(o);

  std::vector<AuditInstance> instances;
  std::string hashes;
  auto addProblem = [&](Problem p, const std::string& at) {
    const Vector x = resolvePoint(p, at);
    std::string pointName = at;
    if (pointName.empty()) pointName = p.points.begin()->first;
    hashes += (hashes.empty() ? "" : ",") + problemHash(p);
    instances.push_back({std::make_shared<const Problem>(std::move(p)), pointName, x, settings});
  };
  if (!o.problem.empty()) {
    addProblem(load(o), o.at);
  } else {
    for (const std::string& name : bundledFixtureNames()) {
      Options fixture = o;
      fixture.problem = name;
      addProblem(load(fixture), "");
    }
  }
  AuditSettings randomSettings = settings;
  randomSettings.plan.ballSampleCount = o.randomSamples;
  randomSettings.plan.pairSampleCount = o.randomSamples;
  for (int i = 0; i < o.random; ++i) {
    Problem p = generateInstance(auditInstanceSpec(o.seed, i));
    const Vector xi = p.points.at("xi");
    instances.push_back({std::make_shared<const Problem>(std::move(p)), "xi", xi, randomSettings});
  }

  const AuditSummary summary = runMatrix(rules, instances);
  Outcome out;
  out.exitCode = summary.violations > 0 ? kExitRefuted : kExitCertified;
  out.problemHash = hashes;
  out.payload = toJson(summary);
  out.payload["randomInstances"] = o.random;
  out.summary = "audit: " + std::to_string(summary.rows.size()) + " rows, " +
                std::to_string(summary.consistent) + " consistent, " + std::to_string(summary.notCertified) +
                " hypothesis not certified, " + std::to_string(summary.violations) + " violations";
  return out;
}

// --- repro -----------------------------------------------------------------

struct Claim {
  std::string name;
  std::string expected;
  std::string observed;
  bool holds = false;
  json detail;
};

bool sameVertexSet(const JacobianPolytope& poly, const std::vector<Matrix>& expected, double tol) {
  if (poly.vertices.size() != expected.size()) return false;
  return std::all_of(expected.begin(), expected.end(), [&](const Matrix& want) {
    return std::any_of(poly.vertices.begin(), poly.vertices.end(), [&](const Matrix& got) {
      return got.rows() == want.rows() && got.cols() == want.cols() &&
             (got - want).cwiseAbs().maxCoeff() <= tol;
    });
  });
}

Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

Claim verdictClaim(const std::string& name, VerdictStatus expected, const Verdict& v) {
  return {name, toString(expected), toString(v.status), v.status == expected, toJson(v)};
}

std::vector<Claim> reproExample5(const Options& o, std::string& hash) {
  Options local = o;
  local.problem = "example5";
  const Problem p = load(local);
  hash = problemHash(p);
  const Vector xi = p.points.at("xi");
  const CheckContext ctx{p.f, p.kernel, p.cone};
  const SamplingPlan plan = makePlan(o);
  std::vector<Claim> claims;

  const JacobianPolytope poly = p.f.clarkeJacobian(xi);
  const bool vertsOk = sameVertexSet(poly, {column({5, -2}), column({6, -3})}, 1e-9);
  claims.push_back({"jacobian at 0", "vertices (5,-2) and (6,-3)",
                    std::to_string(poly.vertices.size()) + " vertices", vertsOk, toJson(poly)});
  claims.push_back(verdictClaim("SVVI at 0", VerdictStatus::CertifiedUpToSampling,
                                checkVVI(ctx, VviVariant::SVVI, xi, plan)));
  claims.push_back(verdictClaim("WSVVI at 0", VerdictStatus::CertifiedUpToSampling,
                                checkVVI(ctx, VviVariant::WSVVI, xi, plan)));
  claims.push_back(verdictClaim("quasi efficiency, e=(0.5,0.5), r=0.25", VerdictStatus::CertifiedUpToSampling,
                                checkQuasiEfficient(ctx, p.e, xi, 0.25, false, plan)));
  claims.push_back(verdictClaim("pseudo invex of type II, r=0.5", VerdictStatus::CertifiedUpToSampling,
                                checkInvexClass(ctx, InvexClass::PseudoII, p.e, xi, 0.5, plan)));

  const Verdict crit = checkVectorCritical(p.f, xi, p.cone, plan);
  bool muOk = false;
  for (const NamedVector& ev : crit.evidence) {
    if (ev.name == "mu") {
      const Vector want = Vector::Map(std::array<double, 2>{2.0 / 7.0, 5.0 / 7.0}.data(), 2);
      muOk = (ev.value / ev.value.sum() - want).cwiseAbs().maxCoeff() <= 1e-9;
    }
  }
  claims.push_back({"vector critical at 0", "critical with mu proportional to (2/7, 5/7)",
                    std::string(toString(crit.status)) + (muOk ? ", mu matches" : ", mu differs"),
                    crit.certified() && muOk, toJson(crit)});

  AuditSettings settings;
  settings.radius = o.r;
  settings.plan = plan;
  const AuditSummary summary =
      runMatrix(allRules(), {{std::make_shared<const Problem>(p), "xi", xi, settings}});
  claims.push_back({"theorem audit", "no violations", std::to_string(summary.violations) + " violations",
                    summary.violations == 0, toJson(summary)});
  return claims;
}

std::vector<Claim> reproExample23(const Options& o, std::string& hash) {
  Options local = o;
  local.problem = "example23";
  const Problem p = load(local);
  hash = problemHash(p);
  const Vector x0 = p.points.at("x0");
  const SamplingPlan plan = makePlan(o);
  std::vector<Claim> claims;

  const JacobianPolytope poly = p.f.clarkeJacobian(x0);
  claims.push_back({"jacobian at 0", "vertices (1,2) and (1,4)", std::to_string(poly.vertices.size()) + " vertices",
                    sameVertexSet(poly, {column({1, 2}), column({1, 4})}, 1e-9), toJson(poly)});

  const Kernel negNorm = Kernel::negNormDifference(p.f.n());
  claims.push_back(verdictClaim("approximate invexity, eta = -|x - y|", VerdictStatus::CertifiedUpToSampling,
                                checkInvexClass({p.f, negNorm, p.cone}, InvexClass::Invex, p.e, x0, 0.25, plan)));

  const Kernel diff = Kernel::difference(p.f.n());
  const Verdict convex = checkInvexClass({p.f, diff, p.cone}, InvexClass::Invex, p.e, x0, 0.25, plan);
  const bool witnessShape = convex.refuted() && convex.witnessX && convex.witnessY &&
                            std::abs((*convex.witnessX)(0)) <= 1e-12 && (*convex.witnessY)(0) < 0.0;
  claims.push_back({"approximate convexity fails", "Refuted with x = 0, y < 0",
                    std::string(toString(convex.status)) + (witnessShape ? " with x = 0, y < 0" : ""),
                    witnessShape, toJson(convex)});
  return claims;
}

Outcome runRepro(const Options& o) {
  std::string hash;
  std::vector<Claim> claims;
  if (o.fixture == "example5") {
    claims = reproExample5(o, hash);
  } else if (o.fixture == "example23") {
    claims = reproExample23(o, hash);
  } else {
    throw Error(ErrorKind::Usage, "repro expects example5 or example23");
  }
  Outcome out;
  out.problemHash = hash;
  json rows = json::array();
  int held = 0;
  for (const Claim& c : claims) {
    rows.push_back({{"claim", c.name}, {"expected", c.expected}, {"observed", c.observed},
                    {"holds", c.holds}, {"detail", c.detail}});
    held += c.holds ? 1 : 0;
  }
  out.payload = {{"fixture", o.fixture}, {"claims", rows}};
  out.exitCode = held == static_cast<int>(claims.size()) ? kExitCertified : kExitRefuted;
  out.summary = "repro " + o.fixture + ": " + std::to_string(held) + " of " + std::to_string(claims.size()) +
                " claims hold";
  return out;
}

Outcome runGen(const Options& o) {
  RandomInstanceSpec spec = o.gen;
  spec.seed = o.seed;
  if (o.genKernel == "difference") {
    spec.kernel = Kernel::Kind::Difference;
  } else if (o.genKernel == "negNormDifference") {
    spec.kernel = Kernel::Kind::NegNormDifference;
  } else {
    throw Error(ErrorKind::Usage, "--kernel must be difference or negNormDifference for gen");
  }
  const Problem p = generateInstance(spec);
  Outcome out;
  out.problemHash = problemHash(p);
  out.payload = problemToJson(p);
  out.rawPayload = true;
  out.summary = "gen: " + p.name + " with " + std::to_string(p.f.pieces().size()) + " pieces";
  return out;
}

void addProblemOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem, "problem file or bundled fixture name");
  cmd->add_option("--at", o.at, "point: comma-separated numbers or a named point");
  cmd->add_flag("--strict", o.strict, "treat coverage warnings as errors");
}

void addPlanOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--samples", o.samples, "sample count for balls and pairs")->check(CLI::PositiveNumber);
  cmd->add_option("--quantifier", o.quantifier, "VVI reading: forall or exists");
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Certification checks for nonsmooth vector optimization problems", "vvicert"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // Shared flags are accepted on every subcommand.
  std::uint64_t seed = kDefaultSeed;
  std::vector<CLI::App*> leaves;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "sampling seed");
    cmd->add_option("--out", o.out, "write the report to this path");
    leaves.push_back(cmd);
  };

  CLI::App* jac = app.add_subcommand("jacobian", "generalized Jacobian polytope at a point");
  addProblemOptions(jac, o);
  common(jac);

  CLI::App* check = app.add_subcommand("check", "run one checker");
  check->require_subcommand(1);
  CLI::App* eff = check->add_subcommand("efficiency", "local (eta, e)-quasi (weak) efficiency");
  CLI::App* vvi = check->add_subcommand("vvi", "vector variational inequalities");
  CLI::App* inv = check->add_subcommand("invex", "approximate invexity classes");
  CLI::App* crit = check->add_subcommand("critical", "vector criticality");
  for (CLI::App* cmd : {eff, vvi, inv, crit}) {
    addProblemOptions(cmd, o);
    addPlanOptions(cmd, o);
    common(cmd);
  }
  for (CLI::App* cmd : {eff, vvi, inv}) cmd->add_option("--kernel", o.kernel, "difference or negNormDifference");
  for (CLI::App* cmd : {eff, inv}) {
    cmd->add_option("--e", o.e, "approximation vector, comma-separated");
    cmd->add_option("--r", o.r, "ball radius")->check(CLI::PositiveNumber);
  }
  eff->add_flag("--weak", o.weak, "strict cone order (quasi weak efficiency)");
  vvi->add_option("--variant", o.variant, "svvi, mvvi, wsvvi or wmvvi");
  inv->add_option("--class", o.invexClass, "invex, pseudo1, pseudo2, quasi1 or quasi2");

  CLI::App* audit = app.add_subcommand("audit", "test the theorem rules on instances");
  addProblemOptions(audit, o);
  addPlanOptions(audit, o);
  common(audit);
  audit->add_option("--rules", o.rules, "all, or a comma-separated list such as T3.1,T4.6");
  audit->add_option("--r", o.r, "hypothesis and conclusion radius")->check(CLI::PositiveNumber);
  audit->add_option("--random", o.random, "number of generated instances")->check(CLI::NonNegativeNumber);
  audit->add_option("--random-samples", o.randomSamples, "sample count on generated instances")
      ->check(CLI::PositiveNumber);

  CLI::App* repro = app.add_subcommand("repro", "re-derive the claims of a bundled fixture");
  repro->add_option("fixture", o.fixture, "example5 or example23")->required();
  addPlanOptions(repro, o);
  common(repro);

  CLI::App* gen = app.add_subcommand("gen", "print a random problem file");
  common(gen);
  gen->add_option("--n", o.gen.n, "input dimension (1-3)");
  gen->add_option("--m", o.gen.m, "output dimension (1-3)");
  gen->add_option("--pieces", o.gen.pieces, "number of pieces (1-3)");
  gen->add_option("--degree", o.gen.degree, "polynomial degree (1-3)");
  gen->add_option("--kernel", o.genKernel, "difference or negNormDifference");

  // CLI11 consumes arguments from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitCertified;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitCertified;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  bool seedGiven = false;
  for (CLI::App* cmd : leaves) {
    if (cmd->parsed() && cmd->count("--seed") > 0) seedGiven = true;
  }
  if (seedGiven) {
    o.seed = seed;
  } else if (const char* env = std::getenv(kSeedEnvironment)) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: " << kSeedEnvironment << " is not an unsigned integer\n";
      return kExitUsage;
    }
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    if (jac->parsed()) outcome = runJacobian(o);
    else if (eff->parsed()) outcome = runEfficiency(o);
    else if (vvi->parsed()) outcome = runVvi(o);
    else if (inv->parsed()) outcome = runInvex(o);
    else if (crit->parsed()) outcome = runCritical(o);
    else if (audit->parsed()) outcome = runAudit(o);
    else if (repro->parsed()) outcome = runRepro(o);
    else outcome = runGen(o);
  } catch (const Error& e) {
    err << "error (" << toString(e.kind()) << "): " << e.what() << "\n";
    return kExitUsage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json document;
  if (outcome.rawPayload) {
    document = outcome.payload;
  } else {
    Report report{args, outcome.problemHash, o.seed, outcome.payload, seconds};
    document = toJson(report);
  }
  const std::string text = document.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << o.out << "'\n";
      return kExitUsage;
    }
    file << text;
    out << outcome.summary << "\n";
  }
  return outcome.exitCode;
}

}  // namespace vvicert
