#include "vvicert/report.hpp"

namespace vvicert {

using nlohmann::json;

json toJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json toJson(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(toJson(Vector(m.row(i).transpose())));
  return out;
}

json toJson(const Verdict& v) {
  json out;
  out["status"] = toString(v.status);
  out["check"] = v.check;
  if (v.witnessX) {
    json w;
    w["x"] = toJson(*v.witnessX);
    if (v.witnessY) w["y"] = toJson(*v.witnessY);
    out["witness"] = w;
  }
  json evidence = json::object();
  for (const NamedVector& e : v.evidence) evidence[e.name] = toJson(e.value);
  if (!v.evidence.empty()) out["evidence"] = evidence;
  out["stats"] = {{"evaluated", v.stats.evaluated},
                  {"skipped", v.stats.skipped},
                  {"seed", v.stats.seed},
                  {"radius", v.stats.radius},
                  {"gridDepth", v.stats.gridDepth},
                  {"membershipTolerance", v.stats.membershipTolerance},
                  {"strictMargin", v.stats.strictMargin},
                  {"activeTolerance", v.stats.activeTolerance}};
  out["reason"] = v.reason;
  return out;
}

json toJson(const JacobianPolytope& p) {
  json vertices = json::array();
  for (const Matrix& A : p.vertices) vertices.push_back(toJson(A));
  json active = json::array();
  for (std::size_t k : p.activePieces) active.push_back(k);
  return {{"point", toJson(p.point)}, {"vertices", vertices}, {"activePieces", active}};
}

json toJson(const OuterBox& box) {
  json rows = json::array();
  for (std::size_t i = 0; i < box.lower.size(); ++i) {
    rows.push_back({{"lower", toJson(box.lower[i])}, {"upper", toJson(box.upper[i])}});
  }
  return rows;
}

json toJson(const AuditResult& r) {
  json out;
  out["rule"] = r.rule;
  out["instance"] = r.instance;
  out["point"] = toJson(r.point);
  json flags = json::object();
  for (const FlagResult& f : r.flags) flags[f.name] = f.holds;
  out["kernelFlags"] = flags;
  json hyps = json::array();
  for (const Verdict& v : r.hypotheses) hyps.push_back(toJson(v));
  out["hypotheses"] = hyps;
  out["conclusion"] = r.conclusion ? toJson(*r.conclusion) : json(nullptr);
  out["replayed"] = r.replayed;
  out["outcome"] = toString(r.outcome);
  return out;
}

json toJson(const AuditSummary& s) {
  json rows = json::array();
  for (const AuditResult& r : s.rows) rows.push_back(toJson(r));
  return {{"rows", rows},
          {"consistent", s.consistent},
          {"hypothesisNotCertified", s.notCertified},
          {"violations", s.violations}};
}

json toJson(const Report& r) {
  return {{"command", r.command},
          {"problemHash", r.problemHash},
          {"seed", r.seed},
          {"toolVersion", kToolVersion},
          {"payload", r.payload},
          {"wallClockSeconds", r.wallClockSeconds}};
}

std::string payloadText(const Report& r) { return r.payload.dump(); }

}  // namespace vvicert
