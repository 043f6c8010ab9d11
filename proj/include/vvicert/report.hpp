#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vvicert/audit.hpp"
#include "vvicert/certify.hpp"
#include "vvicert/model.hpp"

namespace vvicert {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json toJson(const Vector& v);
/// Row-major: an array of rows.
nlohmann::json toJson(const Matrix& m);
nlohmann::json toJson(const Verdict& v);
nlohmann::json toJson(const JacobianPolytope& p);
nlohmann::json toJson(const OuterBox& box);
nlohmann::json toJson(const AuditResult& r);
nlohmann::json toJson(const AuditSummary& s);

/// A command's outcome. Everything except `wallClockSeconds` is a pure
/// function of the command line and the seed.
struct Report {
  std::vector<std::string> command;
  std::string problemHash;
  std::uint64_t seed = 0;
  nlohmann::json payload;
  double wallClockSeconds = 0.0;
};

nlohmann::json toJson(const Report& r);
/// Canonical text of the payload alone, for replay comparisons.
std::string payloadText(const Report& r);

}  // namespace vvicert
