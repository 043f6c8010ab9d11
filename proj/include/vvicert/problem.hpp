#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vvicert/cone.hpp"
#include "vvicert/model.hpp"

namespace vvicert {

inline constexpr const char* kProblemVersion = "vvicert/1";

/// Everything a problem file describes, fully validated.
struct Problem {
  std::string name;
  PiecewiseVectorFn f;
  OrderingCone cone;
  Kernel kernel;
  Vector e;
  std::map<std::string, Vector> points;
  std::vector<ModelIssue> warnings;
};

struct LoadOptions {
  bool strict = false;  // coverage gaps become errors
  int invariantSamples = 2000;
  std::uint64_t seed = 42;
};

/// Parse and validate problem text. Syntax errors report line and column;
/// schema errors name the offending field; sampled model invariants are
/// checked and failures either thrown (Validation) or kept as warnings.
Problem parseProblem(std::string_view text, const std::string& name, const LoadOptions& options = {});

/// Load from a file path, or from a bundled fixture when `source` names one
/// and no such file exists.
Problem loadProblem(const std::string& source, const LoadOptions& options = {});

/// Text of a bundled fixture, or empty if there is none with that name.
std::string_view bundledFixture(std::string_view name);
std::vector<std::string> bundledFixtureNames();

nlohmann::json problemToJson(const Problem& p);
/// FNV-1a of the canonical serialization, as 16 hex digits.
std::string problemHash(const Problem& p);

}  // namespace vvicert
