#include "vvicert/problem.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <vvicert/bundled_fixtures.hpp>

#include "vvicert/error.hpp"

namespace vvicert {

using nlohmann::json;

namespace {

struct LineColumn {
  std::size_t line = 1;
  std::size_t column = 1;
};

LineColumn locate(std::string_view text, std::size_t byte) {
  LineColumn lc;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++lc.line;
      lc.column = 1;
    } else {
      ++lc.column;
    }
  }
  return lc;
}

[[noreturn]] void schemaError(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Validation, field + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schemaError(path, std::string("missing field '") + key + "'");
  return *it;
}

int positiveInt(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 64) {
    schemaError(path, "expected a positive integer");
  }
  return v.get<int>();
}

Vector vectorOf(const json& v, int size, const std::string& path) {
  if (!v.is_array()) schemaError(path, "expected an array of numbers");
  if (size >= 0 && static_cast<int>(v.size()) != size) {
    schemaError(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  }
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schemaError(path + "[" + std::to_string(i) + "]", "expected a number");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

// Rows of the matrix are the JSON rows.
Matrix matrixOf(const json& v, int cols, const std::string& path) {
  if (!v.is_array() || v.empty()) schemaError(path, "expected a non-empty array of rows");
  Matrix out(static_cast<Eigen::Index>(v.size()), cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        vectorOf(v[i], cols, path + "[" + std::to_string(i) + "]").transpose();
  }
  return out;
}

std::string stringOf(const json& v, const std::string& path) {
  if (!v.is_string()) schemaError(path, "expected a string");
  return v.get<std::string>();
}

Expr expressionAt(const json& v, int n, ParseContext ctx, const std::string& path) {
  const std::string text = stringOf(v, path);
  try {
    return parse(text, n, ctx);
  } catch (const ParseError& e) {
    throw ParseError(e.offset(), path + " \"" + text + "\": " + e.detail());
  }
}

Predicate predicateAt(const json& v, int n, const std::string& path) {
  const std::string text = stringOf(v, path);
  try {
    return parsePredicate(text, n);
  } catch (const ParseError& e) {
    throw ParseError(e.offset(), path + " \"" + text + "\": " + e.detail());
  }
}

OrderingCone coneOf(const json& v, int m) {
  const std::string type = stringOf(member(v, "type", "cone"), "cone.type");
  if (type == "orthant") return OrderingCone::orthant(m);
  if (type != "polyhedral") schemaError("cone.type", "expected 'orthant' or 'polyhedral'");
  const bool hasNormals = v.contains("normals");
  const bool hasGenerators = v.contains("generators");
  if (hasNormals && hasGenerators) {
    return OrderingCone::fromBoth(matrixOf(v["normals"], m, "cone.normals"),
                                  matrixOf(v["generators"], m, "cone.generators").transpose());
  }
  if (hasNormals) return OrderingCone::fromNormals(matrixOf(v["normals"], m, "cone.normals"));
  if (hasGenerators) {
    return OrderingCone::fromGenerators(matrixOf(v["generators"], m, "cone.generators").transpose());
  }
  schemaError("cone", "a polyhedral cone needs 'normals' or 'generators'");
}

Kernel kernelOf(const json& v, int n) {
  const std::string type = stringOf(member(v, "type", "kernel"), "kernel.type");
  if (type != "custom") {
    try {
      return kernelByName(type, n);
    } catch (const Error& e) {
      schemaError("kernel.type", e.what());
    }
  }
  const json& comps = member(v, "components", "kernel");
  if (!comps.is_array()) schemaError("kernel.components", "expected an array of strings");
  std::vector<Expr> exprs;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    exprs.push_back(expressionAt(comps[i], n, ParseContext::Kernel,
                                 "kernel.components[" + std::to_string(i) + "]"));
  }
  return Kernel::custom(n, std::move(exprs));
}

json vectorJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json rowsJson(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vectorJson(m.row(i).transpose()));
  return out;
}

}  // namespace

Problem parseProblem(std::string_view text, const std::string& name, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const LineColumn lc = locate(text, byte);
    throw ParseError(byte, name + ":" + std::to_string(lc.line) + ":" + std::to_string(lc.column) +
                               ": malformed problem file");
  }

  const std::string version = stringOf(member(doc, "version", "problem"), "version");
  if (version != kProblemVersion) {
    schemaError("version", "expected '" + std::string(kProblemVersion) + "', got '" + version + "'");
  }
  const int n = positiveInt(member(doc, "n", "problem"), "n");
  const int m = positiveInt(member(doc, "m", "problem"), "m");

  const json& domain = member(doc, "domain", "problem");
  Box box{vectorOf(member(domain, "lower", "domain"), n, "domain.lower"),
          vectorOf(member(domain, "upper", "domain"), n, "domain.upper")};
  if (((box.upper - box.lower).array() <= 2.0 * kDomainInset).any()) {
    schemaError("domain", "every upper bound must exceed its lower bound");
  }

  const json& pieces = member(member(doc, "function", "problem"), "pieces", "function");
  if (!pieces.is_array() || pieces.empty()) schemaError("function.pieces", "expected a non-empty array");
  std::vector<Piece> parsed;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const std::string path = "function.pieces[" + std::to_string(k) + "]";
    const json& piece = pieces[k];
    Predicate region = piece.contains("region") ? predicateAt(piece["region"], n, path + ".region")
                                                : Predicate::always();
    const json& comps = member(piece, "components", path);
    if (!comps.is_array() || static_cast<int>(comps.size()) != m) {
      schemaError(path + ".components", "expected " + std::to_string(m) + " expressions");
    }
    std::vector<Expr> exprs;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      exprs.push_back(expressionAt(comps[i], n, ParseContext::Function,
                                   path + ".components[" + std::to_string(i) + "]"));
    }
    parsed.push_back(PiecewiseVectorFn::makePiece(std::move(region), std::move(exprs), n));
  }

  PiecewiseVectorFn f(n, m, box, std::move(parsed));
  OrderingCone cone = coneOf(member(doc, "cone", "problem"), m);
  Kernel kernel = doc.contains("kernel") ? kernelOf(doc["kernel"], n) : Kernel::difference(n);
  Vector e = doc.contains("e") ? vectorOf(doc["e"], m, "e") : Vector(cone.interiorWitness());
  if (!cone.validateE(e)) throw Error(ErrorKind::InvalidE, "e: not strictly inside the ordering cone");

  std::map<std::string, Vector> points;
  if (doc.contains("points")) {
    if (!doc["points"].is_object()) schemaError("points", "expected an object of named vectors");
    for (const auto& [key, value] : doc["points"].items()) {
      points[key] = vectorOf(value, n, "points." + key);
    }
  }

  Problem problem{name, std::move(f), std::move(cone), std::move(kernel), std::move(e), std::move(points), {}};
  for (ModelIssue& issue : checkModelInvariants(problem.f, options.invariantSamples, options.seed)) {
    if (issue.severity == ModelIssue::Severity::Error) {
      throw Error(issue.invariant == "continuity" ? ErrorKind::InconsistentPieces : ErrorKind::Validation,
                  name + ": " + issue.invariant + " invariant violated: " + issue.message);
    }
    if (options.strict) {
      throw Error(ErrorKind::Validation, name + ": " + issue.invariant + " invariant violated: " + issue.message);
    }
    problem.warnings.push_back(std::move(issue));
  }
  return problem;
}

std::string_view bundledFixture(std::string_view name) {
  for (const auto& [key, text] : fixtures::kBundled) {
    if (key == name) return text;
  }
  return {};
}

std::vector<std::string> bundledFixtureNames() {
  std::vector<std::string> names;
  for (const auto& entry : fixtures::kBundled) names.emplace_back(entry.first);
  return names;
}

Problem loadProblem(const std::string& source, const LoadOptions& options) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(source, ec)) {
    const std::string_view fixture = bundledFixture(source);
    if (fixture.empty()) throw Error(ErrorKind::Usage, "no problem file or bundled fixture named '" + source + "'");
    return parseProblem(fixture, source, options);
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot read '" + source + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parseProblem(buffer.str(), source, options);
}

json problemToJson(const Problem& p) {
  json doc;
  doc["version"] = kProblemVersion;
  doc["n"] = p.f.n();
  doc["m"] = p.f.m();
  doc["domain"] = {{"lower", vectorJson(p.f.domain().lower)}, {"upper", vectorJson(p.f.domain().upper)}};
  if (p.cone.isOrthant()) {
    doc["cone"] = {{"type", "orthant"}};
  } else {
    doc["cone"] = {{"type", "polyhedral"},
                   {"normals", rowsJson(p.cone.normals())},
                   {"generators", rowsJson(p.cone.generators().transpose())}};
  }
  json pieces = json::array();
  for (const Piece& piece : p.f.pieces()) {
    json comps = json::array();
    for (const Expr& c : piece.components) comps.push_back(print(c));
    pieces.push_back({{"region", print(piece.region)}, {"components", comps}});
  }
  doc["function"] = {{"pieces", pieces}};
  if (p.kernel.kind() == Kernel::Kind::Custom) {
    json comps = json::array();
    for (const Expr& c : p.kernel.components()) comps.push_back(print(c));
    doc["kernel"] = {{"type", "custom"}, {"components", comps}};
  } else {
    doc["kernel"] = {{"type", p.kernel.name()}};
  }
  doc["e"] = vectorJson(p.e);
  json points = json::object();
  for (const auto& [key, value] : p.points) points[key] = vectorJson(value);
  doc["points"] = points;
  return doc;
}

std::string problemHash(const Problem& p) {
  const std::string canonical = problemToJson(p).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vvicert
