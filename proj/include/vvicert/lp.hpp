#pragma once

#include <vector>

#include "vvicert/linalg.hpp"

namespace vvicert {

enum class Relation { LessEqual, Equal, GreaterEqual };

/// maximize c.x  subject to  A x (rel) b,  x >= 0.
struct LinearProgram {
  Matrix A;
  Vector b;
  std::vector<Relation> relations;
  Vector c;
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
  Status status = Status::Infeasible;
  Vector x;
  double value = 0.0;
};

/// Dense two-phase simplex with Bland's anti-cycling rule. Meant for the
/// handful-of-variables problems that arise from Jacobians of small maps.
LpResult solve(const LinearProgram& lp);

}  // namespace vvicert
