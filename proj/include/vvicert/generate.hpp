#pragma once

#include <cstdint>

#include "vvicert/problem.hpp"

namespace vvicert {

/// Bounds for a random continuous piecewise-polynomial test instance.
struct RandomInstanceSpec {
  std::uint64_t seed = 1;
  int n = 1;        // 1..3
  int m = 2;        // 1..3
  int pieces = 2;   // 1..3
  int degree = 3;   // 1..3
  Kernel::Kind kernel = Kernel::Kind::Difference;
  double eLow = 0.1;
  double eHigh = 1.0;
};

/// Pieces are slabs between parallel hyperplanes a.x = t_k with t_1 = 0, so
/// the origin lies on a boundary. Each piece adds (a.x - t_k) q_k(x) to its
/// predecessor, which keeps f continuous by construction. The domain is
/// [-1, 1]^n with the orthant cone; the point "xi" is the origin.
/// Throws Error(GenerationFailed) for out-of-range specs or when no
/// candidate passes the model invariants after a bounded number of retries.
Problem generateInstance(const RandomInstanceSpec& spec);

}  // namespace vvicert
