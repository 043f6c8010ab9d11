#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vvicert/linalg.hpp"

namespace vvicert {

/// Points of the unit cube [0,1)^dim. Uses a Cranley-Patterson rotated
/// Halton sequence when `lowDiscrepancy` is set (dim <= 6), otherwise a
/// seeded Mersenne twister. The same (dim, seed, mode) always yields the same
/// stream on every platform.
class UnitCubeSequence {
 public:
  UnitCubeSequence(int dim, std::uint64_t seed, bool lowDiscrepancy);

  Vector next();
  int dim() const { return dim_; }

 private:
  int dim_;
  bool lowDiscrepancy_;
  std::uint64_t index_ = 0;
  std::vector<double> shift_;
  std::mt19937_64 rng_;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unitUniform(std::mt19937_64& rng);

/// Whether the sequence for an n-dimensional problem is low-discrepancy.
inline bool useLowDiscrepancy(int n) { return n <= 3; }

/// Points of the open ball B(center, radius), by rejection from the
/// bounding box of a unit-cube stream.
class BallSampler {
 public:
  BallSampler(Vector center, double radius, std::uint64_t seed);
  Vector next();

 private:
  Vector center_;
  double radius_;
  UnitCubeSequence cube_;
};

/// Pairs (x, y) in B(center, radius)^2 drawn from one 2n-dimensional stream.
class PairSampler {
 public:
  PairSampler(Vector center, double radius, std::uint64_t seed);
  std::pair<Vector, Vector> next();

 private:
  Vector center_;
  double radius_;
  UnitCubeSequence cube_;
};

/// Points of the box [lower, upper].
class BoxSampler {
 public:
  BoxSampler(Vector lower, Vector upper, std::uint64_t seed);
  Vector next();

 private:
  Vector lower_;
  Vector upper_;
  UnitCubeSequence cube_;
};

/// All weight vectors with `parts` entries in {0, 1/depth, ..., 1} summing
/// to 1, in lexicographically decreasing order of the integer numerators.
/// The first vector is (1, 0, ..., 0).
std::vector<Vector> simplexGrid(int parts, int depth);

}  // namespace vvicert
