#include "vvicert/sampling.hpp"

#include <array>
#include <cmath>

#include "vvicert/error.hpp"

namespace vvicert {

namespace {

constexpr std::array<int, 6> kPrimes = {2, 3, 5, 7, 11, 13};
constexpr int kMaxRejections = 1 << 20;

double radicalInverse(std::uint64_t i, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (i > 0) {
    result += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f /= base;
  }
  return result;
}

}  // namespace

double unitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

UnitCubeSequence::UnitCubeSequence(int dim, std::uint64_t seed, bool lowDiscrepancy)
    : dim_(dim),
      lowDiscrepancy_(lowDiscrepancy && dim <= static_cast<int>(kPrimes.size())),
      rng_(seed) {
  if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "sequence dimension must be positive");
  if (lowDiscrepancy_) {
    shift_.resize(static_cast<std::size_t>(dim));
    for (auto& s : shift_) s = unitUniform(rng_);
  }
}

Vector UnitCubeSequence::next() {
  Vector u(dim_);
  if (lowDiscrepancy_) {
    ++index_;
    for (int d = 0; d < dim_; ++d) {
      const double h = radicalInverse(index_, kPrimes[static_cast<std::size_t>(d)]) +
                       shift_[static_cast<std::size_t>(d)];
      u(d) = h - std::floor(h);
    }
  } else {
    for (int d = 0; d < dim_; ++d) u(d) = unitUniform(rng_);
  }
  return u;
}

BallSampler::BallSampler(Vector center, double radius, std::uint64_t seed)
    : center_(std::move(center)),
      radius_(radius),
      cube_(static_cast<int>(center_.size()), seed, useLowDiscrepancy(static_cast<int>(center_.size()))) {}

Vector BallSampler::next() {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const Vector offset = radius_ * (2.0 * cube_.next().array() - 1.0).matrix();
    if (offset.norm() < radius_) return center_ + offset;
  }
  throw Error(ErrorKind::Degenerate, "ball rejection sampling did not terminate");
}

PairSampler::PairSampler(Vector center, double radius, std::uint64_t seed)
    : center_(std::move(center)),
      radius_(radius),
      cube_(2 * static_cast<int>(center_.size()), seed,
            useLowDiscrepancy(static_cast<int>(center_.size()))) {}

std::pair<Vector, Vector> PairSampler::next() {
  const auto n = center_.size();
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const Vector u = radius_ * (2.0 * cube_.next().array() - 1.0).matrix();
    const Vector dx = u.head(n);
    const Vector dy = u.tail(n);
    if (dx.norm() < radius_ && dy.norm() < radius_) return {center_ + dx, center_ + dy};
  }
  throw Error(ErrorKind::Degenerate, "pair rejection sampling did not terminate");
}

BoxSampler::BoxSampler(Vector lower, Vector upper, std::uint64_t seed)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      cube_(static_cast<int>(lower_.size()), seed, useLowDiscrepancy(static_cast<int>(lower_.size()))) {}

Vector BoxSampler::next() {
  return lower_ + (upper_ - lower_).cwiseProduct(cube_.next());
}

std::vector<Vector> simplexGrid(int parts, int depth) {
  if (parts < 1 || depth < 1) throw Error(ErrorKind::Validation, "simplex grid needs parts, depth >= 1");
  std::vector<Vector> out;
  std::vector<int> counts(static_cast<std::size_t>(parts), 0);
  // Recursive enumeration of compositions of `depth`, largest first entry first.
  auto recurse = [&](auto&& self, int index, int remaining) -> void {
    if (index == parts - 1) {
      counts[static_cast<std::size_t>(index)] = remaining;
      Vector w(parts);
      for (int i = 0; i < parts; ++i) {
        w(i) = static_cast<double>(counts[static_cast<std::size_t>(i)]) / depth;
      }
      out.push_back(std::move(w));
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[static_cast<std::size_t>(index)] = c;
      self(self, index + 1, remaining - c);
    }
  };
  recurse(recurse, 0, depth);
  return out;
}

}  // namespace vvicert
