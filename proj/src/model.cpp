#include "vvicert/model.hpp"

#include <algorithm>
#include <cmath>

#include "vvicert/error.hpp"
#include "vvicert/sampling.hpp"

namespace vvicert {

namespace {

std::string formatPoint(const Vector& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(x(i));
  }
  return out + ")";
}

double valueTolerance(const Vector& a, const Vector& b) {
  return kContinuityTolerance *
         (1.0 + std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>()));
}

}  // namespace

bool Box::containsInterior(const Vector& x, double inset) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) >= lower(i) + inset && x(i) <= upper(i) - inset)) return false;
  }
  return true;
}

bool Box::containsBall(const Vector& center, double r, double inset) const {
  if (center.size() != lower.size() || r < 0.0) return false;
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    if (!(center(i) - r >= lower(i) + inset && center(i) + r <= upper(i) - inset)) return false;
  }
  return true;
}

Matrix JacobianPolytope::combine(const Vector& weights) const {
  Matrix out = Matrix::Zero(vertices.front().rows(), vertices.front().cols());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    out += weights(static_cast<Eigen::Index>(i)) * vertices[i];
  }
  return out;
}

bool OuterBox::containsRow(std::size_t component, const Vector& row, double tol) const {
  return ((row - lower[component]).array() >= -tol).all() &&
         ((upper[component] - row).array() >= -tol).all();
}

Piece PiecewiseVectorFn::makePiece(Predicate region, std::vector<Expr> components, int n) {
  Piece piece{std::move(region), std::move(components), {}};
  for (const Expr& c : piece.components) {
    if (c.containsAbs()) {
      throw Error(ErrorKind::Validation,
                  "piece component '" + print(c) + "' uses abs; pieces must be smooth");
    }
    std::vector<Expr> row;
    row.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) row.push_back(differentiate(c, {Arg::X, j}));
    piece.jacobian.push_back(std::move(row));
  }
  return piece;
}

PiecewiseVectorFn::PiecewiseVectorFn(int n, int m, Box domain, std::vector<Piece> pieces)
    : n_(n), m_(m), domain_(std::move(domain)), pieces_(std::move(pieces)) {
  if (n < 1 || m < 1) throw Error(ErrorKind::Validation, "dimensions n and m must be positive");
  if (domain_.lower.size() != n || domain_.upper.size() != n) {
    throw Error(ErrorKind::Validation, "domain box dimension differs from n");
  }
  for (int i = 0; i < n; ++i) {
    if (!(domain_.lower(i) + 2 * kDomainInset < domain_.upper(i))) {
      throw Error(ErrorKind::Validation, "domain box has an empty interior in coordinate " +
                                             std::to_string(i + 1));
    }
  }
  if (pieces_.empty()) throw Error(ErrorKind::Validation, "a function needs at least one piece");
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    Piece& piece = pieces_[p];
    if (static_cast<int>(piece.components.size()) != m) {
      throw Error(ErrorKind::Validation, "piece " + std::to_string(p + 1) + " has " +
                                             std::to_string(piece.components.size()) +
                                             " components, expected " + std::to_string(m));
    }
    if (piece.region.maxIndex() >= n) {
      throw Error(ErrorKind::Validation,
                  "region of piece " + std::to_string(p + 1) + " references an input beyond n");
    }
    for (const Expr& c : piece.components) {
      if (c.maxIndex(Arg::X) >= n || c.maxIndex(Arg::Y) >= 0) {
        throw Error(ErrorKind::Validation,
                    "component '" + print(c) + "' references a variable beyond x1..xn");
      }
    }
    if (piece.jacobian.size() != piece.components.size()) {
      piece = makePiece(piece.region, piece.components, n);
    }
  }
}

void PiecewiseVectorFn::requireInDomain(const Vector& x) const {
  if (x.size() != n_) {
    throw Error(ErrorKind::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(n_));
  }
  if (!domain_.containsInterior(x)) {
    throw Error(ErrorKind::OutOfDomain, "point " + formatPoint(x) + " is outside the open domain");
  }
}

std::vector<std::size_t> PiecewiseVectorFn::activePieces(const Vector& x, double slack) const {
  std::vector<std::size_t> active;
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    if (pieces_[p].region.holds(view(x), slack)) active.push_back(p);
  }
  return active;
}

Vector PiecewiseVectorFn::evalPiece(std::size_t piece, const Vector& x) const {
  const auto& comps = pieces_[piece].components;
  Vector v(m_);
  for (int i = 0; i < m_; ++i) v(i) = comps[static_cast<std::size_t>(i)].eval(view(x));
  return v;
}

Matrix PiecewiseVectorFn::jacobianOfPiece(std::size_t piece, const Vector& x) const {
  const auto& jac = pieces_[piece].jacobian;
  Matrix J(m_, n_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < n_; ++j) {
      J(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(view(x));
    }
  }
  return J;
}

Vector PiecewiseVectorFn::eval(const Vector& x) const {
  requireInDomain(x);
  auto active = activePieces(x, 0.0);
  if (active.empty()) active = activePieces(x, kActiveTolerance);
  if (active.empty()) {
    throw Error(ErrorKind::NoActivePiece, "no piece is active at " + formatPoint(x));
  }
  const Vector value = evalPiece(active.front(), x);
  for (std::size_t k = 1; k < active.size(); ++k) {
    const Vector other = evalPiece(active[k], x);
    if ((value - other).lpNorm<Eigen::Infinity>() > valueTolerance(value, other)) {
      throw Error(ErrorKind::InconsistentPieces,
                  "pieces " + std::to_string(active.front() + 1) + " and " +
                      std::to_string(active[k] + 1) + " disagree at " + formatPoint(x));
    }
  }
  return value;
}

JacobianPolytope PiecewiseVectorFn::clarkeJacobian(const Vector& x, double tolActive) const {
  requireInDomain(x);
  JacobianPolytope poly;
  poly.point = x;
  poly.activePieces = activePieces(x, tolActive);
  if (poly.activePieces.empty()) {
    throw Error(ErrorKind::NoActivePiece, "no piece is active at " + formatPoint(x));
  }
  for (std::size_t p : poly.activePieces) {
    Matrix J = jacobianOfPiece(p, x);
    const bool duplicate = std::any_of(poly.vertices.begin(), poly.vertices.end(), [&](const Matrix& v) {
      return (v - J).lpNorm<Eigen::Infinity>() <= kVertexMergeTolerance;
    });
    if (!duplicate) poly.vertices.push_back(std::move(J));
  }
  return poly;
}

OuterBox PiecewiseVectorFn::cartesianOuterBox(const Vector& x, double tolActive) const {
  const JacobianPolytope poly = clarkeJacobian(x, tolActive);
  OuterBox box;
  for (int i = 0; i < m_; ++i) {
    Vector lo = poly.vertices.front().row(i).transpose();
    Vector hi = lo;
    for (const Matrix& V : poly.vertices) {
      lo = lo.cwiseMin(V.row(i).transpose());
      hi = hi.cwiseMax(V.row(i).transpose());
    }
    box.lower.push_back(std::move(lo));
    box.upper.push_back(std::move(hi));
  }
  return box;
}

PiecewiseVectorFn PiecewiseVectorFn::negated() const {
  std::vector<Piece> pieces;
  pieces.reserve(pieces_.size());
  for (const Piece& p : pieces_) {
    Piece q;
    q.region = p.region;
    for (const Expr& c : p.components) q.components.push_back(-c);
    for (const auto& row : p.jacobian) {
      std::vector<Expr> negRow;
      for (const Expr& d : row) negRow.push_back(-d);
      q.jacobian.push_back(std::move(negRow));
    }
    pieces.push_back(std::move(q));
  }
  return PiecewiseVectorFn(n_, m_, domain_, std::move(pieces));
}

Vector evalF(const PiecewiseVectorFn& f, const Vector& x) { return f.eval(x); }

JacobianPolytope clarkeJacobian(const PiecewiseVectorFn& f, const Vector& x, double tolActive) {
  return f.clarkeJacobian(x, tolActive);
}

OuterBox cartesianOuterBox(const PiecewiseVectorFn& f, const Vector& x, double tolActive) {
  return f.cartesianOuterBox(x, tolActive);
}

std::vector<ModelIssue> checkModelInvariants(const PiecewiseVectorFn& f, int samples,
                                             std::uint64_t seed) {
  std::vector<ModelIssue> issues;
  const Box& d = f.domain();
  const Vector lo = d.lower.array() + kDomainInset;
  const Vector hi = d.upper.array() - kDomainInset;
  BoxSampler sampler(lo, hi, seed);

  int gaps = 0;
  int overlaps = 0;
  int jumps = 0;
  Vector firstGap;
  std::string overlapMessage;
  std::string jumpMessage;

  auto firstActive = [&](const Vector& x) -> long {
    const auto a = f.activePieces(x, 0.0);
    return a.empty() ? -1 : static_cast<long>(a.front());
  };

  Vector previous;
  long previousPiece = -1;
  int bisections = 0;
  for (int s = 0; s < samples; ++s) {
    const Vector x = sampler.next();
    const auto active = f.activePieces(x, kActiveTolerance);
    if (active.empty()) {
      if (gaps++ == 0) firstGap = x;
      previousPiece = -1;
      continue;
    }
    const auto exact = f.activePieces(x, 0.0);
    if (exact.size() >= 2) {
      const Vector v0 = f.evalPiece(exact.front(), x);
      for (std::size_t k = 1; k < exact.size(); ++k) {
        const Vector vk = f.evalPiece(exact[k], x);
        if ((v0 - vk).lpNorm<Eigen::Infinity>() > valueTolerance(v0, vk)) {
          if (overlaps++ == 0) {
            overlapMessage = "pieces " + std::to_string(exact.front() + 1) + " and " +
                             std::to_string(exact[k] + 1) + " overlap at " + formatPoint(x) +
                             " with different values";
          }
        }
      }
    }

    // Locate the boundary between consecutive samples covered by different
    // pieces and compare the two selections there.
    const long piece = firstActive(x);
    if (piece >= 0 && previousPiece >= 0 && piece != previousPiece && bisections < 256) {
      ++bisections;
      Vector inside = previous;  // covered by previousPiece
      Vector outside = x;
      for (int it = 0; it < 80; ++it) {
        const Vector mid = 0.5 * (inside + outside);
        if (f.pieces()[static_cast<std::size_t>(previousPiece)].region.holds(view(mid), 0.0)) {
          inside = mid;
        } else {
          outside = mid;
        }
      }
      const long across = firstActive(outside);
      if (across >= 0 && across != previousPiece) {
        const Vector a = f.evalPiece(static_cast<std::size_t>(previousPiece), inside);
        const Vector b = f.evalPiece(static_cast<std::size_t>(across), outside);
        const double gap = (a - b).lpNorm<Eigen::Infinity>();
        const double step = (inside - outside).norm();
        if (gap > valueTolerance(a, b) + 1e3 * step) {
          if (jumps++ == 0) {
            jumpMessage = "pieces " + std::to_string(previousPiece + 1) + " and " +
                          std::to_string(across + 1) + " disagree across their boundary near " +
                          formatPoint(inside);
          }
        }
      }
    }
    previous = x;
    previousPiece = piece;
  }

  if (gaps > 0) {
    issues.push_back({ModelIssue::Severity::Warning, "coverage",
                      std::to_string(gaps) + " of " + std::to_string(samples) +
                          " sampled points are covered by no piece, first at " +
                          formatPoint(firstGap)});
  }
  if (overlaps > 0) {
    issues.push_back({ModelIssue::Severity::Error, "continuity", overlapMessage});
  }
  if (jumps > 0) {
    issues.push_back({ModelIssue::Severity::Error, "continuity", jumpMessage});
  }
  return issues;
}

LipschitzEstimate lipschitzEstimate(const PiecewiseVectorFn& f, const Vector& x0, double r,
                                    int samples, std::uint64_t seed) {
  f.requireInDomain(x0);
  if (!f.domain().containsBall(x0, r)) {
    throw Error(ErrorKind::OutOfDomain, "ball B(" + formatPoint(x0) + ", " + std::to_string(r) +
                                            ") leaves the domain");
  }
  LipschitzEstimate est{x0, r, 0.0, samples};
  PairSampler pairs(x0, r, seed);
  for (int s = 0; s < samples; ++s) {
    const auto [x, y] = pairs.next();
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    est.constant = std::max(est.constant, (f.eval(x) - f.eval(y)).norm() / dist);
  }
  return est;
}

// ---------------------------------------------------------------------------

Kernel::Kernel(Kind kind, int n, std::vector<Expr> components)
    : kind_(kind), n_(n), components_(std::move(components)) {
  if (n < 1) throw Error(ErrorKind::Validation, "kernel dimension must be positive");
}

Kernel Kernel::difference(int n) { return Kernel(Kind::Difference, n, {}); }

Kernel Kernel::negNormDifference(int n) { return Kernel(Kind::NegNormDifference, n, {}); }

Kernel Kernel::custom(int n, std::vector<Expr> components) {
  if (static_cast<int>(components.size()) != n) {
    throw Error(ErrorKind::Validation, "custom kernel needs " + std::to_string(n) +
                                           " components, got " + std::to_string(components.size()));
  }
  for (const Expr& c : components) {
    if (c.maxIndex(Arg::X) >= n || c.maxIndex(Arg::Y) >= n) {
      throw Error(ErrorKind::Validation, "kernel component '" + print(c) + "' exceeds dimension");
    }
    if (c.containsAbs()) {
      throw Error(ErrorKind::Validation, "kernel component '" + print(c) + "' uses abs");
    }
  }
  return Kernel(Kind::Custom, n, std::move(components));
}

std::string Kernel::name() const {
  switch (kind_) {
    case Kind::Difference: return "difference";
    case Kind::NegNormDifference: return "negNormDifference";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

Vector Kernel::eval(const Vector& x, const Vector& y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw Error(ErrorKind::DimensionMismatch, "kernel arguments must have dimension " + std::to_string(n_));
  }
  switch (kind_) {
    case Kind::Difference:
      return x - y;
    case Kind::NegNormDifference:
      return Vector::Constant(n_, -(x - y).norm());
    case Kind::Custom: {
      Vector out(n_);
      for (int i = 0; i < n_; ++i) out(i) = components_[static_cast<std::size_t>(i)].eval(view(x), view(y));
      return out;
    }
  }
  return Vector::Zero(n_);
}

Vector evalKernel(const Kernel& k, const Vector& x, const Vector& y) { return k.eval(x, y); }

KernelFlags kernelFlags(const Kernel& k, const Box& domain, int samples, std::uint64_t seed) {
  KernelFlags flags{true, true, true, samples, seed};
  const int n = k.dim();
  const Vector lo = domain.lower.array() + kDomainInset;
  const Vector hi = domain.upper.array() - kDomainInset;
  // Three points and an affine weight per sample, from one 3n+1 dim stream.
  Vector lo3(3 * n + 1);
  Vector hi3(3 * n + 1);
  lo3 << lo, lo, lo, 0.0;
  hi3 << hi, hi, hi, 1.0;
  BoxSampler sampler(lo3, hi3, seed);
  auto close = [](const Vector& a, const Vector& b) {
    const double scale = 1.0 + std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
    return (a - b).lpNorm<Eigen::Infinity>() <= 1e-9 * scale;
  };
  for (int s = 0; s < samples; ++s) {
    const Vector u = sampler.next();
    const Vector x = u.segment(0, n);
    const Vector x2 = u.segment(n, n);
    const Vector y = u.segment(2 * n, n);
    const double lambda = u(3 * n);
    const Vector exy = k.eval(x, y);
    if (flags.skew && !close(exy + k.eval(y, x), Vector::Zero(n))) flags.skew = false;
    if (flags.vanishesOnDiagonal && !close(k.eval(x, x), Vector::Zero(n))) {
      flags.vanishesOnDiagonal = false;
    }
    if (flags.firstArgAffine) {
      const Vector mixed = k.eval(lambda * x + (1.0 - lambda) * x2, y);
      const Vector expected = lambda * exy + (1.0 - lambda) * k.eval(x2, y);
      if (!close(mixed, expected)) flags.firstArgAffine = false;
    }
  }
  return flags;
}

Kernel kernelByName(const std::string& name, int n) {
  if (name == "difference") return Kernel::difference(n);
  if (name == "negNormDifference" || name == "negnorm" || name == "neg-norm-difference") {
    return Kernel::negNormDifference(n);
  }
  throw Error(ErrorKind::Usage, "unknown kernel '" + name + "' (expected difference or negNormDifference)");
}

}  // namespace vvicert
