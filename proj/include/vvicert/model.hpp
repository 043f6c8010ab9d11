#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vvicert/expr.hpp"
#include "vvicert/linalg.hpp"
#include "vvicert/predicate.hpp"

namespace vvicert {

/// Open-domain emulation: points must keep this distance from the box faces.
inline constexpr double kDomainInset = 1e-9;
/// Region inflation used to decide which pieces are active at a point.
inline constexpr double kActiveTolerance = 1e-7;
/// Jacobian vertices closer than this (max-abs entry) are merged.
inline constexpr double kVertexMergeTolerance = 1e-9;
/// Allowed disagreement between simultaneously active pieces.
inline constexpr double kContinuityTolerance = 1e-6;

struct Box {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }
  /// x lies inside the box shrunk by `inset` on every face.
  bool containsInterior(const Vector& x, double inset = kDomainInset) const;
  /// The closed ball B(center, r) fits inside the shrunk box.
  bool containsBall(const Vector& center, double r, double inset = kDomainInset) const;
};

/// One smooth selection of a piecewise function together with the region
/// on which it is active. Jacobian entries are derived symbolically.
struct Piece {
  Predicate region;
  std::vector<Expr> components;               // m entries
  std::vector<std::vector<Expr>> jacobian;    // m x n partial derivatives
};

/// Vertex description of the generalized Jacobian at a point: the convex
/// hull of the Jacobians of all pieces active there.
struct JacobianPolytope {
  std::vector<Matrix> vertices;
  Vector point;
  std::vector<std::size_t> activePieces;

  /// sum_i weights(i) * vertices[i]
  Matrix combine(const Vector& weights) const;
};

/// Per-component interval hull of the gradient rows over the active pieces:
/// component i's rows all lie in [lower[i], upper[i]] coordinatewise.
struct OuterBox {
  std::vector<Vector> lower;
  std::vector<Vector> upper;

  bool containsRow(std::size_t component, const Vector& row, double tol = kVertexMergeTolerance) const;
};

/// Piecewise-smooth vector function f : X -> R^m on an open box X in R^n.
/// Immutable after construction; all evaluation is reentrant.
class PiecewiseVectorFn {
 public:
  /// Throws Error(Validation) if a component is non-smooth or references an
  /// input beyond n, or dimensions disagree.
  PiecewiseVectorFn(int n, int m, Box domain, std::vector<Piece> pieces);

  static Piece makePiece(Predicate region, std::vector<Expr> components, int n);

  int n() const { return n_; }
  int m() const { return m_; }
  const Box& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Indices of pieces whose region, relaxed by `slack`, contains x.
  std::vector<std::size_t> activePieces(const Vector& x, double slack) const;

  Vector evalPiece(std::size_t piece, const Vector& x) const;
  Matrix jacobianOfPiece(std::size_t piece, const Vector& x) const;

  /// Value of the first active piece. Throws OutOfDomain, NoActivePiece, or
  /// InconsistentPieces when active pieces disagree beyond tolerance.
  Vector eval(const Vector& x) const;

  JacobianPolytope clarkeJacobian(const Vector& x, double tolActive = kActiveTolerance) const;
  OuterBox cartesianOuterBox(const Vector& x, double tolActive = kActiveTolerance) const;

  /// -f, built by negating every component of every piece.
  PiecewiseVectorFn negated() const;

  void requireInDomain(const Vector& x) const;

 private:
  int n_;
  int m_;
  Box domain_;
  std::vector<Piece> pieces_;
};

Vector evalF(const PiecewiseVectorFn& f, const Vector& x);
JacobianPolytope clarkeJacobian(const PiecewiseVectorFn& f, const Vector& x,
                                double tolActive = kActiveTolerance);
OuterBox cartesianOuterBox(const PiecewiseVectorFn& f, const Vector& x,
                           double tolActive = kActiveTolerance);

/// A failed sampled invariant of a loaded function.
struct ModelIssue {
  enum class Severity { Warning, Error };
  Severity severity;
  std::string invariant;
  std::string message;
};

/// Sampled checks of coverage and continuity (including boundary points
/// located by bisection between differently-covered samples).
std::vector<ModelIssue> checkModelInvariants(const PiecewiseVectorFn& f, int samples,
                                             std::uint64_t seed);

struct LipschitzEstimate {
  Vector center;
  double radius = 0.0;
  double constant = 0.0;
  int samples = 0;
};

/// Largest difference quotient |f(x) - f(y)| / |x - y| over `samples` pairs
/// drawn from B(x0, r). Sample n is a prefix of sample n+1, so the estimate
/// never decreases with the count.
LipschitzEstimate lipschitzEstimate(const PiecewiseVectorFn& f, const Vector& x0, double r,
                                    int samples, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// The map eta : X x X -> R^n that replaces x - y in the invexity notions.
class Kernel {
 public:
  enum class Kind { Difference, NegNormDifference, Custom };

  /// eta(x, y) = x - y
  static Kernel difference(int n);
  /// eta(x, y) = -|x - y| in every coordinate; -|x - y| when n = 1.
  static Kernel negNormDifference(int n);
  /// User expressions over x1..xn, y1..yn; one per output coordinate.
  static Kernel custom(int n, std::vector<Expr> components);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  std::string name() const;
  const std::vector<Expr>& components() const { return components_; }

  Vector eval(const Vector& x, const Vector& y) const;

 private:
  Kernel(Kind kind, int n, std::vector<Expr> components);
  Kind kind_;
  int n_;
  std::vector<Expr> components_;
};

Vector evalKernel(const Kernel& k, const Vector& x, const Vector& y);

/// Structural properties of a kernel verified on seeded samples.
struct KernelFlags {
  bool skew = false;               // eta(x, y) + eta(y, x) = 0
  bool firstArgAffine = false;     // eta(. , y) affine
  bool vanishesOnDiagonal = false; // eta(x, x) = 0
  int samples = 0;
  std::uint64_t seed = 0;
};

KernelFlags kernelFlags(const Kernel& k, const Box& domain, int samples, std::uint64_t seed);

/// Parses a kernel name as accepted on the command line.
Kernel kernelByName(const std::string& name, int n);

}  // namespace vvicert
