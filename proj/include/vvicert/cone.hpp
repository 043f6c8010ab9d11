#pragma once

#include "vvicert/linalg.hpp"

namespace vvicert {

/// Absolute slack for non-strict membership, applied to unit normals.
inline constexpr double kMembershipTolerance = 1e-12;
/// Relative margin for strict (interior) membership.
inline constexpr double kStrictMargin = 1e-9;
/// Largest dimension for which generators and facets are derived from each
/// other; above it both representations must be supplied.
inline constexpr int kMaxEnumerationDim = 4;

/// Closed pointed polyhedral cone C with nonempty interior, stored both as
/// halfspaces {v : N v >= 0} and as extreme rays. Induces v >=_C 0 and the
/// strict order v >_C 0 (v in int C). Immutable after construction.
class OrderingCone {
 public:
  /// The nonnegative orthant of R^m.
  static OrderingCone orthant(int m, double margin = kStrictMargin);
  /// `normals` holds one inward normal per row. Requires m <= 4.
  static OrderingCone fromNormals(const Matrix& normals, double margin = kStrictMargin);
  /// `generators` holds one extreme ray per column. Requires m <= 4.
  static OrderingCone fromGenerators(const Matrix& generators, double margin = kStrictMargin);
  /// Both representations, checked for consistency.
  static OrderingCone fromBoth(const Matrix& normals, const Matrix& generators,
                               double margin = kStrictMargin);

  int dim() const { return static_cast<int>(normals_.cols()); }
  bool isOrthant() const { return orthant_; }
  double margin() const { return margin_; }
  /// Unit inward normals, one per row.
  const Matrix& normals() const { return normals_; }
  /// Unit extreme rays, one per column.
  const Matrix& generators() const { return generators_; }
  const Vector& interiorWitness() const { return witness_; }

  /// v >=_C 0, i.e. every normal row satisfies n.v >= -tol.
  bool contains(const Vector& v, double tol = kMembershipTolerance) const;
  /// v >_C 0, i.e. every normal row satisfies n.v > margin * |v|.
  bool strictlyContains(const Vector& v) const;

  /// x <=_C y.
  bool leq(const Vector& x, const Vector& y) const { return contains(checked(y) - checked(x)); }
  /// x <_C y.
  bool lt(const Vector& x, const Vector& y) const {
    return strictlyContains(checked(y) - checked(x));
  }

  /// e >_C 0 as required of the approximation vector.
  bool validateE(const Vector& e) const;

  /// The dual cone {w : w.v >= 0 for all v in C}.
  OrderingCone dual() const;

 private:
  OrderingCone(Matrix normals, Matrix generators, double margin, bool orthant);
  const Vector& checked(const Vector& v) const;
  void validate() const;

  Matrix normals_;
  Matrix generators_;
  Vector witness_;
  double margin_;
  bool orthant_;
};

/// Extreme rays (unit columns) of the pointed cone {v : rows * v >= 0},
/// by enumerating (m-1)-subsets of constraints. Throws Error(Validation) if
/// the cone is not pointed.
Matrix enumerateExtremeRays(const Matrix& rows);

}  // namespace vvicert
