#include "vvicert/cone.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "vvicert/error.hpp"

namespace vvicert {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kSameRayTolerance = 1e-9;

Matrix normalizedRows(const Matrix& rows) {
  Matrix out = rows;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorKind::Validation, "cone normal " + std::to_string(i) + " is zero or non-finite");
    }
    out.row(i) /= norm;
  }
  return out;
}

// Advance `idx` to the next k-subset of {0..n-1} in lexicographic order.
bool nextCombination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<std::size_t>(i)] < n - k + i) {
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

void appendUnique(std::vector<Vector>& rays, const Vector& v) {
  for (const auto& r : rays) {
    if ((r - v).norm() <= kSameRayTolerance) return;
  }
  rays.push_back(v);
}

}  // namespace

Matrix enumerateExtremeRays(const Matrix& rows) {
  const int m = static_cast<int>(rows.cols());
  const int k = static_cast<int>(rows.rows());
  if (m < 1) throw Error(ErrorKind::Validation, "cone dimension must be positive");

  Eigen::FullPivLU<Matrix> lu(rows);
  lu.setThreshold(kRankTolerance);
  if (lu.rank() < m) {
    throw Error(ErrorKind::Validation,
                "cone is not pointed: the halfspace normals have rank " +
                    std::to_string(lu.rank()) + " < " + std::to_string(m));
  }

  const Matrix unit = normalizedRows(rows);
  std::vector<Vector> rays;
  auto consider = [&](const Vector& direction) {
    for (const Vector& candidate : {Vector(direction), Vector(-direction)}) {
      if (((unit * candidate).array() >= -kRankTolerance).all()) {
        appendUnique(rays, candidate.normalized());
      }
    }
  };

  if (m == 1) {
    consider(Vector::Ones(1));
  } else {
    std::vector<int> idx(static_cast<std::size_t>(m - 1));
    for (int i = 0; i < m - 1; ++i) idx[static_cast<std::size_t>(i)] = i;
    do {
      Matrix sub(m - 1, m);
      for (int i = 0; i < m - 1; ++i) sub.row(i) = unit.row(idx[static_cast<std::size_t>(i)]);
      Eigen::FullPivLU<Matrix> sublu(sub);
      sublu.setThreshold(kRankTolerance);
      if (sublu.rank() != m - 1) continue;
      const Matrix kernel = sublu.kernel();
      consider(kernel.col(0).normalized());
    } while (nextCombination(idx, k));
  }

  if (rays.empty()) {
    throw Error(ErrorKind::Validation, "cone {v : Nv >= 0} has no extreme rays");
  }
  Matrix out(m, static_cast<Eigen::Index>(rays.size()));
  for (std::size_t j = 0; j < rays.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = rays[j];
  return out;
}

OrderingCone::OrderingCone(Matrix normals, Matrix generators, double margin, bool orthant)
    : normals_(std::move(normals)),
      generators_(std::move(generators)),
      margin_(margin),
      orthant_(orthant) {
  witness_ = generators_.rowwise().sum();
  const double norm = witness_.norm();
  if (norm > 0.0) witness_ /= norm;
  validate();
}

void OrderingCone::validate() const {
  const int m = dim();
  if (generators_.rows() != m) {
    throw Error(ErrorKind::Validation, "generator and normal dimensions differ");
  }
  if (margin_ < 0.0) throw Error(ErrorKind::Validation, "strictness margin must be >= 0");
  // Every generator must satisfy every halfspace.
  const Matrix products = normals_ * generators_;
  if ((products.array() < -1e-9).any()) {
    throw Error(ErrorKind::Validation, "a cone generator violates a cone halfspace");
  }
  if (!strictlyContains(witness_)) {
    throw Error(ErrorKind::Validation, "cone has an empty interior");
  }
  Eigen::FullPivLU<Matrix> lu(normals_);
  lu.setThreshold(kRankTolerance);
  if (lu.rank() < m) throw Error(ErrorKind::Validation, "cone is not pointed");
}

OrderingCone OrderingCone::orthant(int m, double margin) {
  if (m < 1) throw Error(ErrorKind::Validation, "cone dimension must be positive");
  return OrderingCone(Matrix::Identity(m, m), Matrix::Identity(m, m), margin, true);
}

OrderingCone OrderingCone::fromNormals(const Matrix& normals, double margin) {
  if (normals.cols() > kMaxEnumerationDim) {
    throw Error(ErrorKind::Validation,
                "generators must be supplied for cones of dimension > " +
                    std::to_string(kMaxEnumerationDim));
  }
  const Matrix unit = normalizedRows(normals);
  return OrderingCone(unit, enumerateExtremeRays(unit), margin, false);
}

OrderingCone OrderingCone::fromGenerators(const Matrix& generators, double margin) {
  if (generators.rows() > kMaxEnumerationDim) {
    throw Error(ErrorKind::Validation,
                "normals must be supplied for cones of dimension > " +
                    std::to_string(kMaxEnumerationDim));
  }
  const Matrix unit = normalizedRows(generators.transpose()).transpose();
  // Facets of cone(G) are the extreme rays of its dual {w : G^T w >= 0}.
  const Matrix facets = enumerateExtremeRays(unit.transpose());
  return OrderingCone(facets.transpose(), enumerateExtremeRays(facets.transpose()), margin, false);
}

OrderingCone OrderingCone::fromBoth(const Matrix& normals, const Matrix& generators,
                                    double margin) {
  if (normals.cols() != generators.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "normals and generators have different dimensions");
  }
  const Matrix unitNormals = normalizedRows(normals);
  const Matrix unitGenerators = normalizedRows(generators.transpose()).transpose();
  if (normals.cols() <= kMaxEnumerationDim) {
    const Matrix derived = enumerateExtremeRays(unitNormals);
    for (Eigen::Index j = 0; j < derived.cols(); ++j) {
      bool found = false;
      for (Eigen::Index g = 0; g < unitGenerators.cols() && !found; ++g) {
        found = (derived.col(j) - unitGenerators.col(g)).norm() <= 1e-7;
      }
      if (!found) {
        throw Error(ErrorKind::Validation,
                    "supplied generators miss an extreme ray of the halfspace description");
      }
    }
  }
  return OrderingCone(unitNormals, unitGenerators, margin, false);
}

const Vector& OrderingCone::checked(const Vector& v) const {
  if (v.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector of size " + std::to_string(v.size()) + " compared in a cone of dimension " +
                    std::to_string(dim()));
  }
  return v;
}

bool OrderingCone::contains(const Vector& v, double tol) const {
  checked(v);
  if (orthant_) return (v.array() >= -tol).all();
  return ((normals_ * v).array() >= -tol).all();
}

bool OrderingCone::strictlyContains(const Vector& v) const {
  checked(v);
  const double threshold = margin_ * v.norm();
  if (orthant_) return (v.array() > threshold).all();
  return ((normals_ * v).array() > threshold).all();
}

bool OrderingCone::validateE(const Vector& e) const {
  return e.size() == dim() && strictlyContains(e);
}

OrderingCone OrderingCone::dual() const {
  return OrderingCone(generators_.transpose(), normals_.transpose(), margin_, orthant_);
}

}  // namespace vvicert
