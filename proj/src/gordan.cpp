#include <cmath>

#include "vvicert/certify.hpp"
#include "vvicert/error.hpp"
#include "vvicert/lp.hpp"
#include "vvicert/sampling.hpp"

namespace vvicert {

namespace {

// Primal margins above this mean A x <_C 0 is solvable.
constexpr double kPrimalSeparation = 1e-9;
// Dual residuals below this (relative to |A|) mean A^T y = 0 is solvable.
constexpr double kDualResidual = 1e-10;

double matrixScale(const Matrix& A) { return 1.0 + A.cwiseAbs().maxCoeff(); }

// max t  s.t.  (N A) x + t 1 <= 0,  -1 <= x <= 1,  t >= 0.
LpResult solvePrimal(const Matrix& B) {
  const auto k = B.rows();
  const auto n = B.cols();
  LinearProgram lp;
  lp.A = Matrix::Zero(k + 2 * n, 2 * n + 1);
  lp.b = Vector::Zero(k + 2 * n);
  lp.relations.assign(static_cast<std::size_t>(k + 2 * n), Relation::LessEqual);
  lp.A.block(0, 0, k, n) = B;
  lp.A.block(0, n, k, n) = -B;
  lp.A.col(2 * n).head(k).setOnes();
  for (Eigen::Index j = 0; j < 2 * n; ++j) {
    lp.A(k + j, j) = 1.0;
    lp.b(k + j) = 1.0;
  }
  lp.c = Vector::Zero(2 * n + 1);
  lp.c(2 * n) = 1.0;
  return solve(lp);
}

// min s  s.t.  -s <= (B^T z)_j <= s,  sum z = 1,  z >= 0.
LpResult solveDual(const Matrix& B) {
  const auto k = B.rows();
  const auto n = B.cols();
  LinearProgram lp;
  lp.A = Matrix::Zero(2 * n + 1, k + 1);
  lp.b = Vector::Zero(2 * n + 1);
  lp.relations.assign(static_cast<std::size_t>(2 * n + 1), Relation::LessEqual);
  const Matrix Bt = B.transpose();
  lp.A.block(0, 0, n, k) = Bt;
  lp.A.block(n, 0, n, k) = -Bt;
  lp.A.col(k).head(2 * n).setConstant(-1.0);
  lp.A.row(2 * n).head(k).setOnes();
  lp.b(2 * n) = 1.0;
  lp.relations.back() = Relation::Equal;
  lp.c = Vector::Zero(k + 1);
  lp.c(k) = -1.0;
  return solve(lp);
}

}  // namespace

bool verifyGordanPrimal(const Matrix& A, const OrderingCone& cone, const Vector& x) {
  return x.size() == A.cols() && cone.strictlyContains(-(A * x));
}

bool verifyGordanDual(const Matrix& A, const OrderingCone& cone, const Vector& y) {
  if (y.size() != A.rows() || !(y.norm() > 0.0)) return false;
  const double residual = (A.transpose() * y).lpNorm<Eigen::Infinity>();
  return residual <= 1e-9 * matrixScale(A) * y.lpNorm<1>() && cone.dual().contains(y, 1e-12);
}

GordanResult gordanAlternative(const Matrix& A, const OrderingCone& cone) {
  if (A.rows() != cone.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix has " + std::to_string(A.rows()) +
                                                  " rows, the cone has dimension " +
                                                  std::to_string(cone.dim()));
  }
  if (!A.allFinite()) throw Error(ErrorKind::Validation, "matrix has non-finite entries");

  // In normal coordinates A x <_C 0 reads (N A) x < 0, and the dual cone is
  // generated by the rows of N, so both alternatives become orthant problems.
  const Matrix B = cone.normals() * A;
  const LpResult primal = solvePrimal(B);
  const LpResult dual = solveDual(B);
  if (primal.status != LpResult::Status::Optimal || dual.status != LpResult::Status::Optimal) {
    throw Error(ErrorKind::Degenerate, "a Gordan linear program did not reach an optimum");
  }

  GordanResult result;
  result.primalValue = primal.value;
  result.dualValue = -dual.value;
  const bool primalHolds = result.primalValue > kPrimalSeparation;
  const bool dualHolds = result.dualValue <= kDualResidual * matrixScale(B);
  if (primalHolds == dualHolds) {
    throw Error(ErrorKind::Degenerate,
                "Gordan alternatives are numerically ambiguous (primal margin " +
                    std::to_string(result.primalValue) + ", dual residual " +
                    std::to_string(result.dualValue) + ")");
  }

  const auto n = A.cols();
  if (primalHolds) {
    result.which = GordanResult::Alternative::Primal;
    result.x = primal.x.head(n) - primal.x.segment(n, n);
    if (!verifyGordanPrimal(A, cone, result.x)) {
      throw Error(ErrorKind::Degenerate, "primal Gordan certificate failed re-verification");
    }
  } else {
    result.which = GordanResult::Alternative::Dual;
    const Vector z = dual.x.head(B.rows()).cwiseMax(0.0);
    result.y = cone.normals().transpose() * (z / z.sum());
    if (!verifyGordanDual(A, cone, result.y)) {
      throw Error(ErrorKind::Degenerate, "dual Gordan certificate failed re-verification");
    }
  }
  return result;
}

std::optional<Vector> criticalMultiplier(const Matrix& A, const OrderingCone& cone) {
  if (A.rows() != cone.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix rows differ from the cone dimension");
  }
  // Variables (mu+, mu-, s); mu = mu+ - mu-.
  //   A^T mu = 0,  G^T mu - s >= 0,  1^T G^T mu = 1,  maximize s.
  const auto m = A.rows();
  const auto n = A.cols();
  const Matrix Gt = cone.generators().transpose();
  const auto p = Gt.rows();
  LinearProgram lp;
  lp.A = Matrix::Zero(n + p + 1, 2 * m + 1);
  lp.b = Vector::Zero(n + p + 1);
  lp.relations.assign(static_cast<std::size_t>(n + p + 1), Relation::Equal);
  lp.A.block(0, 0, n, m) = A.transpose();
  lp.A.block(0, m, n, m) = -A.transpose();
  lp.A.block(n, 0, p, m) = Gt;
  lp.A.block(n, m, p, m) = -Gt;
  lp.A.col(2 * m).segment(n, p).setConstant(-1.0);
  for (Eigen::Index i = 0; i < p; ++i) lp.relations[static_cast<std::size_t>(n + i)] = Relation::GreaterEqual;
  const Vector ones = Gt.colwise().sum().transpose();
  lp.A.block(n + p, 0, 1, m) = ones.transpose();
  lp.A.block(n + p, m, 1, m) = -ones.transpose();
  lp.b(n + p) = 1.0;
  lp.c = Vector::Zero(2 * m + 1);
  lp.c(2 * m) = 1.0;

  const LpResult r = solve(lp);
  if (r.status != LpResult::Status::Optimal) return std::nullopt;
  const Vector mu = r.x.head(m) - r.x.segment(m, m);
  if (!cone.dual().strictlyContains(mu)) return std::nullopt;
  if ((A.transpose() * mu).lpNorm<Eigen::Infinity>() > 1e-9 * matrixScale(A)) return std::nullopt;
  return mu;
}

Verdict checkVectorCritical(const PiecewiseVectorFn& f, const Vector& xi, const OrderingCone& cone,
                            const SamplingPlan& plan) {
  if (f.m() != cone.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "function output dimension differs from the cone");
  }
  const JacobianPolytope poly = f.clarkeJacobian(xi);
  const int k = static_cast<int>(poly.vertices.size());
  const std::vector<Vector> grid = k == 1 ? std::vector<Vector>{Vector::Ones(1)}
                                          : simplexGrid(k, plan.simplexGridDepth);

  Verdict verdict;
  verdict.check = "critical";
  verdict.stats.seed = plan.seed;
  verdict.stats.gridDepth = plan.simplexGridDepth;

  std::vector<NamedVector> evidence;
  int index = 0;
  for (const Vector& lambda : grid) {
    ++verdict.stats.evaluated;
    const Matrix A = poly.combine(lambda);
    if (auto mu = criticalMultiplier(A, cone)) {
      verdict.status = VerdictStatus::CertifiedUpToSampling;
      verdict.evidence = {{"lambda", lambda}, {"mu", *mu}};
      verdict.reason = "mu^T A = 0 has a solution strictly inside the cone for A = sum lambda_i A_i";
      return verdict;
    }
    const std::string tag = "#" + std::to_string(index++);
    evidence.push_back({"lambda" + tag, lambda});
    try {
      const GordanResult g = gordanAlternative(A, cone);
      if (g.which == GordanResult::Alternative::Primal) {
        evidence.push_back({"direction" + tag, g.x});
      } else {
        evidence.push_back({"boundaryMultiplier" + tag, g.y});
      }
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::Degenerate) throw;
    }
  }
  verdict.status = VerdictStatus::Refuted;
  verdict.witnessX = xi;
  verdict.evidence = std::move(evidence);
  verdict.reason = "no grid matrix of the Jacobian polytope admits a strictly positive multiplier";
  return verdict;
}

}  // namespace vvicert
