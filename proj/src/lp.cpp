#include "vvicert/lp.hpp"

#include <cmath>
#include <limits>

#include "vvicert/error.hpp"

namespace vvicert {

namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr int kMaxIterations = 10000;

// Tableau rows 0..m-1 are constraints, row m is the reduced-cost row of the
// current objective (stored as -c so a negative entry means "improving").
struct Tableau {
  Matrix t;
  std::vector<int> basis;

  int rows() const { return static_cast<int>(t.rows()) - 1; }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i <= rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Runs simplex on the objective row; columns with allowed[j] == false
  // never enter. Returns false when unbounded.
  LpResult::Status run(const std::vector<bool>& allowed) {
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (allowed[static_cast<std::size_t>(j)] && t(rows(), j) < -kPivotTolerance) {
          enter = j;  // Bland: lowest index
          break;
        }
      }
      if (enter < 0) return LpResult::Status::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        if (t(i, enter) > kPivotTolerance) {
          const double ratio = t(i, cols()) / t(i, enter);
          if (ratio < best - 1e-15 ||
              (std::fabs(ratio - best) <= 1e-15 && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpResult::Status::Unbounded;
      pivot(leave, enter);
    }
    return LpResult::Status::IterationLimit;
  }
};

}  // namespace

LpResult solve(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.A.rows());
  const int n = static_cast<int>(lp.A.cols());
  if (lp.b.size() != m || static_cast<int>(lp.relations.size()) != m || lp.c.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "inconsistent linear program dimensions");
  }

  // Normalize to b >= 0.
  Matrix A = lp.A;
  Vector b = lp.b;
  std::vector<Relation> rel = lp.relations;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      A.row(i) *= -1.0;
      b(i) = -b(i);
      if (rel[static_cast<std::size_t>(i)] == Relation::LessEqual) {
        rel[static_cast<std::size_t>(i)] = Relation::GreaterEqual;
      } else if (rel[static_cast<std::size_t>(i)] == Relation::GreaterEqual) {
        rel[static_cast<std::size_t>(i)] = Relation::LessEqual;
      }
    }
  }

  int slacks = 0;
  int artificials = 0;
  for (Relation r : rel) {
    if (r != Relation::Equal) ++slacks;
    if (r != Relation::LessEqual) ++artificials;
  }
  const int total = n + slacks + artificials;

  Tableau tab;
  tab.t = Matrix::Zero(m + 1, total + 1);
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  tab.t.topLeftCorner(m, n) = A;
  tab.t.topRightCorner(m, 1) = b;

  int slackCol = n;
  int artCol = n + slacks;
  std::vector<bool> isArtificial(static_cast<std::size_t>(total), false);
  for (int i = 0; i < m; ++i) {
    switch (rel[static_cast<std::size_t>(i)]) {
      case Relation::LessEqual:
        tab.t(i, slackCol) = 1.0;
        tab.basis[static_cast<std::size_t>(i)] = slackCol++;
        break;
      case Relation::GreaterEqual:
        tab.t(i, slackCol++) = -1.0;
        [[fallthrough]];
      case Relation::Equal:
        tab.t(i, artCol) = 1.0;
        isArtificial[static_cast<std::size_t>(artCol)] = true;
        tab.basis[static_cast<std::size_t>(i)] = artCol++;
        break;
    }
  }

  std::vector<bool> allowed(static_cast<std::size_t>(total), true);

  // Phase 1: minimize the sum of artificials, i.e. objective row = -(sum of
  // artificial rows) expressed in nonbasic terms.
  if (artificials > 0) {
    for (int i = 0; i < m; ++i) {
      if (isArtificial[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(i)])]) {
        tab.t.row(m) -= tab.t.row(i);
      }
    }
    for (int j = 0; j < total; ++j) {
      if (isArtificial[static_cast<std::size_t>(j)]) tab.t(m, j) = 0.0;
    }
    const auto status = tab.run(allowed);
    if (status == LpResult::Status::IterationLimit) return {status, {}, 0.0};
    const double infeasibility = -tab.t(m, total);
    if (infeasibility > 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>())) {
      return {LpResult::Status::Infeasible, {}, 0.0};
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (!isArtificial[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(i)])]) continue;
      for (int j = 0; j < total; ++j) {
        if (!isArtificial[static_cast<std::size_t>(j)] && std::fabs(tab.t(i, j)) > kPivotTolerance) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (int j = 0; j < total; ++j) {
      if (isArtificial[static_cast<std::size_t>(j)]) allowed[static_cast<std::size_t>(j)] = false;
    }
  }

  // Phase 2 objective row: -c, reduced against the current basis.
  tab.t.row(m).setZero();
  for (int j = 0; j < n; ++j) tab.t(m, j) = -lp.c(j);
  for (int i = 0; i < m; ++i) {
    const int col = tab.basis[static_cast<std::size_t>(i)];
    const double coef = tab.t(m, col);
    if (coef != 0.0) tab.t.row(m) -= coef * tab.t.row(i);
  }
  const auto status = tab.run(allowed);
  if (status != LpResult::Status::Optimal) return {status, {}, 0.0};

  LpResult result;
  result.status = LpResult::Status::Optimal;
  result.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int col = tab.basis[static_cast<std::size_t>(i)];
    if (col < n) result.x(col) = tab.t(i, total);
  }
  result.value = lp.c.dot(result.x);
  return result;
}

}  // namespace vvicert
