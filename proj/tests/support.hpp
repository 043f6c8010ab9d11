// Helpers shared by the unit tests and the acceptance binary.
#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vvicert/model.hpp"
#include "vvicert/problem.hpp"
#include "vvicert/sampling.hpp"

namespace testsupport {

using vvicert::Matrix;
using vvicert::Vector;

struct PieceText {
  std::string region;
  std::vector<std::string> components;
};

inline vvicert::PiecewiseVectorFn makeFn(int n, int m, double lo, double hi, const std::vector<PieceText>& pieces) {
  std::vector<vvicert::Piece> parsed;
  for (const PieceText& p : pieces) {
    std::vector<vvicert::Expr> comps;
    for (const std::string& c : p.components) comps.push_back(vvicert::parse(c, n, vvicert::ParseContext::Function));
    parsed.push_back(vvicert::PiecewiseVectorFn::makePiece(vvicert::parsePredicate(p.region, n), comps, n));
  }
  return vvicert::PiecewiseVectorFn(n, m, vvicert::Box{Vector::Constant(n, lo), Vector::Constant(n, hi)},
                                    std::move(parsed));
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double x : row) out(i, j++) = x;
    ++i;
  }
  return out;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * vvicert::unitUniform(rng);
}

// A random smooth expression kept as text plus an evaluator of its own,
// independent of the library's tree. Denominators are 1.5 + (...)^2, so
// there are no poles.
class RandomExpression {
 public:
  RandomExpression(std::mt19937_64& rng, int dim, int depth) : dim_(dim) { root_ = build(rng, depth); }

  std::string text() const { return textOf(root_); }
  double eval(const std::vector<double>& x) const { return evalOf(root_, x); }

 private:
  struct Node {
    char op;  // 'c' constant, 'v' variable, '+', '-', '*', '/', '^', 'n' negation
    double value = 0.0;
    int index = 0;
    int exponent = 0;
    std::shared_ptr<Node> a, b;
  };
  using Ptr = std::shared_ptr<Node>;

  Ptr build(std::mt19937_64& rng, int depth) {
    auto node = std::make_shared<Node>();
    const int choice = depth <= 0 ? static_cast<int>(rng() % 2) : static_cast<int>(rng() % 8);
    switch (choice) {
      case 0:
        node->op = 'c';
        node->value = std::round(uniform(rng, -3.0, 3.0) * 100.0) / 100.0;
        break;
      case 1:
        node->op = 'v';
        node->index = static_cast<int>(rng() % static_cast<std::uint64_t>(dim_));
        break;
      case 2: node->op = '+'; break;
      case 3: node->op = '-'; break;
      case 4: node->op = '*'; break;
      case 5: node->op = '/'; break;
      case 6:
        node->op = '^';
        node->exponent = 1 + static_cast<int>(rng() % 3);
        break;
      default: node->op = 'n'; break;
    }
    if (node->op != 'c' && node->op != 'v') {
      node->a = build(rng, depth - 1);
      if (node->op != '^' && node->op != 'n') node->b = build(rng, depth - 1);
    }
    return node;
  }

  std::string textOf(const Ptr& n) const {
    std::ostringstream s;
    s.precision(17);
    switch (n->op) {
      case 'c':
        if (n->value < 0) s << "(" << n->value << ")";
        else s << n->value;
        break;
      case 'v': s << "x" << (n->index + 1); break;
      case '/': s << "(" << textOf(n->a) << ")/(1.5 + (" << textOf(n->b) << ")^2)"; break;
      case '^': s << "(" << textOf(n->a) << ")^" << n->exponent; break;
      case 'n': s << "-(" << textOf(n->a) << ")"; break;
      default: s << "(" << textOf(n->a) << ") " << n->op << " (" << textOf(n->b) << ")"; break;
    }
    return s.str();
  }

  double evalOf(const Ptr& n, const std::vector<double>& x) const {
    switch (n->op) {
      case 'c': return n->value;
      case 'v': return x[static_cast<std::size_t>(n->index)];
      case '+': return evalOf(n->a, x) + evalOf(n->b, x);
      case '-': return evalOf(n->a, x) - evalOf(n->b, x);
      case '*': return evalOf(n->a, x) * evalOf(n->b, x);
      case '/': {
        const double d = evalOf(n->b, x);
        return evalOf(n->a, x) / (1.5 + d * d);
      }
      case '^': return std::pow(evalOf(n->a, x), n->exponent);
      default: return -evalOf(n->a, x);
    }
  }

  int dim_;
  Ptr root_;
};

}  // namespace testsupport
