#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "vvicert/cone.hpp"
#include "vvicert/error.hpp"

using namespace vvicert;
using testsupport::rows;
using testsupport::vec;

TEST_CASE("orthant membership") {
  const OrderingCone C = OrderingCone::orthant(2);
  CHECK(C.isOrthant());
  CHECK(C.contains(vec({0, 0})));
  CHECK_FALSE(C.contains(vec({1, -0.1})));
  CHECK(C.contains(vec({5, 2})));
  CHECK(C.strictlyContains(vec({1, 1})));
  CHECK_FALSE(C.strictlyContains(vec({1, 0})));
  CHECK_FALSE(C.strictlyContains(vec({0, 0})));
  CHECK_THROWS_AS(C.contains(vec({1, 2, 3})), Error);
}

TEST_CASE("orders") {
  const OrderingCone C = OrderingCone::orthant(2);
  CHECK(C.leq(vec({0, 0}), vec({1, 2})));
  CHECK(C.lt(vec({0, 0}), vec({1, 2})));
  CHECK(C.leq(vec({1, 2}), vec({1, 2})));
  CHECK_FALSE(C.lt(vec({1, 2}), vec({1, 2})));
  CHECK_FALSE(C.leq(vec({2, 0}), vec({1, 2})));
}

TEST_CASE("approximation vectors") {
  const OrderingCone C = OrderingCone::orthant(2);
  CHECK(C.validateE(vec({0.5, 0.5})));
  CHECK_FALSE(C.validateE(vec({1, 0})));
  for (double eps : {1e-6, 1e-3, 0.1, 10.0}) CHECK(C.validateE(vec({eps, eps})));
}

TEST_CASE("polyhedral cone from generators") {
  // Rays (1,0) and (1,1): the cone 0 <= v2 <= v1.
  const OrderingCone C = OrderingCone::fromGenerators(rows({{1, 1}, {0, 1}}));
  CHECK(C.contains(vec({2, 1})));
  CHECK(C.contains(vec({1, 1})));
  CHECK_FALSE(C.contains(vec({1, 2})));
  CHECK_FALSE(C.contains(vec({1, -0.5})));
  CHECK(C.strictlyContains(vec({2, 1})));
  CHECK_FALSE(C.strictlyContains(vec({1, 1})));
  CHECK(C.strictlyContains(C.interiorWitness()));

  // Same cone from halfspaces v2 >= 0 and v1 - v2 >= 0.
  const OrderingCone H = OrderingCone::fromNormals(rows({{0, 1}, {1, -1}}));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const Vector v = vec({testsupport::uniform(rng, -1, 1), testsupport::uniform(rng, -1, 1)});
    CHECK(C.contains(v) == H.contains(v));
  }

  // Dual: {w : w1 >= 0, w1 + w2 >= 0}.
  const OrderingCone D = C.dual();
  CHECK(D.contains(vec({1, -1})));
  CHECK(D.contains(vec({0, 1})));
  CHECK_FALSE(D.contains(vec({-0.1, 1})));
  CHECK_FALSE(D.contains(vec({1, -1.5})));
}

TEST_CASE("invalid cones are rejected") {
  CHECK_THROWS_AS(OrderingCone::fromNormals(rows({{1, 0}})), Error);         // not pointed
  CHECK_THROWS_AS(OrderingCone::fromNormals(rows({{1, 0}, {-1, 0}})), Error);  // empty interior
  CHECK_THROWS_AS(OrderingCone::fromBoth(rows({{1, 0}, {0, 1}}), rows({{1, -1}, {0, 1}})), Error);
}

TEST_CASE("three-dimensional enumeration") {
  // Cone over the triangle with rays e1, e2, e1 + e2 + e3.
  const Matrix G = rows({{1, 0, 1}, {0, 1, 1}, {0, 0, 1}});
  const OrderingCone C = OrderingCone::fromGenerators(G);
  CHECK(C.normals().rows() == 3);
  for (int j = 0; j < 3; ++j) CHECK(C.contains(G.col(j)));
  CHECK(C.contains(G.col(0) + G.col(2)));
  CHECK_FALSE(C.contains(vec({0, 0, -1})));
  const Matrix R = enumerateExtremeRays(C.normals());
  CHECK(R.cols() == 3);
}

TEST_CASE("order properties on random vectors") {
  std::mt19937_64 rng(5);
  const OrderingCone orth = OrderingCone::orthant(3);
  const OrderingCone poly = OrderingCone::fromGenerators(rows({{1, 0, 1}, {0, 1, 1}, {0, 0, 1}}));
  for (const OrderingCone* C : {&orth, &poly}) {
    auto draw = [&] {
      return vec({testsupport::uniform(rng, -1, 1), testsupport::uniform(rng, -1, 1), testsupport::uniform(rng, -1, 1)});
    };
    auto drawIn = [&] {
      Vector v = Vector::Zero(3);
      for (int j = 0; j < C->generators().cols(); ++j) v += testsupport::uniform(rng, 0, 1) * C->generators().col(j);
      return v;
    };
    for (int t = 0; t < 1000; ++t) {
      const Vector x = draw();
      const Vector y = x + drawIn();
      const Vector z = y + drawIn();
      REQUIRE(C->leq(x, y));
      REQUIRE(C->leq(y, z));
      CHECK(C->contains(z - x, 2 * kMembershipTolerance));
      const Vector u = draw();
      if (C->leq(x, u) && C->leq(u, x)) CHECK((x - u).norm() <= 1e-9);
      const Vector a = drawIn() + 0.1 * C->interiorWitness();
      const Vector b = drawIn() + 0.1 * C->interiorWitness();
      REQUIRE(C->strictlyContains(a));
      REQUIRE(C->strictlyContains(b));
      const double lambda = testsupport::uniform(rng, 0, 1);
      CHECK(C->strictlyContains(lambda * a + (1 - lambda) * b));
    }
  }
  for (int t = 0; t < 1000; ++t) {
    const Vector v = vec({testsupport::uniform(rng, -1, 1), testsupport::uniform(rng, -1, 1), testsupport::uniform(rng, -1, 1)});
    CHECK(orth.contains(v) == (v.array() >= -kMembershipTolerance).all());
  }
}
