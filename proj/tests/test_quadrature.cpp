#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qtensor/quadrature.hpp"

using namespace qtensor;

namespace {
constexpr double kFourPi = 4.0 * M_PI;
}

TEST_SUITE("quadrature") {

TEST_CASE("rule metadata and weight sum") {
  QuadratureRule r = build_rule(6);
  CHECK(r.level == 6);
  CHECK(r.exactness == 11);
  CHECK(r.nodes.size() == 6 * 12);
  double w = 0;
  for (double v : r.weights) w += v;
  CHECK(w == doctest::Approx(kFourPi).epsilon(1e-14));
  CHECK_THROWS_AS(build_rule(0), std::invalid_argument);
  for (const Vec3& n : r.nodes) CHECK(std::fabs(norm(n) - 1.0) < 1e-14);
}

TEST_CASE("polar nodes are gauss points") {
  QuadratureRule r = build_rule(3);
  // order-3 Gauss nodes in cos(theta): 0 and +-sqrt(3/5)
  double g = std::sqrt(0.6);
  bool saw0 = false, sawp = false, sawm = false;
  for (const Vec3& n : r.nodes) {
    if (std::fabs(n[2]) < 1e-14) saw0 = true;
    if (std::fabs(n[2] - g) < 1e-14) sawp = true;
    if (std::fabs(n[2] + g) < 1e-14) sawm = true;
  }
  CHECK(saw0);
  CHECK(sawp);
  CHECK(sawm);
}

TEST_CASE("uniform density moments") {
  MomentSet m = moments_of(SymTraceless3{}, default_rule());
  CHECK(m.z == doctest::Approx(kFourPi).epsilon(1e-14));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::fabs(m.m2(i, j) - (i == j ? 1.0 / 3.0 : 0.0)) < 1e-15);
  Sym4Moment iso = Sym4Moment::isotropic();
  for (int s = 0; s < 15; ++s) CHECK(std::fabs(m.m4.c[s] - iso.c[s]) < 1e-15);
  CHECK(m.m6(0, 0, 1, 1, 2, 2) == doctest::Approx(1.0 / 105.0).epsilon(1e-13));
  CHECK(m.m6(0, 0, 0, 0, 1, 1) == doctest::Approx(1.0 / 35.0).epsilon(1e-13));
  CHECK(m.m6(2, 2, 2, 2, 2, 2) == doctest::Approx(1.0 / 7.0).epsilon(1e-13));
  CHECK(std::fabs(m.m6(0, 0, 0, 0, 0, 1)) < 1e-16);
}

TEST_CASE("internal consistency of the moment hierarchy") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-3, 3);
  SymTraceless3 b;
  for (double& v : b.c) v = u(rng);
  MomentSet m = moments_of(b, default_rule());
  MomentSet m20 = moments_of(b, build_rule(20));
  CHECK(std::fabs(trace(m.m2) - 1.0) < 1e-14);
  for (int i = 0; i < 9; ++i) CHECK(std::fabs(m.m2.a[i] - m20.m2.a[i]) < 1e-13);
  // pair contraction drops one rank
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s4 = 0;
      for (int k = 0; k < 3; ++k) s4 += m.m4(i, j, k, k);
      CHECK(std::fabs(s4 - m.m2(i, j)) < 1e-14);
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s6 = 0;
          for (int p = 0; p < 3; ++p) s6 += m.m6(i, j, k, l, p, p);
          CHECK(std::fabs(s6 - m.m4(i, j, k, l)) < 1e-14);
        }
    }
}

TEST_CASE("strong fields stay finite through the exponent shift") {
  for (double s : {60.0, -40.0}) {
    MomentSet m = moments_of(uniaxial(s, {0, 0, 1}), default_rule());
    CHECK(std::isfinite(m.z));
    CHECK(m.z > 0);
    CHECK(std::fabs(trace(m.m2) - 1.0) < 1e-13);
    CHECK(m.m2(2, 2) < 1.0);
    CHECK(m.m2(2, 2) > 0.0);
  }
  // strongly aligned: m2 along the axis approaches 1
  MomentSet m = moments_of(uniaxial(60, {0, 0, 1}), default_rule());
  CHECK(m.m2(2, 2) > 0.97);
}

TEST_CASE("deviatoric fourth moment is trace-free") {
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> u(-2, 2);
  SymTraceless3 b;
  for (double& v : b.c) v = u(rng);
  Traceless4 q4 = q4_of(b, default_rule());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += q4(i, j, k, k);
      CHECK(std::fabs(s) < 1e-14);
    }
  Traceless4 z = q4_of(SymTraceless3{}, default_rule());
  for (int s = 0; s < 15; ++s) CHECK(std::fabs(z.c[s]) < 1e-15);
}

TEST_CASE("deviatoric fourth moment saturates under strong alignment") {
  // sharp prolate field: the 3333 deviatoric component approaches 8/35
  Traceless4 q4 = q4_of(uniaxial(60, {0, 0, 1}), default_rule());
  CHECK(std::fabs(q4(2, 2, 2, 2) - 8.0 / 35.0) < 2e-2);
}

TEST_CASE("exactness guard") {
  SymTraceless3 b = uniaxial(1.0, {0, 0, 1});
  CHECK_THROWS_AS(moments_of(b, build_rule(6)), std::invalid_argument);
  CHECK_NOTHROW(moments_of(b, build_rule(7)));
}

}  // TEST_SUITE
