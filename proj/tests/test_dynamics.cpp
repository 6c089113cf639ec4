#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtensor/dynamics.hpp"
#include "qtensor/equilibria.hpp"

using namespace qtensor;

namespace {

SymTraceless3 random_admissible(std::mt19937& rng, double min_margin) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (;;) {
    SymTraceless3 q;
    for (double& v : q.c) v = u(rng);
    if (check_admissible(q).margin >= min_margin) return q;
  }
}

Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vec3 v{g(rng), g(rng), g(rng)};
    if (norm(v) > 0.1) return normalized(v);
  }
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("nematic equilibrium is stationary under zero flow") {
  FlowParams p;
  p.alpha_ms = 7.0;
  LeslieCoefficients lc = leslie_coefficients(7.0);
  std::mt19937 rng(41);
  for (int k = 0; k < 5; ++k) {
    SymTraceless3 q = uniaxial(lc.s2, random_unit(rng));
    CHECK(norm(rhs_homogeneous(q, Mat3::zero(), p)) < 1e-9);
  }
}

TEST_CASE("relaxation rhs equals its conjugate-field reformulation") {
  // -6Q + 2a[M(Q) + M(Q)^T] = -4 M(B - aQ), a consequence of
  // M_Q(B_Q) = (3/2)Q with B and Q sharing an eigenframe
  FlowParams p;
  p.alpha_ms = 6.2;
  p.de = 0.7;
  std::mt19937 rng(42);
  for (int k = 0; k < 25; ++k) {
    SymTraceless3 q = random_admissible(rng, 0.05);
    SymTraceless3 rhs = rhs_homogeneous(q, Mat3::zero(), p);
    BinghamResult r = solve_bq(q, default_rule());
    SymTraceless3 e = r.b - p.alpha_ms * q;
    Mat3 alt = (-4.0 / p.de) * mq_apply(q, r.moments.m4, e.matrix());
    CHECK(norm(rhs - SymTraceless3::from_matrix(alt)) < 1e-9);
  }
}

TEST_CASE("flow term co-rotates with the vorticity for antisymmetric kappa") {
  // K:M4 = 0 for antisymmetric K, so M(K^T) + M^T(K^T) collapses to
  // K.Q - Q.K
  FlowParams p;
  p.alpha_ms = 7.0;
  std::mt19937 rng(43);
  SymTraceless3 q = random_admissible(rng, 0.05);
  Mat3 kap = Mat3::zero();
  kap(0, 1) = 0.8;
  kap(1, 0) = -0.8;
  kap(0, 2) = -0.3;
  kap(2, 0) = 0.3;
  SymTraceless3 with_flow = rhs_homogeneous(q, kap, p);
  SymTraceless3 no_flow = rhs_homogeneous(q, Mat3::zero(), p);
  Mat3 expect = mul(kap, q.matrix()) - mul(q.matrix(), kap);
  CHECK(norm((with_flow - no_flow) - SymTraceless3::from_matrix(expect)) <
        1e-10);
}

TEST_CASE("rhs linearization at the isotropic state is a scalar multiple of the identity") {
  FlowParams p;
  p.alpha_ms = 7.0;
  p.de = 2.0;
  const double expect = (-6.0 + 4.0 * p.alpha_ms / 5.0) / p.de;
  const double h = 1e-6;
  for (int i = 0; i < 5; ++i) {
    SymTraceless3 plus{}, minus{};
    plus.c[i] = h;
    minus.c[i] = -h;
    SymTraceless3 d = rhs_homogeneous(plus, Mat3::zero(), p) -
                      rhs_homogeneous(minus, Mat3::zero(), p);
    for (int j = 0; j < 5; ++j) {
      const double jac = d.c[j] / (2.0 * h);
      CHECK(std::fabs(jac - (i == j ? expect : 0.0)) < 1e-6);
    }
  }
}

TEST_CASE("relaxation reaches the nematic branch order parameter by t = 50 De") {
  FlowParams p;
  p.alpha_ms = 7.0;
  LeslieCoefficients lc = leslie_coefficients(7.0);
  // start in the nematic basin (the isotropic state is still locally
  // stable at alpha = 7), tilted director, small biaxial perturbation
  std::mt19937 rng(44);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  SymTraceless3 q = uniaxial(0.4, normalized(Vec3{1.0, 0.6, -0.3}));
  for (double& v : q.c) v += u(rng);
  REQUIRE(check_admissible(q).margin > 0.05);
  const double dt = 0.02;
  for (int k = 0; k < 2500; ++k) q = step_homogeneous(q, Mat3::zero(), p, dt);
  EigResult e = eig(q);
  CHECK(std::fabs(1.5 * e.lambda[0] - lc.s2) < 1e-6);
  // uniaxial: lower pair degenerate
  CHECK(std::fabs(e.lambda[1] - e.lambda[2]) < 1e-6);
}

TEST_CASE("forward step then reversed-field step returns at integrator order") {
  FlowParams p;
  p.alpha_ms = 7.0;
  Mat3 kap = Mat3::zero();
  kap(0, 1) = 1.0;
  std::mt19937 rng(45);
  SymTraceless3 q0 = random_admissible(rng, 0.08);

  auto back_rk4 = [&](SymTraceless3 q, double dt) {
    // classical RK4 applied to the time-reversed vector field
    auto f = [&](const SymTraceless3& x) {
      return -rhs_homogeneous(x, kap, p);
    };
    SymTraceless3 k1 = f(q);
    SymTraceless3 k2 = f(q + (0.5 * dt) * k1);
    SymTraceless3 k3 = f(q + (0.5 * dt) * k2);
    SymTraceless3 k4 = f(q + dt * k3);
    return q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  const double d1 = norm(back_rk4(step_homogeneous(q0, kap, p, 0.01), 0.01) - q0);
  const double d2 =
      norm(back_rk4(step_homogeneous(q0, kap, p, 0.005), 0.005) - q0);
  CHECK(d1 < 1e-8);
  // the reversed step is the forward method at -dt, so the fifth-order
  // local errors cancel and the round trip closes at sixth order
  const double ratio = d1 / d2;
  CHECK(ratio > 45.0);
  CHECK(ratio < 90.0);
}

TEST_CASE("step rejects inadmissible input and bad dt") {
  FlowParams p;
  CHECK_THROWS_AS(step_homogeneous(uniaxial(1.02, {0, 0, 1}), Mat3::zero(),
                                   p, 1e-3),
                  AdmissibilityLost);
  CHECK_THROWS_AS(
      step_homogeneous(SymTraceless3{}, Mat3::zero(), p, 0.0),
      std::invalid_argument);
}

TEST_CASE("stability bound is positive and usable") {
  FlowParams p;
  p.alpha_ms = 7.0;
  std::mt19937 rng(46);
  SymTraceless3 q = random_admissible(rng, 0.08);
  Mat3 kap = Mat3::zero();
  kap(0, 1) = 1.0;
  double bound = homogeneous_dt_bound(q, kap, p);
  CHECK(bound > 0.0);
  double dt = 0.25 * bound;
  for (int k = 0; k < 50; ++k) q = step_homogeneous(q, kap, p, dt);
  CHECK(check_admissible(q).admissible);
}

TEST_CASE("director rhs is orthogonal to the director") {
  LeslieCoefficients lc = leslie_coefficients(8.0);
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Vec3 n = random_unit(rng);
    Mat3 kap;
    for (double& v : kap.a) v = u(rng);
    Vec3 h{u(rng), u(rng), u(rng)};
    Vec3 r = el_director_rhs(n, kap, h, lc);
    CHECK(std::fabs(dot(n, r)) < 1e-12);
  }
  CHECK_THROWS_AS(el_director_rhs(Vec3{1.0, 0.5, 0.0}, Mat3::zero(),
                                  Vec3{0, 0, 0}, lc),
                  std::invalid_argument);
}

TEST_CASE("director is stationary without forcing") {
  LeslieCoefficients lc = leslie_coefficients(8.0);
  Vec3 n{0.6, -0.8, 0.0};
  Vec3 r = el_director_rhs(n, Mat3::zero(), Vec3{0, 0, 0}, lc);
  CHECK(norm(r) < 1e-15);
  Vec3 n2 = el_step(n, Mat3::zero(), Vec3{0, 0, 0}, lc, 0.1);
  CHECK(norm(Vec3{n2[0] - n[0], n2[1] - n[1], n2[2] - n[2]}) < 1e-15);
}

TEST_CASE("flow-aligning steady angle satisfies cos 2 theta = 1/lambda") {
  LeslieCoefficients lc = leslie_coefficients(7.0);
  REQUIRE(lc.lambda > 1.0);
  ShearResponse sr = shear_director_response(lc, 1.0);
  CHECK(sr.aligning);
  CHECK(sr.period == 0.0);
  CHECK(std::fabs(std::cos(2.0 * sr.theta) - 1.0 / lc.lambda) < 1e-8);
  CHECK(std::fabs(sr.theta - 11.201327158037268 * std::numbers::pi / 180.0) <
        1e-8);
  // the steady angle is rate-independent
  ShearResponse sr3 = shear_director_response(lc, 3.0);
  CHECK(std::fabs(sr3.theta - sr.theta) < 1e-8);
}

TEST_CASE("tumbling period matches the closed form") {
  LeslieCoefficients lc = leslie_coefficients(10.0);
  REQUIRE(lc.lambda < 1.0);
  const double rate = 1.0;
  ShearResponse sr = shear_director_response(lc, rate);
  CHECK_FALSE(sr.aligning);
  const double ref =
      2.0 * std::numbers::pi / (rate * std::sqrt(1.0 - lc.lambda * lc.lambda));
  CHECK(std::fabs(sr.period - ref) / ref < 1e-5);
  // period scales as 1/rate
  ShearResponse sr2 = shear_director_response(lc, 2.0);
  CHECK(std::fabs(sr2.period - ref / 2.0) / ref < 1e-5);
  CHECK_THROWS_AS(shear_director_response(lc, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
