#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qtensor/tensor.hpp"

using namespace qtensor;

namespace {

SymTraceless3 random_sym(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymTraceless3 q;
  for (double& v : q.c) v = u(rng);
  return q;
}

Mat3 random_rotation(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Vec3 ax = normalized({u(rng), u(rng), u(rng) + 2.0});
  double th = 3.0 * u(rng);
  double c = std::cos(th), s = std::sin(th);
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (1 - c) * ax[i] * ax[j];
  r(0, 0) += c;
  r(1, 1) += c;
  r(2, 2) += c;
  r(0, 1) += -s * ax[2];
  r(1, 0) += s * ax[2];
  r(0, 2) += s * ax[1];
  r(2, 0) += -s * ax[1];
  r(1, 2) += -s * ax[0];
  r(2, 1) += s * ax[0];
  return r;
}

double inf_diff(const Mat3& x, const Mat3& y) {
  double m = 0;
  for (int i = 0; i < 9; ++i) m = std::max(m, std::fabs(x.a[i] - y.a[i]));
  return m;
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("symmetric traceless reconstruction") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  Mat3 m;
  for (double& v : m.a) v = u(rng);
  SymTraceless3 q = SymTraceless3::from_matrix(m);
  Mat3 qm = q.matrix();
  CHECK(std::fabs(trace(qm)) < 1e-15);
  CHECK(inf_diff(qm, transpose(qm)) == 0.0);
  // projection is idempotent
  SymTraceless3 q2 = SymTraceless3::from_matrix(qm);
  for (int i = 0; i < 5; ++i) CHECK(q2.c[i] == doctest::Approx(q.c[i]).epsilon(1e-15));
  // and matches the analytic projection of m
  Mat3 sym = 0.5 * (m + transpose(m));
  double tr = trace(sym) / 3.0;
  CHECK(qm(0, 1) == doctest::Approx(sym(0, 1)).epsilon(1e-15));
  CHECK(qm(0, 0) == doctest::Approx(sym(0, 0) - tr).epsilon(1e-14));
}

TEST_CASE("orthonormal basis spans the space") {
  const auto& e = sym_basis();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(std::fabs(ddot(e[i], e[j]) - (i == j ? 1.0 : 0.0)) < 1e-15);
  std::mt19937 rng(12);
  SymTraceless3 q = random_sym(rng, 3);
  auto x = basis_coords(q);
  SymTraceless3 back = from_basis_coords(x);
  for (int i = 0; i < 5; ++i) CHECK(std::fabs(back.c[i] - q.c[i]) < 1e-14);
  double n2 = 0;
  for (double v : x) n2 += v * v;
  CHECK(std::sqrt(n2) == doctest::Approx(norm(q)).epsilon(1e-13));
}

TEST_CASE("eigendecomposition on generic and degenerate spectra") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_real_distribution<double> u(-1, 1);
    double l0 = u(rng), l1 = u(rng);
    double lam[3] = {l0, l1, -l0 - l1};
    std::sort(lam, lam + 3, std::greater<>());
    Mat3 r = random_rotation(rng);
    Mat3 m = Mat3::zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) m(i, j) += r(i, k) * lam[k] * r(j, k);
    SymTraceless3 q = SymTraceless3::from_matrix(m);
    EigResult e = eig(q);
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(e.lambda[k] - lam[k]) < 1e-12);
    // columns are orthonormal eigenvectors
    Mat3 qm = q.matrix();
    for (int k = 0; k < 3; ++k) {
      Vec3 v = {e.frame(0, k), e.frame(1, k), e.frame(2, k)};
      CHECK(std::fabs(norm(v) - 1.0) < 1e-13);
      for (int i = 0; i < 3; ++i) {
        double mv = qm(i, 0) * v[0] + qm(i, 1) * v[1] + qm(i, 2) * v[2];
        CHECK(std::fabs(mv - e.lambda[k] * v[i]) < 1e-11);
      }
    }
  }
  // uniaxial: doubly degenerate pair
  EigResult e = eig(uniaxial(0.6, {0, 0, 1}));
  CHECK(e.lambda[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(e.lambda[1] == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(e.lambda[2] == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(std::fabs(std::fabs(e.frame(2, 0)) - 1.0) < 1e-13);
  // zero tensor
  EigResult z = eig(SymTraceless3{});
  for (double l : z.lambda) CHECK(l == 0.0);
}

TEST_CASE("uniaxial construction") {
  SymTraceless3 q = uniaxial(0.95, {0, 0, 1});
  CHECK(q.zz() == doctest::Approx(0.95 * 2.0 / 3.0).epsilon(1e-15));
  CHECK(q.xx() == doctest::Approx(-0.95 / 3.0).epsilon(1e-15));
  CHECK(q.xy() == 0.0);
  CHECK_THROWS_AS(uniaxial(0.5, {0, 0, 1.1}), std::invalid_argument);
}

TEST_CASE("isotropic fourth moment values and contraction") {
  Sym4Moment iso = Sym4Moment::isotropic();
  CHECK(iso(1, 1, 1, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(iso(1, 1, 2, 2) == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
  CHECK(iso(1, 2, 1, 2) == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
  CHECK(iso(0, 0, 0, 1) == 0.0);
  std::mt19937 rng(14);
  SymTraceless3 a = random_sym(rng, 2);
  Mat3 out = contract42(iso, a.matrix());
  // pair-trace of a vanishes, so iso:a = 2a/15
  CHECK(inf_diff(out, (2.0 / 15.0) * a.matrix()) < 1e-15);
  Mat3 id = contract42(iso, Mat3::identity());
  CHECK(inf_diff(id, (1.0 / 3.0) * Mat3::identity()) < 1e-15);
}

TEST_CASE("contractions match direct index loops") {
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> u(-1, 1);
  Sym4Moment m4;
  for (double& v : m4.c) v = u(rng);
  Sym6Moment m6;
  for (double& v : m6.c) v = u(rng);
  Mat3 a;
  for (double& v : a.a) v = u(rng);

  Mat3 direct4 = Mat3::zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) direct4(i, j) += m4(i, j, k, l) * a(k, l);
  CHECK(inf_diff(contract42(m4, a), direct4) < 1e-14);

  Sym4Moment got6 = contract62(m6, a);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k)
        for (int l = k; l < 3; ++l) {
          double s = 0;
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) s += m6(i, j, k, l, p, q) * a(p, q);
          CHECK(std::fabs(got6(i, j, k, l) - s) < 1e-14);
        }
}

TEST_CASE("closure operator definition") {
  std::mt19937 rng(16);
  std::uniform_real_distribution<double> u(-1, 1);
  SymTraceless3 q = random_sym(rng, 0.2);
  Sym4Moment m4;
  for (double& v : m4.c) v = u(rng);
  Mat3 a;
  for (double& v : a.a) v = u(rng);
  Mat3 expected = (1.0 / 3.0) * a + mul(q.matrix(), a) - contract42(m4, a);
  CHECK(inf_diff(mq_apply(q, m4, a), expected) < 1e-15);
}

TEST_CASE("vector helpers") {
  Vec3 x{1, 0, 0}, y{0, 1, 0};
  Vec3 z = cross(x, y);
  CHECK(z[2] == 1.0);
  CHECK(dot(x, y) == 0.0);
  Vec3 n = normalized({3, 0, 4});
  CHECK(n[0] == doctest::Approx(0.6));
  CHECK(norm(n) == doctest::Approx(1.0).epsilon(1e-15));
}

}  // TEST_SUITE
