#include "qtensor/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linalg.hpp"

namespace qtensor {

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

Mat3 Mat3::identity() {
  Mat3 m;
  m(0, 0) = m(1, 1) = m(2, 2) = 1;
  return m;
}

Mat3 operator+(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

Mat3 operator-(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

Mat3 operator*(double s, const Mat3& x) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.a[i] = s * x.a[i];
  return r;
}

Mat3& operator+=(Mat3& x, const Mat3& y) {
  for (int i = 0; i < 9; ++i) x.a[i] += y.a[i];
  return x;
}

Mat3 mul(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat3 transpose(const Mat3& x) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = x(j, i);
  return r;
}

double trace(const Mat3& x) { return x(0, 0) + x(1, 1) + x(2, 2); }

double ddot(const Mat3& x, const Mat3& y) {
  double s = 0;
  for (int i = 0; i < 9; ++i) s += x.a[i] * y.a[i];
  return s;
}

Mat3 SymTraceless3::matrix() const {
  Mat3 m;
  m(0, 0) = xx();
  m(1, 1) = yy();
  m(2, 2) = zz();
  m(0, 1) = m(1, 0) = xy();
  m(0, 2) = m(2, 0) = xz();
  m(1, 2) = m(2, 1) = yz();
  return m;
}

SymTraceless3 SymTraceless3::from_matrix(const Mat3& m) {
  double t = trace(m) / 3.0;
  SymTraceless3 q;
  q.c[0] = m(0, 0) - t;
  q.c[1] = m(1, 1) - t;
  q.c[2] = 0.5 * (m(0, 1) + m(1, 0));
  q.c[3] = 0.5 * (m(0, 2) + m(2, 0));
  q.c[4] = 0.5 * (m(1, 2) + m(2, 1));
  return q;
}

SymTraceless3 operator+(const SymTraceless3& x, const SymTraceless3& y) {
  SymTraceless3 r;
  for (int i = 0; i < 5; ++i) r.c[i] = x.c[i] + y.c[i];
  return r;
}

SymTraceless3 operator-(const SymTraceless3& x, const SymTraceless3& y) {
  SymTraceless3 r;
  for (int i = 0; i < 5; ++i) r.c[i] = x.c[i] - y.c[i];
  return r;
}

SymTraceless3 operator-(const SymTraceless3& x) {
  SymTraceless3 r;
  for (int i = 0; i < 5; ++i) r.c[i] = -x.c[i];
  return r;
}

SymTraceless3 operator*(double s, const SymTraceless3& x) {
  SymTraceless3 r;
  for (int i = 0; i < 5; ++i) r.c[i] = s * x.c[i];
  return r;
}

SymTraceless3& operator+=(SymTraceless3& x, const SymTraceless3& y) {
  for (int i = 0; i < 5; ++i) x.c[i] += y.c[i];
  return x;
}

SymTraceless3& operator-=(SymTraceless3& x, const SymTraceless3& y) {
  for (int i = 0; i < 5; ++i) x.c[i] -= y.c[i];
  return x;
}

double ddot(const SymTraceless3& x, const SymTraceless3& y) {
  return x.xx() * y.xx() + x.yy() * y.yy() + x.zz() * y.zz() +
         2 * (x.c[2] * y.c[2] + x.c[3] * y.c[3] + x.c[4] * y.c[4]);
}

double ddot(const SymTraceless3& x, const Mat3& y) {
  return x.xx() * y(0, 0) + x.yy() * y(1, 1) + x.zz() * y(2, 2) +
         x.xy() * (y(0, 1) + y(1, 0)) + x.xz() * (y(0, 2) + y(2, 0)) +
         x.yz() * (y(1, 2) + y(2, 1));
}

double norm(const SymTraceless3& x) { return std::sqrt(ddot(x, x)); }

static double det3(const SymTraceless3& q) {
  double xx = q.xx(), yy = q.yy(), zz = q.zz();
  double xy = q.xy(), xz = q.xz(), yz = q.yz();
  return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) +
         xz * (xy * yz - yy * xz);
}

static EigResult eig_jacobi(const SymTraceless3& q) {
  std::array<double, 9> a = q.matrix().a, v;
  std::array<double, 3> d;
  detail::jacobi_eig<3>(a, d, v);
  int idx[3] = {0, 1, 2};
  std::sort(idx, idx + 3, [&](int p, int r) { return d[p] > d[r]; });
  EigResult res;
  for (int k = 0; k < 3; ++k) {
    res.lambda[k] = d[idx[k]];
    for (int i = 0; i < 3; ++i) res.frame(i, k) = v[i * 3 + idx[k]];
  }
  double mean = (res.lambda[0] + res.lambda[1] + res.lambda[2]) / 3.0;
  for (auto& l : res.lambda) l -= mean;
  return res;
}

EigResult eig(const SymTraceless3& q) {
  double nrm = norm(q);
  if (nrm < 1e-150) {
    EigResult r;
    r.lambda = {0, 0, 0};
    r.frame = Mat3::identity();
    return r;
  }

  // Characteristic equation of a traceless symmetric matrix:
  // l^3 - j2 l - j3 = 0 with j2 = tr(Q^2)/2, j3 = det(Q).
  double j2 = 0.5 * ddot(q, q);
  double j3 = det3(q);
  double s = std::sqrt(j2 / 3.0);
  double c3 = j3 / (2.0 * s * s * s);
  c3 = std::clamp(c3, -1.0, 1.0);
  double phi = std::acos(c3) / 3.0;
  std::array<double, 3> lam = {2 * s * std::cos(phi),
                               2 * s * std::cos(phi - 2 * M_PI / 3),
                               2 * s * std::cos(phi - 4 * M_PI / 3)};
  std::sort(lam.begin(), lam.end(), std::greater<>());
  double mean = (lam[0] + lam[1] + lam[2]) / 3.0;
  for (auto& l : lam) l -= mean;

  // clustered spectra go to Jacobi for accurate eigenvectors
  double gap = std::min(lam[0] - lam[1], lam[1] - lam[2]);
  if (gap < 1e-8 * nrm) return eig_jacobi(q);

  Mat3 m = q.matrix();
  auto eigvec = [&](double l) -> Vec3 {
    Vec3 rows[3];
    for (int i = 0; i < 3; ++i)
      rows[i] = {m(i, 0) - (i == 0 ? l : 0), m(i, 1) - (i == 1 ? l : 0),
                 m(i, 2) - (i == 2 ? l : 0)};
    Vec3 best{0, 0, 0};
    double best_n = -1;
    for (int i = 0; i < 3; ++i) {
      Vec3 c = cross(rows[i], rows[(i + 1) % 3]);
      double n = norm(c);
      if (n > best_n) {
        best_n = n;
        best = c;
      }
    }
    return normalized(best);
  };

  Vec3 v0 = eigvec(lam[0]);
  Vec3 v2 = eigvec(lam[2]);
  double p = dot(v2, v0);
  v2 = normalized({v2[0] - p * v0[0], v2[1] - p * v0[1], v2[2] - p * v0[2]});
  Vec3 v1 = cross(v2, v0);

  EigResult res;
  res.lambda = lam;
  for (int i = 0; i < 3; ++i) {
    res.frame(i, 0) = v0[i];
    res.frame(i, 1) = v1[i];
    res.frame(i, 2) = v2[i];
  }

  // reconstruction guard; degrade to Jacobi on any loss of accuracy
  double err = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double r = 0;
      for (int k = 0; k < 3; ++k)
        r += res.frame(i, k) * lam[k] * res.frame(j, k);
      err = std::max(err, std::fabs(r - m(i, j)));
    }
  if (err > 1e-13 * std::max(1.0, nrm)) return eig_jacobi(q);
  return res;
}

Sym4Moment Sym4Moment::isotropic() {
  Sym4Moment m;
  for (int s = 0; s < 15; ++s) {
    auto [i, j, k, l] = sym4_tuples[s];
    m.c[s] = ((i == j) * (k == l) + (i == k) * (j == l) + (i == l) * (j == k)) /
             15.0;
  }
  return m;
}

Mat3 contract42(const Sym4Moment& m4, const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += m4(i, j, k, l) * a(k, l);
      r(i, j) = r(j, i) = s;
    }
  return r;
}

Sym4Moment contract62(const Sym6Moment& m6, const Mat3& a) {
  Sym4Moment r;
  for (int s = 0; s < 15; ++s) {
    auto [i, j, k, l] = sym4_tuples[s];
    double v = 0;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) v += m6(i, j, k, l, p, q) * a(p, q);
    r.c[s] = v;
  }
  return r;
}

SymTraceless3 uniaxial(double s, const Vec3& n) {
  if (std::fabs(norm(n) - 1.0) > 1e-12)
    throw std::invalid_argument("uniaxial: director must be a unit vector");
  SymTraceless3 q;
  q.c[0] = s * (n[0] * n[0] - 1.0 / 3.0);
  q.c[1] = s * (n[1] * n[1] - 1.0 / 3.0);
  q.c[2] = s * n[0] * n[1];
  q.c[3] = s * n[0] * n[2];
  q.c[4] = s * n[1] * n[2];
  return q;
}

Mat3 mq_apply(const SymTraceless3& q, const Sym4Moment& m4, const Mat3& a) {
  Mat3 r = contract42(m4, a);
  Mat3 qa = mul(q.matrix(), a);
  Mat3 out;
  for (int i = 0; i < 9; ++i) out.a[i] = a.a[i] / 3.0 + qa.a[i] - r.a[i];
  return out;
}

const std::array<SymTraceless3, 5>& sym_basis() {
  static const std::array<SymTraceless3, 5> basis = [] {
    const double r2 = 1.0 / std::sqrt(2.0), r6 = 1.0 / std::sqrt(6.0);
    std::array<SymTraceless3, 5> b{};
    b[0].c = {r2, -r2, 0, 0, 0};        // (e1e1 - e2e2)/sqrt(2)
    b[1].c = {-r6, -r6, 0, 0, 0};       // (2e3e3 - e1e1 - e2e2)/sqrt(6)
    b[2].c = {0, 0, r2, 0, 0};          // (e1e2 + e2e1)/sqrt(2)
    b[3].c = {0, 0, 0, r2, 0};          // (e1e3 + e3e1)/sqrt(2)
    b[4].c = {0, 0, 0, 0, r2};          // (e2e3 + e3e2)/sqrt(2)
    return b;
  }();
  return basis;
}

std::array<double, 5> basis_coords(const SymTraceless3& q) {
  const auto& b = sym_basis();
  std::array<double, 5> x;
  for (int i = 0; i < 5; ++i) x[i] = ddot(q, b[i]);
  return x;
}

SymTraceless3 from_basis_coords(const std::array<double, 5>& x) {
  const auto& b = sym_basis();
  SymTraceless3 q;
  for (int i = 0; i < 5; ++i) q += x[i] * b[i];
  return q;
}

}  // namespace qtensor
