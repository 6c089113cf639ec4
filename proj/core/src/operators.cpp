#include "qtensor/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linalg.hpp"

namespace qtensor {

SymTraceless3 qn_apply(const SymTraceless3& b, const EquilibriumData& eq) {
  Mat3 bm = b.matrix();
  double qb = ddot(eq.q0, bm);
  Mat3 r = contract42(eq.m4, bm) - qb * eq.q0.matrix();
  for (int i = 0; i < 3; ++i) r(i, i) -= qb / 3.0;
  return SymTraceless3::from_matrix(r);
}

SymTraceless3 jn_apply(const SymTraceless3& b, const EquilibriumData& eq) {
  Mat3 bm = b.matrix(), q0 = eq.q0.matrix();
  Mat3 r = (1.0 / 3.0) * bm + 0.5 * (mul(bm, q0) + mul(q0, bm)) -
           contract42(eq.m4, bm);
  return SymTraceless3::from_matrix(r);
}

SymTraceless3 kn_apply(const SymTraceless3& b, const EquilibriumData& eq) {
  return b - eq.alpha * qn_apply(b, eq);
}

SymTraceless3 ln_apply(const SymTraceless3& b, const EquilibriumData& eq) {
  return -2.0 * jn_apply(kn_apply(b, eq), eq);
}

namespace {

EquilibriumData reaim(const EquilibriumData& eq, const Vec3& n) {
  double d2 = 0;
  for (int i = 0; i < 3; ++i) d2 += (n[i] - eq.n[i]) * (n[i] - eq.n[i]);
  if (d2 < 1e-24) return eq;
  if (std::fabs(norm(n) - 1.0) > 1e-12)
    throw std::invalid_argument("operator_matrix: n must be a unit vector");
  EquilibriumData w = eq;
  w.n = n;
  w.q0 = uniaxial(eq.s2, n);
  w.b0 = uniaxial(eq.eta, n);
  w.m4 = uniaxial_m4(eq.s2, eq.s4, n);
  MomentSet m = moments_of(w.b0, default_rule());
  w.m6 = m.m6;
  w.z = m.z;
  return w;
}

std::array<double, 5> spectrum_of(const std::array<std::array<double, 5>, 5>& m) {
  std::array<double, 25> a;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a[5 * i + j] = 0.5 * (m[i][j] + m[j][i]);
  std::array<double, 5> d;
  std::array<double, 25> v;
  detail::jacobi_eig<5>(a, d, v);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

OperatorMatrix operator_matrix(OperatorTag tag, const EquilibriumData& eq,
                               const Vec3& n) {
  EquilibriumData w = reaim(eq, n);
  auto apply = [&](const SymTraceless3& b) {
    switch (tag) {
      case OperatorTag::Qn: return qn_apply(b, w);
      case OperatorTag::Jn: return jn_apply(b, w);
      case OperatorTag::Kn: return kn_apply(b, w);
      default: return ln_apply(b, w);
    }
  };
  OperatorMatrix om;
  om.tag = tag;
  om.n = w.n;
  om.alpha = w.alpha;
  om.eta = w.eta;
  om.s2 = w.s2;
  om.s4 = w.s4;
  const auto& basis = sym_basis();
  for (int j = 0; j < 5; ++j) {
    auto col = basis_coords(apply(basis[j]));
    for (int i = 0; i < 5; ++i) om.m[i][j] = col[i];
  }

  double asym = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      asym = std::max(asym, std::fabs(om.m[i][j] - om.m[j][i]));
  if (asym > 1e-10)
    throw std::logic_error("operator_matrix: matrix lost symmetry");

  std::array<double, 5> ev = spectrum_of(om.m);
  if (tag == OperatorTag::Jn && !(ev[0] > 0))
    throw std::logic_error("operator_matrix: Jn must be positive definite");
  if (tag == OperatorTag::Kn) {
    if (ev[0] < -1e-10)
      throw std::logic_error("operator_matrix: Kn must be positive semi-definite");
    if (w.eta > 1e-12) {
      int zeros = 0;
      for (double l : ev)
        if (std::fabs(l) < 1e-8) ++zeros;
      if (zeros != 2)
        throw std::logic_error(
            "operator_matrix: Kn kernel must be two-dimensional");
    }
  }
  return om;
}

std::array<SymTraceless3, 2> kernel_basis(const Vec3& n) {
  if (std::fabs(norm(n) - 1.0) > 1e-12)
    throw std::invalid_argument("kernel_basis: n must be a unit vector");
  Vec3 seed = std::fabs(n[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 n1 = normalized(cross(n, seed));
  Vec3 n2 = cross(n, n1);
  const double r2 = 1.0 / std::sqrt(2.0);
  std::array<SymTraceless3, 2> out;
  for (int k = 0; k < 2; ++k) {
    const Vec3& t = k == 0 ? n1 : n2;
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = r2 * (n[i] * t[j] + t[i] * n[j]);
    out[k] = SymTraceless3::from_matrix(m);
  }
  return out;
}

double check_q6_identity(const SymTraceless3& b, const EquilibriumData& eq) {
  Mat3 bm = b.matrix(), b0 = eq.b0.matrix(), q0 = eq.q0.matrix();
  double qb = ddot(eq.q0, bm);
  Sym4Moment m6b = contract62(eq.m6, bm);
  Mat3 lhs = contract42(m6b, b0) - qb * contract42(eq.m4, b0);
  SymTraceless3 qn = qn_apply(b, eq);
  Mat3 rhs = mul(b0, qn.matrix()) + mul(bm, q0) + (1.0 / 3.0) * bm -
             contract42(eq.m4, bm) - 1.5 * qn.matrix();
  double r = 0;
  for (int i = 0; i < 9; ++i) r = std::max(r, std::fabs(lhs.a[i] - rhs.a[i]));
  return r;
}

Spectrum operator_spectrum(const OperatorMatrix& om) {
  std::array<double, 25> a;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a[5 * i + j] = 0.5 * (om.m[i][j] + om.m[j][i]);
  std::array<double, 5> d;
  std::array<double, 25> v;
  detail::jacobi_eig<5>(a, d, v);
  std::array<int, 5> idx = {0, 1, 2, 3, 4};
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return d[x] < d[y]; });
  Spectrum s;
  for (int k = 0; k < 5; ++k) {
    s.eigenvalues[k] = d[idx[k]];
    for (int i = 0; i < 5; ++i) s.vectors[k][i] = v[5 * i + idx[k]];
  }
  return s;
}

}  // namespace qtensor
