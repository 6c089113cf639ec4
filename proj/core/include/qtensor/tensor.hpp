#pragma once

#include <array>

namespace qtensor {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 cross(const Vec3& a, const Vec3& b);
Vec3 normalized(const Vec3& a);

struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }

  static Mat3 zero() { return {}; }
  static Mat3 identity();
};

Mat3 operator+(const Mat3& x, const Mat3& y);
Mat3 operator-(const Mat3& x, const Mat3& y);
Mat3 operator*(double s, const Mat3& x);
Mat3& operator+=(Mat3& x, const Mat3& y);
Mat3 mul(const Mat3& x, const Mat3& y);
Mat3 transpose(const Mat3& x);
double trace(const Mat3& x);
double ddot(const Mat3& x, const Mat3& y);  // full contraction x_ij y_ij

// Symmetric traceless 3x3 tensor stored as the five independent components
// xx, yy, xy, xz, yz (zz = -xx-yy).  Reconstruction is symmetric and
// traceless by construction.
struct SymTraceless3 {
  std::array<double, 5> c{};

  double xx() const { return c[0]; }
  double yy() const { return c[1]; }
  double zz() const { return -c[0] - c[1]; }
  double xy() const { return c[2]; }
  double xz() const { return c[3]; }
  double yz() const { return c[4]; }

  Mat3 matrix() const;
  // symmetrize, then subtract the trace part
  static SymTraceless3 from_matrix(const Mat3& m);
};

SymTraceless3 operator+(const SymTraceless3& x, const SymTraceless3& y);
SymTraceless3 operator-(const SymTraceless3& x, const SymTraceless3& y);
SymTraceless3 operator-(const SymTraceless3& x);
SymTraceless3 operator*(double s, const SymTraceless3& x);
SymTraceless3& operator+=(SymTraceless3& x, const SymTraceless3& y);
SymTraceless3& operator-=(SymTraceless3& x, const SymTraceless3& y);
double ddot(const SymTraceless3& x, const SymTraceless3& y);
double ddot(const SymTraceless3& x, const Mat3& y);
double norm(const SymTraceless3& x);

struct EigResult {
  std::array<double, 3> lambda;  // descending, sums to zero
  Mat3 frame;                    // columns are the eigenvectors
};

// Cardano's formula with a Jacobi fallback when eigenvalues cluster within
// 1e-8 of each other (relative to the tensor norm).
EigResult eig(const SymTraceless3& q);

namespace detail {

constexpr int sym4_slot(int i, int j, int k, int l) {
  int v[4] = {i, j, k, l};
  for (int a = 1; a < 4; ++a)
    for (int b = a; b > 0 && v[b - 1] > v[b]; --b) {
      int t = v[b - 1];
      v[b - 1] = v[b];
      v[b] = t;
    }
  int s = 0;
  for (int p = 0; p < 3; ++p)
    for (int q = p; q < 3; ++q)
      for (int r = q; r < 3; ++r)
        for (int t = r; t < 3; ++t) {
          if (p == v[0] && q == v[1] && r == v[2] && t == v[3]) return s;
          ++s;
        }
  return -1;
}

constexpr int sym6_slot(int i, int j, int k, int l, int m, int n) {
  int v[6] = {i, j, k, l, m, n};
  for (int a = 1; a < 6; ++a)
    for (int b = a; b > 0 && v[b - 1] > v[b]; --b) {
      int t = v[b - 1];
      v[b - 1] = v[b];
      v[b] = t;
    }
  int s = 0;
  for (int p = 0; p < 3; ++p)
    for (int q = p; q < 3; ++q)
      for (int r = q; r < 3; ++r)
        for (int t = r; t < 3; ++t)
          for (int u = t; u < 3; ++u)
            for (int w = u; w < 3; ++w) {
              if (p == v[0] && q == v[1] && r == v[2] && t == v[3] &&
                  u == v[4] && w == v[5])
                return s;
              ++s;
            }
  return -1;
}

constexpr std::array<std::array<int, 4>, 15> make_sym4_tuples() {
  std::array<std::array<int, 4>, 15> t{};
  int s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k)
        for (int l = k; l < 3; ++l) t[s++] = {i, j, k, l};
  return t;
}

constexpr std::array<std::array<int, 6>, 28> make_sym6_tuples() {
  std::array<std::array<int, 6>, 28> t{};
  int s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k)
        for (int l = k; l < 3; ++l)
          for (int m = l; m < 3; ++m)
            for (int n = m; n < 3; ++n) t[s++] = {i, j, k, l, m, n};
  return t;
}

constexpr std::array<int, 81> make_sym4_map() {
  std::array<int, 81> map{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          map[((i * 3 + j) * 3 + k) * 3 + l] = sym4_slot(i, j, k, l);
  return map;
}

constexpr std::array<int, 729> make_sym6_map() {
  std::array<int, 729> map{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
              map[((((i * 3 + j) * 3 + k) * 3 + l) * 3 + m) * 3 + n] =
                  sym6_slot(i, j, k, l, m, n);
  return map;
}

inline constexpr std::array<int, 81> sym4_map = make_sym4_map();
inline constexpr std::array<int, 729> sym6_map = make_sym6_map();

}  // namespace detail

// independent sorted multi-indices, in storage order
inline constexpr std::array<std::array<int, 4>, 15> sym4_tuples =
    detail::make_sym4_tuples();
inline constexpr std::array<std::array<int, 6>, 28> sym6_tuples =
    detail::make_sym6_tuples();

// Fully symmetric rank-4 tensor, 15 independent components.
struct Sym4Moment {
  std::array<double, 15> c{};

  double operator()(int i, int j, int k, int l) const {
    return c[detail::sym4_map[((i * 3 + j) * 3 + k) * 3 + l]];
  }

  // moments of the uniform density: (d_ij d_kl + d_ik d_jl + d_il d_jk)/15
  static Sym4Moment isotropic();
};

// Fully symmetric rank-6 tensor, 28 independent components.
struct Sym6Moment {
  std::array<double, 28> c{};

  double operator()(int i, int j, int k, int l, int m, int n) const {
    return c[detail::sym6_map[((((i * 3 + j) * 3 + k) * 3 + l) * 3 + m) * 3 +
                              n]];
  }
};

// Fully symmetric rank-4 tensor with vanishing pair contractions.
struct Traceless4 {
  std::array<double, 15> c{};

  double operator()(int i, int j, int k, int l) const {
    return c[detail::sym4_map[((i * 3 + j) * 3 + k) * 3 + l]];
  }
};

// out_ij = m4_ijkl a_kl (only the symmetric part of a contributes)
Mat3 contract42(const Sym4Moment& m4, const Mat3& a);
// out_ijkl = m6_ijklpq a_pq
Sym4Moment contract62(const Sym6Moment& m6, const Mat3& a);
// s (nn - I/3); rejects non-unit n
SymTraceless3 uniaxial(double s, const Vec3& n);

// closure operator: A/3 + Q.A - A:M4
Mat3 mq_apply(const SymTraceless3& q, const Sym4Moment& m4, const Mat3& a);

// Orthonormal basis E1..E5 of the symmetric traceless space, fixed once;
// used for all 5x5 operator matrices.
const std::array<SymTraceless3, 5>& sym_basis();
std::array<double, 5> basis_coords(const SymTraceless3& q);
SymTraceless3 from_basis_coords(const std::array<double, 5>& x);

}  // namespace qtensor
