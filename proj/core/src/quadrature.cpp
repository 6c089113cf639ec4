#include "qtensor/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "quad_detail.hpp"

namespace qtensor {

namespace detail {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // i-th root from the top, then Newton on P_n
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    double wi = 2.0 / ((1 - z * z) * pp * pp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
}

}  // namespace detail

QuadratureRule build_rule(int level) {
  if (level < 1) throw std::invalid_argument("build_rule: level must be >= 1");
  std::vector<double> x, w;
  detail::gauss_legendre(level, x, w);
  int nphi = 2 * level;
  double wphi = 2.0 * M_PI / nphi;
  QuadratureRule rule;
  rule.level = level;
  rule.exactness = 2 * level - 1;
  rule.nodes.reserve(static_cast<size_t>(level) * nphi);
  rule.weights.reserve(static_cast<size_t>(level) * nphi);
  for (int i = 0; i < level; ++i) {
    double ct = x[i], st = std::sqrt(1.0 - ct * ct);
    for (int j = 0; j < nphi; ++j) {
      double phi = wphi * j;
      rule.nodes.push_back({st * std::cos(phi), st * std::sin(phi), ct});
      rule.weights.push_back(w[i] * wphi);
    }
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = build_rule(32);
  return rule;
}

namespace {

constexpr int kNVals = 50;  // 1 (z) + 6 (m2) + 15 (m4) + 28 (m6)

std::array<double, kNVals> pairwise(const std::vector<std::array<double, kNVals>>& c,
                                    size_t lo, size_t hi) {
  std::array<double, kNVals> out{};
  if (hi - lo <= 8) {
    for (size_t n = lo; n < hi; ++n)
      for (int k = 0; k < kNVals; ++k) out[k] += c[n][k];
    return out;
  }
  size_t mid = lo + (hi - lo) / 2;
  auto a = pairwise(c, lo, mid);
  auto b = pairwise(c, mid, hi);
  for (int k = 0; k < kNVals; ++k) out[k] = a[k] + b[k];
  return out;
}

}  // namespace

MomentSet moments_of(const SymTraceless3& b, const QuadratureRule& rule) {
  if (rule.exactness < 12)
    throw std::invalid_argument("moments_of: rule exactness must be >= 12");

  const size_t nn = rule.nodes.size();
  double shift = -1e300;
  std::vector<double> expo(nn);
  for (size_t n = 0; n < nn; ++n) {
    const Vec3& m = rule.nodes[n];
    double e = b.xx() * m[0] * m[0] + b.yy() * m[1] * m[1] +
               b.zz() * m[2] * m[2] +
               2 * (b.xy() * m[0] * m[1] + b.xz() * m[0] * m[2] +
                    b.yz() * m[1] * m[2]);
    expo[n] = e;
    shift = std::max(shift, e);
  }

  std::vector<std::array<double, kNVals>> contrib(nn);
  for (size_t n = 0; n < nn; ++n) {
    const Vec3& m = rule.nodes[n];
    double f = rule.weights[n] * std::exp(expo[n] - shift);
    auto& c = contrib[n];
    c[0] = f;
    int idx = 1;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) c[idx++] = f * m[i] * m[j];
    for (const auto& t : sym4_tuples)
      c[idx++] = f * m[t[0]] * m[t[1]] * m[t[2]] * m[t[3]];
    for (const auto& t : sym6_tuples)
      c[idx++] = f * m[t[0]] * m[t[1]] * m[t[2]] * m[t[3]] * m[t[4]] * m[t[5]];
  }

  auto sum = pairwise(contrib, 0, nn);
  double zs = sum[0];

  MomentSet ms;
  ms.z = zs * std::exp(shift);
  int idx = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      ms.m2(i, j) = ms.m2(j, i) = sum[idx++] / zs;
    }
  for (int s = 0; s < 15; ++s) ms.m4.c[s] = sum[idx++] / zs;
  for (int s = 0; s < 28; ++s) ms.m6.c[s] = sum[idx++] / zs;
  return ms;
}

Traceless4 q4_of(const SymTraceless3& b, const QuadratureRule& rule) {
  MomentSet ms = moments_of(b, rule);
  Traceless4 q4;
  for (int s = 0; s < 15; ++s) {
    auto [i, j, k, l] = sym4_tuples[s];
    double d = (i == j) * ms.m2(k, l) + (i == k) * ms.m2(j, l) +
               (i == l) * ms.m2(j, k) + (j == k) * ms.m2(i, l) +
               (j == l) * ms.m2(i, k) + (k == l) * ms.m2(i, j);
    double iso = (i == j) * (k == l) + (i == k) * (j == l) + (i == l) * (j == k);
    q4.c[s] = ms.m4.c[s] - d / 7.0 + iso / 35.0;
  }
  return q4;
}

}  // namespace qtensor
