#include "qtensor/bingham.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "bingham_detail.hpp"
#include "quad_detail.hpp"

namespace qtensor {

Admissibility check_admissible(const SymTraceless3& q) {
  EigResult e = eig(q);
  double margin = 1e300;
  for (double l : e.lambda)
    margin = std::min(margin, std::min(l + 1.0 / 3.0, 2.0 / 3.0 - l));
  return {e.lambda, margin, margin > 0};
}

namespace detail {

namespace {

// Folded product rule: z-positive Gauss nodes x quarter azimuth.  Exact for
// integrands even in each coordinate separately, which is all the
// eigenframe solve ever sees.
struct FastRule {
  std::vector<double> m1s, m2s, m3s, w;
};

const FastRule& fast_rule(int level) {
  thread_local std::map<int, FastRule> cache;
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;

  std::vector<double> x, gw;
  gauss_legendre(level, x, gw);
  FastRule fr;
  int jmax = level / 2;  // pi/2 is a node only for even level
  for (int i = 0; i < level; ++i) {
    if (x[i] < -1e-14) continue;
    double zmult = x[i] > 1e-14 ? 2.0 : 1.0;
    double ct2 = x[i] * x[i], st2 = 1.0 - ct2;
    for (int j = 0; j <= jmax; ++j) {
      double amult = (j == 0 || 2 * j == level) ? 2.0 : 4.0;
      double phi = M_PI * j / level;
      double c = std::cos(phi), s = std::sin(phi);
      fr.m1s.push_back(st2 * c * c);
      fr.m2s.push_back(st2 * s * s);
      fr.m3s.push_back(ct2);
      fr.w.push_back(gw[i] * (M_PI / level) * zmult * amult);
    }
  }
  return cache.emplace(level, std::move(fr)).first->second;
}

struct EvenEval {
  double zs;     // sum w exp(E - shift)
  double shift;  // max exponent
  double p[3];   // <m_a^2>
  double pp[3][3];
};

EvenEval even_eval(const FastRule& fr, double b0, double b1, double b2) {
  const size_t n = fr.w.size();
  double shift = -1e300;
  for (size_t i = 0; i < n; ++i) {
    double e = b0 * fr.m1s[i] + b1 * fr.m2s[i] + b2 * fr.m3s[i];
    if (e > shift) shift = e;
  }
  EvenEval em{};
  em.shift = shift;
  for (size_t i = 0; i < n; ++i) {
    double m1 = fr.m1s[i], m2 = fr.m2s[i], m3 = fr.m3s[i];
    double f = fr.w[i] * std::exp(b0 * m1 + b1 * m2 + b2 * m3 - shift);
    em.zs += f;
    em.p[0] += f * m1;
    em.p[1] += f * m2;
    em.p[2] += f * m3;
    em.pp[0][0] += f * m1 * m1;
    em.pp[1][1] += f * m2 * m2;
    em.pp[2][2] += f * m3 * m3;
    em.pp[0][1] += f * m1 * m2;
    em.pp[0][2] += f * m1 * m3;
    em.pp[1][2] += f * m2 * m3;
  }
  for (int a = 0; a < 3; ++a) em.p[a] /= em.zs;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      em.pp[a][b] /= em.zs;
      em.pp[b][a] = em.pp[a][b];
    }
  return em;
}

}  // namespace

CellSolve solve_cell(const SymTraceless3& q, int level,
                     const SymTraceless3* warm, double tol, int max_iter) {
  const FastRule& fr = fast_rule(level);
  EigResult eg = eig(q);
  const auto& lam = eg.lambda;

  double x0, x1;
  if (warm) {
    // diagonal of the previous conjugate field in q's frame, detraced
    Mat3 bw = warm->matrix();
    double d[3];
    for (int k = 0; k < 3; ++k) {
      double s = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          s += eg.frame(i, k) * bw(i, j) * eg.frame(j, k);
      d[k] = s;
    }
    double mean = (d[0] + d[1] + d[2]) / 3.0;
    x0 = d[0] - mean;
    x1 = d[1] - mean;
  } else {
    // low-|Q| linearization gives B ~ 7.5 Q; 5 sits safely in the basin
    x0 = 5 * lam[0];
    x1 = 5 * lam[1];
  }

  EvenEval em;
  auto eval = [&](double a, double b, EvenEval& out) {
    out = even_eval(fr, a, b, -a - b);
    double r = std::fabs(out.p[0] - 1.0 / 3.0 - lam[0]);
    r = std::max(r, std::fabs(out.p[1] - 1.0 / 3.0 - lam[1]));
    r = std::max(r, std::fabs(out.p[2] - 1.0 / 3.0 - lam[2]));
    return r;
  };

  double rinf = eval(x0, x1, em);
  int iter = 0;
  while (rinf > tol && iter < max_iter) {
    ++iter;
    double C00 = em.pp[0][0] - em.p[0] * em.p[0];
    double C11 = em.pp[1][1] - em.p[1] * em.p[1];
    double C22 = em.pp[2][2] - em.p[2] * em.p[2];
    double C01 = em.pp[0][1] - em.p[0] * em.p[1];
    double C02 = em.pp[0][2] - em.p[0] * em.p[2];
    double C12 = em.pp[1][2] - em.p[1] * em.p[2];
    // Hessian of ln Z in the two free eigenvalues (B3 = -B1-B2)
    double J11 = C00 - 2 * C02 + C22;
    double J22 = C11 - 2 * C12 + C22;
    double J12 = C01 - C02 - C12 + C22;
    double det = J11 * J22 - J12 * J12;
    if (!(J11 > 0) || !(det > 0))
      throw NoConvergence("closure solve: Newton Jacobian not positive definite",
                          rinf, iter);
    double r0 = em.p[0] - 1.0 / 3.0 - lam[0];
    double r1 = em.p[1] - 1.0 / 3.0 - lam[1];
    double r2 = em.p[2] - 1.0 / 3.0 - lam[2];
    double rt0 = r0 - r2, rt1 = r1 - r2;
    double dx0 = -(J22 * rt0 - J12 * rt1) / det;
    double dx1 = -(-J12 * rt0 + J11 * rt1) / det;

    double t = 1;
    EvenEval em2;
    double rnew = eval(x0 + dx0, x1 + dx1, em2);
    for (int halve = 0; rnew >= rinf && halve < 30; ++halve) {
      t *= 0.5;
      rnew = eval(x0 + t * dx0, x1 + t * dx1, em2);
    }
    x0 += t * dx0;
    x1 += t * dx1;
    em = em2;
    rinf = rnew;
  }
  if (rinf > tol)
    throw NoConvergence("closure solve: residual not below tolerance", rinf,
                        iter);

  CellSolve cs;
  cs.iterations = iter;
  cs.residual = rinf;
  cs.ln_z = std::log(em.zs) + em.shift;

  double bd[3] = {x0, x1, -x0 - x1};
  const Mat3& R = eg.frame;
  Mat3 bm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += R(i, k) * bd[k] * R(j, k);
      bm(i, j) = s;
    }
  cs.b = SymTraceless3::from_matrix(bm);

  // eigenframe fourth moment has pair structure <m_p^2 m_q^2>; rotate
  for (int s = 0; s < 15; ++s) {
    auto [i, j, k, l] = sym4_tuples[s];
    double acc = 0;
    for (int p = 0; p < 3; ++p)
      acc += em.pp[p][p] * R(i, p) * R(j, p) * R(k, p) * R(l, p);
    for (int p = 0; p < 3; ++p)
      for (int r = p + 1; r < 3; ++r) {
        double v = em.pp[p][r];
        acc += v * (R(i, p) * R(j, p) * R(k, r) * R(l, r) +
                    R(i, p) * R(j, r) * R(k, p) * R(l, r) +
                    R(i, p) * R(j, r) * R(k, r) * R(l, p) +
                    R(i, r) * R(j, p) * R(k, p) * R(l, r) +
                    R(i, r) * R(j, p) * R(k, r) * R(l, p) +
                    R(i, r) * R(j, r) * R(k, p) * R(l, p));
      }
    cs.m4.c[s] = acc;
  }
  return cs;
}

Sym6Moment cell_m6(const SymTraceless3& b, int level) {
  const FastRule& fr = fast_rule(level);
  EigResult eg = eig(b);
  double bd[3] = {eg.lambda[0], eg.lambda[1], eg.lambda[2]};

  const size_t n = fr.w.size();
  double shift = -1e300;
  for (size_t i = 0; i < n; ++i) {
    double e = bd[0] * fr.m1s[i] + bd[1] * fr.m2s[i] + bd[2] * fr.m3s[i];
    if (e > shift) shift = e;
  }
  double zs = 0;
  // <m_p^2 m_q^2 m_r^2> for the 10 sorted triples
  double v[10] = {};
  static constexpr int triples[10][3] = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2},
                                         {0, 1, 1}, {0, 1, 2}, {0, 2, 2},
                                         {1, 1, 1}, {1, 1, 2}, {1, 2, 2},
                                         {2, 2, 2}};
  for (size_t i = 0; i < n; ++i) {
    double m[3] = {fr.m1s[i], fr.m2s[i], fr.m3s[i]};
    double f = fr.w[i] *
               std::exp(bd[0] * m[0] + bd[1] * m[1] + bd[2] * m[2] - shift);
    zs += f;
    for (int t = 0; t < 10; ++t)
      v[t] += f * m[triples[t][0]] * m[triples[t][1]] * m[triples[t][2]];
  }
  for (double& x : v) x /= zs;

  const Mat3& R = eg.frame;
  Sym6Moment out;
  for (int t = 0; t < 10; ++t) {
    int ms[6] = {triples[t][0], triples[t][0], triples[t][1],
                 triples[t][1], triples[t][2], triples[t][2]};
    std::sort(ms, ms + 6);
    do {
      for (int s = 0; s < 28; ++s) {
        const auto& u = sym6_tuples[s];
        out.c[s] += v[t] * R(u[0], ms[0]) * R(u[1], ms[1]) * R(u[2], ms[2]) *
                    R(u[3], ms[3]) * R(u[4], ms[4]) * R(u[5], ms[5]);
      }
    } while (std::next_permutation(ms, ms + 6));
  }
  return out;
}

}  // namespace detail

static BinghamResult solve_impl(const SymTraceless3& q,
                                const QuadratureRule& rule,
                                const SymTraceless3* warm, double tol,
                                int max_iter) {
  if (!(tol >= 1e-12))
    throw std::invalid_argument("solve_bq: tol must be >= 1e-12");
  if (rule.level < 1)
    throw std::invalid_argument("solve_bq: rule must come from build_rule");
  Admissibility adm = check_admissible(q);
  if (!(adm.margin >= 1e-6))
    throw NonAdmissible("solve_bq: eigenvalue margin below 1e-6");

  detail::CellSolve cs =
      detail::solve_cell(q, rule.level, warm, 0.25 * tol, max_iter);

  BinghamResult out;
  out.b = cs.b;
  out.moments = moments_of(cs.b, rule);
  out.iterations = cs.iterations;

  Mat3 qm = q.matrix();
  double res = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double target = (i == j ? 1.0 / 3.0 : 0.0) + qm(i, j);
      res = std::max(res, std::fabs(out.moments.m2(i, j) - target));
    }
  out.residual = res;
  if (res > tol)
    throw NoConvergence("solve_bq: full-rule residual above tolerance", res,
                        cs.iterations);
  return out;
}

BinghamResult solve_bq(const SymTraceless3& q, const QuadratureRule& rule,
                       double tol, int max_iter) {
  return solve_impl(q, rule, nullptr, tol, max_iter);
}

BinghamResult solve_bq(const SymTraceless3& q, const QuadratureRule& rule,
                       const SymTraceless3& b0, double tol, int max_iter) {
  return solve_impl(q, rule, &b0, tol, max_iter);
}

}  // namespace qtensor
