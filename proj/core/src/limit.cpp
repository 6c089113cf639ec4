#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qtensor/equilibria.hpp"

#include "field_detail.hpp"
#include "spectral_detail.hpp"

namespace qtensor {

namespace {

Vec3 column(const Mat3& m, int j) { return {m(0, j), m(1, j), m(2, j)}; }

// principal eigenvector tracked by continuity: near-degenerate top pair
// falls back to best overlap with the previous director
Vec3 extract_director(const SymTraceless3& q, const Vec3& prev) {
  const EigResult e = eig(q);
  Vec3 d;
  if (e.lambda[0] - e.lambda[1] < 1e-6) {
    double best = -1;
    for (int j = 0; j < 3; ++j) {
      const Vec3 cand = column(e.frame, j);
      if (std::fabs(dot(cand, prev)) > best) {
        best = std::fabs(dot(cand, prev));
        d = cand;
      }
    }
  } else {
    d = column(e.frame, 0);
  }
  if (dot(d, prev) < 0) d = Vec3{-d[0], -d[1], -d[2]};
  return d;
}

double line_angle(const Vec3& a, const Vec3& b) {
  return std::acos(std::min(1.0, std::fabs(dot(a, b))));
}

double biaxiality_of(const SymTraceless3& q) {
  const Mat3 m = q.matrix();
  const double t2 = ddot(q, m);
  if (t2 < 1e-24) return 0.0;
  const double t3 = trace(mul(m, mul(m, m)));
  return 1.0 - 6.0 * t3 * t3 / (t2 * t2 * t2);
}

double manifold_distance(const SymTraceless3& q, const Vec3& d, double s2) {
  Mat3 m = q.matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) -= s2 * (d[i] * d[j] - (i == j ? 1.0 / 3.0 : 0.0));
  double f2 = 0;
  for (double v : m.a) f2 += v * v;
  return std::sqrt(f2);
}

LimitRow run_homogeneous_shear(double de, const FlowParams& p,
                               const LeslieCoefficients& lc) {
  Mat3 kappa = Mat3::zero();
  kappa(0, 1) = 1.0;
  const Vec3 h{0, 0, 0};
  const double t_end = 2.0;
  const double dt = de / 40.0;
  const long nsteps = std::lround(t_end / dt);

  FlowParams pp = p;
  pp.de = de;
  pp.eps = de;

  const Vec3 n0{1, 0, 0};
  SymTraceless3 q = uniaxial(lc.s2, n0);
  Vec3 nel = n0, prev = n0;

  LimitRow row{};
  row.de = de;
  for (long k = 0; k < nsteps; ++k) {
    q = step_homogeneous(q, kappa, pp, dt);
    nel = el_step(nel, kappa, h, lc, dt);
    const Vec3 d = extract_director(q, prev);
    prev = d;
    row.director_err = std::max(row.director_err, line_angle(d, nel));
    row.biaxiality = std::max(row.biaxiality, biaxiality_of(q));
    row.manifold_dist =
        std::max(row.manifold_dist, manifold_distance(q, d, lc.s2));
  }
  row.s2_err = std::fabs(1.5 * eig(q).lambda[0] - lc.s2);
  return row;
}

// gradient-flow Ericksen-Leslie reference for the splay scenario: no flow,
// one-constant field h = alpha G S2^2 lap(n).  The laplacian is integrated
// exactly per mode (explicit stepping of it is unstable on fine grids); the
// unit-length constraint forcing -(n.h) n is explicit, followed by a
// renormalization.
std::vector<Vec3> el_field_step(const std::vector<Vec3>& n,
                                detail::Spectral2D& sp, double k_f,
                                double gamma1, double dt) {
  using detail::Cplx;
  const int nc = sp.cells();
  const int nk = sp.nk();
  const double mob = k_f / gamma1;

  std::array<std::vector<Cplx>, 3> nhat;
  std::array<std::vector<double>, 3> lap;
  {
    std::vector<double> comp(nc);
    std::vector<Cplx> lhat(nk);
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < nc; ++i) comp[i] = n[i][c];
      sp.forward(comp, nhat[c]);
      for (int t = 0; t < nk; ++t) lhat[t] = -sp.k2[t] * nhat[c][t];
      sp.backward(lhat, lap[c]);
    }
  }

  std::vector<double> nh(nc);
  for (int i = 0; i < nc; ++i)
    nh[i] = mob * (n[i][0] * lap[0][i] + n[i][1] * lap[1][i] +
                   n[i][2] * lap[2][i]);

  auto phi1 = [](double z) {
    return std::fabs(z) < 1e-12 ? 1.0 : std::expm1(z) / z;
  };
  std::vector<Vec3> out(nc);
  {
    std::vector<double> gcomp(nc);
    std::vector<Cplx> ghat(nk), acc(nk);
    std::array<std::vector<double>, 3> upd;
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < nc; ++i) gcomp[i] = -nh[i] * n[i][c];
      sp.forward(gcomp, ghat);
      for (int t = 0; t < nk; ++t) {
        const double z = -mob * sp.k2[t] * dt;
        acc[t] = std::exp(z) * nhat[c][t] + dt * phi1(z) * ghat[t];
      }
      sp.backward(acc, upd[c]);
    }
    for (int i = 0; i < nc; ++i)
      out[i] = normalized(Vec3{upd[0][i], upd[1][i], upd[2][i]});
  }
  return out;
}

LimitRow run_periodic_splay(double de, const FlowParams& p,
                            const LeslieCoefficients& lc) {
  const GridShape g{64, 4, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
  const double t_end = 0.5;
  const double dt = de / 40.0;
  const long nsteps = std::lround(t_end / dt);
  const double theta0 = 0.1;

  FlowParams pp = p;
  pp.de = de;
  pp.eps = de;

  FieldState s;
  s.grid = g;
  const int nc = g.nx * g.ny;
  s.q.resize(nc);
  s.b.resize(nc);
  s.vx.assign(nc, 0.0);
  s.vy.assign(nc, 0.0);
  std::vector<Vec3> nel(nc), prev(nc);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const int c = ix + g.nx * iy;
      const double th = theta0 * std::sin(2.0 * std::numbers::pi * ix / g.nx);
      const Vec3 n{std::cos(th), std::sin(th), 0.0};
      s.q[c] = uniaxial(lc.s2, n);
      s.b[c] = uniaxial(lc.eta, n);
      nel[c] = prev[c] = n;
    }

  detail::Spectral2D& sp = detail::spectral_for(g);
  const double k_f = ericksen_coefficient(pp.alpha_ms, pp.g_const);

  LimitRow row{};
  row.de = de;
  for (long k = 0; k < nsteps; ++k) {
    step_coupled(s, pp, dt);
    nel = el_field_step(nel, sp, k_f, lc.gamma1, dt);
    for (int c = 0; c < nc; ++c) {
      const Vec3 d = extract_director(s.q[c], prev[c]);
      prev[c] = d;
      row.director_err = std::max(row.director_err, line_angle(d, nel[c]));
      row.biaxiality = std::max(row.biaxiality, biaxiality_of(s.q[c]));
      row.manifold_dist =
          std::max(row.manifold_dist, manifold_distance(s.q[c], d, lc.s2));
    }
  }
  double s2e = 0;
  for (int c = 0; c < nc; ++c)
    s2e = std::max(s2e, std::fabs(1.5 * eig(s.q[c]).lambda[0] - lc.s2));
  row.s2_err = s2e;
  return row;
}

}  // namespace

LimitTable limit_study(const std::vector<double>& de_list, LimitScenario sc,
                       const FlowParams& p) {
  p.validate();
  if (de_list.empty())
    throw std::invalid_argument("limit study needs at least one De value");
  for (size_t i = 0; i < de_list.size(); ++i) {
    if (!(de_list[i] > 0))
      throw std::invalid_argument("De values must be positive");
    if (i > 0 && !(de_list[i] < de_list[i - 1]))
      throw std::invalid_argument("De values must be strictly decreasing");
  }
  const LeslieCoefficients lc = leslie_coefficients(p.alpha_ms);

  LimitTable table{};
  for (double de : de_list) {
    LimitRow row = sc == LimitScenario::HomogeneousShear
                       ? run_homogeneous_shear(de, p, lc)
                       : run_periodic_splay(de, p, lc);
    if (!table.rows.empty()) {
      const LimitRow& prev = table.rows.back();
      row.order = std::log(prev.director_err / row.director_err) /
                  std::log(prev.de / row.de);
    }
    table.rows.push_back(row);
  }
  double num = 0, den = 0;
  for (const LimitRow& r : table.rows) {
    num += r.de * r.manifold_dist;
    den += r.de * r.de;
  }
  table.fitted_c = den > 0 ? num / den : 0.0;
  return table;
}

}  // namespace qtensor
