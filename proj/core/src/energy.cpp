#include <cmath>
#include <vector>

#include "field_detail.hpp"
#include "spectral_detail.hpp"

namespace qtensor {

namespace {

double frob2(const Mat3& a) {
  double s = 0;
  for (int i = 0; i < 9; ++i) s += a.a[i] * a.a[i];
  return s;
}

double ddot_mat(const Mat3& a, const Mat3& b) {
  double s = 0;
  for (int i = 0; i < 9; ++i) s += a.a[i] * b.a[i];
  return s;
}

}  // namespace

EnergyReport energy_report(const FieldState& s, const FlowParams& p) {
  using detail::Cplx;
  p.validate();
  detail::Spectral2D& sp = detail::spectral_for(s.grid);
  const int nc = sp.cells();
  const int nk = sp.nk();
  const double de = p.de, re = p.re, gam = p.gamma_solvent, eps = p.eps;
  const double alpha = p.alpha_ms, gc = p.g_const;
  const bool with_elastic = eps > 0;
  const bool with_n = eps > 0 && (p.gamma_par > 0 || p.gamma_perp > 0);
  const double da = (s.grid.lx / s.grid.nx) * (s.grid.ly / s.grid.ny);

  detail::FieldMoments fm = detail::solve_field(s.q, s.b, with_n);

  std::vector<SymTraceless3> dxq(nc), dyq(nc), lapq(nc);
  {
    std::vector<Cplx> qhat, work(nk);
    std::vector<double> out;
    for (int c = 0; c < 5; ++c) {
      sp.forward(detail::comp_of(s.q, c), qhat);
      for (int t = 0; t < nk; ++t)
        work[t] = qhat[t] * Cplx(0.0, sp.kx[t % sp.nkx]);
      sp.backward(work, out);
      detail::set_comp(dxq, c, out);
      for (int t = 0; t < nk; ++t)
        work[t] = qhat[t] * Cplx(0.0, sp.ky[t / sp.nkx]);
      sp.backward(work, out);
      detail::set_comp(dyq, c, out);
      if (with_elastic) {
        for (int t = 0; t < nk; ++t) work[t] = -sp.k2[t] * qhat[t];
        sp.backward(work, out);
        detail::set_comp(lapq, c, out);
      }
    }
  }

  std::vector<double> dvxdx, dvxdy, dvydx, dvydy;
  {
    std::vector<Cplx> vh, work(nk);
    sp.forward(s.vx, vh);
    for (int t = 0; t < nk; ++t) work[t] = vh[t] * Cplx(0.0, sp.kx[t % sp.nkx]);
    sp.backward(work, dvxdx);
    for (int t = 0; t < nk; ++t) work[t] = vh[t] * Cplx(0.0, sp.ky[t / sp.nkx]);
    sp.backward(work, dvxdy);
    sp.forward(s.vy, vh);
    for (int t = 0; t < nk; ++t) work[t] = vh[t] * Cplx(0.0, sp.kx[t % sp.nkx]);
    sp.backward(work, dvydx);
    for (int t = 0; t < nk; ++t) work[t] = vh[t] * Cplx(0.0, sp.ky[t / sp.nkx]);
    sp.backward(work, dvydy);
  }

  std::vector<SymTraceless3> e_field(nc);
  for (int c = 0; c < nc; ++c) {
    SymTraceless3 qe = s.q[c];
    if (with_elastic) qe += (0.5 * gc * eps) * lapq[c];
    e_field[c] = fm.b[c] - alpha * qe;
  }
  std::vector<SymTraceless3> nfield;
  if (with_n)
    nfield =
        detail::n_apply_with_moments(e_field, s.q, fm.m4, fm.m6, p, s.grid);

  EnergyReport rep{};
  rep.min_margin = 1.0;
  double grad_q2 = 0, trans = 0;
  for (int c = 0; c < nc; ++c) {
    const double v2 = s.vx[c] * s.vx[c] + s.vy[c] * s.vy[c];
    rep.kinetic += 0.5 * v2 * da;
    rep.max_speed = std::max(rep.max_speed, std::sqrt(v2));

    const Mat3 qm = s.q[c].matrix();
    rep.bulk += (-fm.ln_z[c] + ddot(s.q[c], fm.b[c].matrix()) -
                 0.5 * alpha * frob2(qm)) *
                da;
    grad_q2 += (frob2(dxq[c].matrix()) + frob2(dyq[c].matrix())) * da;

    Mat3 kap = Mat3::zero();
    kap(0, 0) = dvxdx[c];
    kap(0, 1) = dvxdy[c];
    kap(1, 0) = dvydx[c];
    kap(1, 1) = dvydy[c];
    rep.diss_viscous += (gam / re) * frob2(kap) * da;
    const Mat3 dmat = 0.5 * (kap + transpose(kap));
    rep.diss_closure += ((1.0 - gam) / (2.0 * re)) *
                        ddot_mat(contract42(fm.m4[c], dmat), dmat) * da;

    const Mat3 em = e_field[c].matrix();
    rep.diss_rotational +=
        (4.0 * (1.0 - gam) / (re * de * de)) *
        ddot_mat(mq_apply(s.q[c], fm.m4[c], em), em) * da;
    if (with_n) trans += ddot(e_field[c], nfield[c].matrix()) * da;

    rep.min_margin = std::min(rep.min_margin, check_admissible(s.q[c]).margin);
  }
  rep.elastic = 0.25 * alpha * gc * eps * grad_q2;
  rep.diss_translational = -(eps * (1.0 - gam) / (re * de * de)) * trans;
  rep.total = rep.kinetic + ((1.0 - gam) / (re * de)) * (rep.bulk + rep.elastic);
  return rep;
}

}  // namespace qtensor
