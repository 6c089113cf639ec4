#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "qtensor/equilibria.hpp"
#include "qtensor/quadrature.hpp"

#include "bingham_detail.hpp"
#include "field_detail.hpp"
#include "spectral_detail.hpp"

namespace qtensor {

namespace detail {

namespace {

void check_state(const FieldState& s) {
  const size_t nc = static_cast<size_t>(s.grid.nx) * s.grid.ny;
  if (s.grid.nx < 4 || s.grid.ny < 4 || !(s.grid.lx > 0) || !(s.grid.ly > 0))
    throw std::invalid_argument("grid must be at least 4x4 with positive box");
  if (s.q.size() != nc || s.vx.size() != nc || s.vy.size() != nc)
    throw std::invalid_argument("field sizes do not match the grid");
}

}  // namespace

FieldMoments solve_field(const std::vector<SymTraceless3>& q,
                         const std::vector<SymTraceless3>& warm,
                         bool want_m6) {
  const int nc = static_cast<int>(q.size());
  const int level = default_rule().level;
  FieldMoments fm;
  fm.b.resize(nc);
  fm.m4.resize(nc);
  fm.ln_z.resize(nc);
  if (want_m6) fm.m6.resize(nc);
  const bool use_warm = warm.size() == q.size();
  std::exception_ptr err;
  long iter_sum = 0;

#ifdef QTENSOR_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(+ : iter_sum)
#endif
  for (int c = 0; c < nc; ++c) {
    if (err) continue;
    try {
      if (!check_admissible(q[c]).admissible)
        throw AdmissibilityLost("cell " + std::to_string(c) +
                                " left the admissible set");
      const SymTraceless3* w = use_warm ? &warm[c] : nullptr;
      CellSolve cs = solve_cell(q[c], level, w, 2.5e-12, 100);
      fm.b[c] = cs.b;
      fm.m4[c] = cs.m4;
      fm.ln_z[c] = cs.ln_z;
      iter_sum += cs.iterations;
      if (want_m6) fm.m6[c] = cell_m6(cs.b, level);
    } catch (...) {
#ifdef QTENSOR_HAVE_OPENMP
#pragma omp critical
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  fm.iterations_avg = nc > 0 ? double(iter_sum) / nc : 0.0;
  return fm;
}

}  // namespace detail

FieldState uniform_equilibrium_state(const GridShape& g, const FlowParams& p) {
  p.validate();
  EquilibriumBranch br = solve_branches(p.alpha_ms);
  if (br.roots.size() < 2 || br.roots[1].eta <= 0)
    throw SubCritical("no nematic equilibrium below the critical coupling");
  const double s2 = br.roots[1].s2, eta = br.roots[1].eta;
  FieldState s;
  s.grid = g;
  const size_t nc = static_cast<size_t>(g.nx) * g.ny;
  Vec3 n{1, 0, 0};
  s.q.assign(nc, uniaxial(s2, n));
  s.b.assign(nc, uniaxial(eta, n));
  s.vx.assign(nc, 0.0);
  s.vy.assign(nc, 0.0);
  detail::check_state(s);
  return s;
}

FieldState perturbed_equilibrium_state(const GridShape& g,
                                       const FlowParams& p, unsigned seed) {
  p.validate();
  EquilibriumBranch br = solve_branches(p.alpha_ms);
  if (br.roots.size() < 2 || br.roots[1].eta <= 0)
    throw SubCritical("no nematic equilibrium below the critical coupling");
  const double s2 = br.roots[1].s2, eta = br.roots[1].eta;

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> a1d(0.25, 0.45), a2d(0.15, 0.25);
  std::uniform_real_distribution<double> vad(0.03, 0.07);
  const double a1 = a1d(rng), a2 = a2d(rng), vamp = vad(rng);
  const double p1 = ph(rng), p2 = ph(rng), p3 = ph(rng), p4 = ph(rng),
               p5 = ph(rng);

  FieldState s;
  s.grid = g;
  const size_t nc = static_cast<size_t>(g.nx) * g.ny;
  s.q.resize(nc);
  s.b.resize(nc);
  s.vx.resize(nc);
  s.vy.resize(nc);
  const double kx = 2.0 * std::numbers::pi / g.lx;
  const double ky = 2.0 * std::numbers::pi / g.ly;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.lx * ix / g.nx, y = g.ly * iy / g.ny;
      const size_t c = ix + static_cast<size_t>(g.nx) * iy;
      double th = a1 * std::sin(kx * x + p1) * std::cos(ky * y + p2) +
                  a2 * std::cos(ky * y + p3);
      Vec3 n{std::cos(th), std::sin(th), 0.0};
      s.q[c] = uniaxial(s2, n);
      s.b[c] = uniaxial(eta, n);
      s.vx[c] = vamp * std::sin(kx * x + p4) * std::cos(ky * y + p5);
      s.vy[c] = -vamp * (kx / ky) * std::cos(kx * x + p4) *
                std::sin(ky * y + p5);
    }
  }
  detail::check_state(s);
  return s;
}

double advective_cfl(const FieldState& s, double dt) {
  detail::check_state(s);
  const double dx = s.grid.lx / s.grid.nx, dy = s.grid.ly / s.grid.ny;
  double worst = 0;
  for (int c = 0; c < s.cells(); ++c)
    worst = std::max(worst,
                     std::fabs(s.vx[c]) / dx + std::fabs(s.vy[c]) / dy);
  return worst * dt;
}

double min_admissibility_margin(const FieldState& s) {
  detail::check_state(s);
  double m = 1.0;
  for (const SymTraceless3& q : s.q)
    m = std::min(m, check_admissible(q).margin);
  return m;
}

void step_coupled(FieldState& s, const FlowParams& p, double dt) {
  using detail::Cplx;
  p.validate();
  detail::check_state(s);
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  {
    const double cfl = advective_cfl(s, dt);
    if (cfl > 0.5)
      throw CFLViolation("advective CFL " + std::to_string(cfl) + " > 0.5");
  }

  detail::Spectral2D& sp = detail::spectral_for(s.grid);
  const int nc = sp.cells();
  const int nk = sp.nk();
  const double de = p.de, re = p.re, gam = p.gamma_solvent, eps = p.eps;
  const double alpha = p.alpha_ms, gc = p.g_const;
  const double s_stab = 2.0 * alpha * gc * eps / de;
  const bool with_n = eps > 0 && (p.gamma_par > 0 || p.gamma_perp > 0);
  const bool with_elastic = eps > 0;

  detail::FieldMoments fm;
  try {
    fm = detail::solve_field(s.q, s.b, with_n);
  } catch (const NonAdmissible& e) {
    throw AdmissibilityLost(e.what());
  }

  // spectral derivatives of Q
  std::array<std::vector<Cplx>, 5> qhat;
  std::vector<SymTraceless3> dxq(nc), dyq(nc), lapq(nc), dxlq(nc), dylq(nc);
  {
    std::vector<Cplx> work(nk);
    std::vector<double> out;
    for (int c = 0; c < 5; ++c) {
      sp.forward(detail::comp_of(s.q, c), qhat[c]);
      for (int t = 0; t < nk; ++t)
        work[t] = qhat[c][t] * Cplx(0.0, sp.kx[t % sp.nkx]);
      sp.backward(work, out);
      detail::set_comp(dxq, c, out);
      for (int t = 0; t < nk; ++t)
        work[t] = qhat[c][t] * Cplx(0.0, sp.ky[t / sp.nkx]);
      sp.backward(work, out);
      detail::set_comp(dyq, c, out);
      if (with_elastic) {
        for (int t = 0; t < nk; ++t) work[t] = -sp.k2[t] * qhat[c][t];
        sp.backward(work, out);
        detail::set_comp(lapq, c, out);
        for (int t = 0; t < nk; ++t)
          work[t] = -sp.k2[t] * qhat[c][t] * Cplx(0.0, sp.kx[t % sp.nkx]);
        sp.backward(work, out);
        detail::set_comp(dxlq, c, out);
        for (int t = 0; t < nk; ++t)
          work[t] = -sp.k2[t] * qhat[c][t] * Cplx(0.0, sp.ky[t / sp.nkx]);
        sp.backward(work, out);
        detail::set_comp(dylq, c, out);
      }
    }
  }

  // velocity gradients
  std::vector<Cplx> vxhat, vyhat;
  sp.forward(s.vx, vxhat);
  sp.forward(s.vy, vyhat);
  std::vector<double> dvxdx, dvxdy, dvydx, dvydy;
  {
    std::vector<Cplx> work(nk);
    auto dx_of = [&](const std::vector<Cplx>& h, std::vector<double>& out) {
      for (int t = 0; t < nk; ++t) work[t] = h[t] * Cplx(0.0, sp.kx[t % sp.nkx]);
      sp.backward(work, out);
    };
    auto dy_of = [&](const std::vector<Cplx>& h, std::vector<double>& out) {
      for (int t = 0; t < nk; ++t) work[t] = h[t] * Cplx(0.0, sp.ky[t / sp.nkx]);
      sp.backward(work, out);
    };
    dx_of(vxhat, dvxdx);
    dy_of(vxhat, dvxdy);
    dx_of(vyhat, dvydx);
    dy_of(vyhat, dvydy);
  }

  // per-cell closure nonlinearities
  std::vector<SymTraceless3> rhsq_nl(nc);
  std::vector<double> sc00(nc), sc01(nc), sc11(nc);
  std::vector<double> se00(nc), se01(nc), se10(nc), se11(nc);
  std::vector<double> tvx(nc), tvy(nc);
  const double cv_el = (1.0 - gam) / (de * re);

#ifdef QTENSOR_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < nc; ++c) {
    Mat3 kap = Mat3::zero();
    kap(0, 0) = dvxdx[c];
    kap(0, 1) = dvxdy[c];
    kap(1, 0) = dvydx[c];
    kap(1, 1) = dvydy[c];
    Mat3 dmat = 0.5 * (kap + transpose(kap));

    SymTraceless3 qe = s.q[c];
    if (with_elastic) qe += (0.5 * gc * eps) * lapq[c];
    Mat3 t_rel = mq_apply(s.q[c], fm.m4[c], qe.matrix());
    Mat3 t_flow = mq_apply(s.q[c], fm.m4[c], transpose(kap));

    SymTraceless3 adv = s.vx[c] * dxq[c] + s.vy[c] * dyq[c];
    Mat3 nl = (-adv).matrix() +
              (2.0 * alpha / de) * (t_rel + transpose(t_rel)) +
              (t_flow + transpose(t_flow));
    rhsq_nl[c] = SymTraceless3::from_matrix(nl);

    Mat3 sig_c = contract42(fm.m4[c], dmat);
    sc00[c] = sig_c(0, 0);
    sc01[c] = sig_c(0, 1);
    sc11[c] = sig_c(1, 1);
    Mat3 sig_el = -3.0 * s.q[c].matrix() + 2.0 * alpha * t_rel;
    se00[c] = sig_el(0, 0);
    se01[c] = sig_el(0, 1);
    se10[c] = sig_el(1, 0);
    se11[c] = sig_el(1, 1);

    double qg_x = 0, qg_y = 0;
    if (with_elastic) {
      qg_x = ddot(s.q[c], dxlq[c].matrix());
      qg_y = ddot(s.q[c], dylq[c].matrix());
    }
    tvx[c] = -(s.vx[c] * dvxdx[c] + s.vy[c] * dvxdy[c]) +
             cv_el * 0.5 * gc * alpha * eps * qg_x;
    tvy[c] = -(s.vx[c] * dvydx[c] + s.vy[c] * dvydy[c]) +
             cv_el * 0.5 * gc * alpha * eps * qg_y;
  }

  if (with_n) {
    std::vector<SymTraceless3> e_field(nc);
    for (int c = 0; c < nc; ++c) {
      SymTraceless3 qe = s.q[c] + (0.5 * gc * eps) * lapq[c];
      e_field[c] = fm.b[c] - alpha * qe;
    }
    std::vector<SymTraceless3> nfield = detail::n_apply_with_moments(
        e_field, s.q, fm.m4, fm.m6, p, s.grid);
    for (int c = 0; c < nc; ++c) rhsq_nl[c] += (eps / de) * nfield[c];
  }

  // ETD step for Q: L = -6/De - s_stab k^2, the -6Q/De part of the rhs
  // cancels against the linear correction so F carries only the dealiased
  // nonlinearities and the stabilization shift.
  {
    std::vector<Cplx> fhat(nk), cur(nk);
    std::vector<double> out;
    for (int c = 0; c < 5; ++c) {
      sp.forward(detail::comp_of(rhsq_nl, c), fhat);
      for (int t = 0; t < nk; ++t) {
        Cplx f = sp.keep[t] ? fhat[t] : Cplx(0.0, 0.0);
        f += s_stab * sp.k2[t] * qhat[c][t];
        const double lq = -6.0 / de - s_stab * sp.k2[t];
        const double z = lq * dt;
        const double ez = std::exp(z);
        const double phi1 = std::fabs(z) > 1e-12 ? (ez - 1.0) / z : 1.0;
        cur[t] = ez * qhat[c][t] + dt * phi1 * f;
      }
      sp.backward(cur, out);
      detail::set_comp(s.q, c, out);
    }
  }

  // ETD step for v with spectral divergence of the stresses, then Leray
  // projection
  {
    std::vector<Cplx> c00, c01, c11, e00, e01, e10, e11, tx, ty;
    sp.forward(sc00, c00);
    sp.forward(sc01, c01);
    sp.forward(sc11, c11);
    sp.forward(se00, e00);
    sp.forward(se01, e01);
    sp.forward(se10, e10);
    sp.forward(se11, e11);
    sp.forward(tvx, tx);
    sp.forward(tvy, ty);
    const double cc = (1.0 - gam) / (2.0 * re);
    std::vector<Cplx> vxn(nk), vyn(nk);
    for (int t = 0; t < nk; ++t) {
      const Cplx ikx(0.0, sp.kx[t % sp.nkx]);
      const Cplx iky(0.0, sp.ky[t / sp.nkx]);
      Cplx fx = tx[t] + cc * (ikx * c00[t] + iky * c01[t]) -
                cv_el * (ikx * e00[t] + iky * e10[t]);
      Cplx fy = ty[t] + cc * (ikx * c01[t] + iky * c11[t]) -
                cv_el * (ikx * e01[t] + iky * e11[t]);
      if (!sp.keep[t]) {
        fx = 0.0;
        fy = 0.0;
      }
      const double lv = -(gam / re) * sp.k2[t];
      const double z = lv * dt;
      const double ez = std::exp(z);
      const double phi1 = std::fabs(z) > 1e-12 ? (ez - 1.0) / z : 1.0;
      Cplx nx = ez * vxhat[t] + dt * phi1 * fx;
      Cplx ny = ez * vyhat[t] + dt * phi1 * fy;
      if (sp.k2[t] > 0) {
        const double rkx = sp.kx[t % sp.nkx], rky = sp.ky[t / sp.nkx];
        const Cplx lon = (rkx * nx + rky * ny) / sp.k2[t];
        nx -= rkx * lon;
        ny -= rky * lon;
      }
      vxn[t] = nx;
      vyn[t] = ny;
    }
    sp.backward(vxn, s.vx);
    sp.backward(vyn, s.vy);
  }

  s.b = std::move(fm.b);
  s.t += dt;

  for (const SymTraceless3& q : s.q)
    if (!check_admissible(q).admissible)
      throw AdmissibilityLost("a cell left the admissible set at t = " +
                              std::to_string(s.t));
}

}  // namespace qtensor
