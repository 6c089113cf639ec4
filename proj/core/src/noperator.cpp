#include <cmath>
#include <stdexcept>

#include "bingham_detail.hpp"
#include "field_detail.hpp"
#include "spectral_detail.hpp"

namespace qtensor {

namespace detail {

std::vector<SymTraceless3> n_apply_with_moments(
    const std::vector<SymTraceless3>& a_field,
    const std::vector<SymTraceless3>& q_field,
    const std::vector<Sym4Moment>& m4s, const std::vector<Sym6Moment>& m6s,
    const FlowParams& p, const GridShape& g) {
  Spectral2D& sp = spectral_for(g);
  const int nc = sp.cells();
  const double gp = p.gamma_perp;
  const double dg = p.gamma_par - p.gamma_perp;
  const bool need6 = dg != 0.0;

  std::vector<SymTraceless3> dxa(nc), dya(nc);
  for (int c = 0; c < 5; ++c) {
    std::vector<double> f = comp_of(a_field, c);
    set_comp(dxa, c, sp.deriv_x(f));
    set_comp(dya, c, sp.deriv_y(f));
  }

  // symmetric flux components xx yy zz xy xz yz per direction
  std::array<std::vector<double>, 6> fx, fy;
  for (auto& v : fx) v.resize(nc);
  for (auto& v : fy) v.resize(nc);
  constexpr int ci[6] = {0, 1, 2, 0, 0, 1};
  constexpr int cj[6] = {0, 1, 2, 1, 2, 2};

#ifdef QTENSOR_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < nc; ++c) {
    Mat3 gx = dxa[c].matrix();
    Mat3 gy = dya[c].matrix();
    Mat3 m4gx = contract42(m4s[c], gx);
    Mat3 m4gy = contract42(m4s[c], gy);
    // T:G with T = Q as written; the variant uses the full second moment
    // Q + I/3, which only adds tr(G)/3 and so coincides on traceless A.
    double tx = ddot(q_field[c], gx);
    double ty = ddot(q_field[c], gy);
    if (p.n_operator_trace_variant) {
      tx += trace(gx) / 3.0;
      ty += trace(gy) / 3.0;
    }
    Sym4Moment c6x, c6y;
    if (need6) {
      c6x = contract62(m6s[c], gx);
      c6y = contract62(m6s[c], gy);
    }
    for (int s = 0; s < 6; ++s) {
      int a = ci[s], b = cj[s];
      double del = a == b ? 1.0 / 3.0 : 0.0;
      double vx = gp * (m4gx(a, b) - del * tx);
      double vy = gp * (m4gy(a, b) - del * ty);
      if (need6) {
        vx += dg * (c6x(a, b, 0, 0) + c6y(a, b, 0, 1) -
                    del * (m4gx(0, 0) + m4gy(0, 1)));
        vy += dg * (c6x(a, b, 1, 0) + c6y(a, b, 1, 1) -
                    del * (m4gx(1, 0) + m4gy(1, 1)));
      }
      fx[s][c] = vx;
      fy[s][c] = vy;
    }
  }

  std::array<std::vector<double>, 6> div;
  for (int s = 0; s < 6; ++s) {
    div[s] = sp.deriv_x(fx[s]);
    std::vector<double> d2 = sp.deriv_y(fy[s]);
    for (int c = 0; c < nc; ++c) div[s][c] += d2[c];
  }

  std::vector<SymTraceless3> out(nc);
  double scale = 0;
  for (int s = 0; s < 6; ++s)
    for (int c = 0; c < nc; ++c) scale = std::max(scale, std::fabs(div[s][c]));
  for (int c = 0; c < nc; ++c) {
    double tr = div[0][c] + div[1][c] + div[2][c];
    if (std::fabs(tr) > 1e-10 * std::max(1.0, scale))
      throw std::logic_error("translational operator lost tracelessness");
    Mat3 m;
    for (int s = 0; s < 6; ++s) {
      m(ci[s], cj[s]) = div[s][c];
      m(cj[s], ci[s]) = div[s][c];
    }
    out[c] = SymTraceless3::from_matrix(m);
  }
  return out;
}

}  // namespace detail

std::vector<SymTraceless3> n_operator_apply(
    const std::vector<SymTraceless3>& a_field,
    const std::vector<SymTraceless3>& q_field, const FlowParams& p,
    const GridShape& g) {
  p.validate();
  const size_t nc = static_cast<size_t>(g.nx) * g.ny;
  if (a_field.size() != nc || q_field.size() != nc)
    throw std::invalid_argument("field size does not match the grid");
  detail::FieldMoments fm = detail::solve_field(
      q_field, {}, p.gamma_par != p.gamma_perp);
  return detail::n_apply_with_moments(a_field, q_field, fm.m4, fm.m6, p, g);
}

}  // namespace qtensor
