#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include "qtensor/dynamics.hpp"
#include "qtensor/equilibria.hpp"
#include "spectral_detail.hpp"

using namespace qtensor;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

GridShape square(int n) { return {n, n, kTau, kTau}; }

// band-limited random field: a handful of low modes per component
std::vector<SymTraceless3> smooth_field(const GridShape& g, std::mt19937& rng,
                                        double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::uniform_real_distribution<double> ph(0.0, kTau);
  std::vector<SymTraceless3> f(static_cast<size_t>(g.nx) * g.ny);
  for (int c = 0; c < 5; ++c) {
    double a1 = u(rng), a2 = u(rng), p1 = ph(rng), p2 = ph(rng);
    for (int iy = 0; iy < g.ny; ++iy) {
      double y = g.ly * iy / g.ny;
      for (int ix = 0; ix < g.nx; ++ix) {
        double x = g.lx * ix / g.nx;
        f[ix + g.nx * iy].c[c] = a1 * std::sin(kTau * x / g.lx + p1) +
                                 a2 * std::cos(kTau * (x / g.lx + 2.0 * y / g.ly) + p2);
      }
    }
  }
  return f;
}

double max_abs_diff(const std::vector<SymTraceless3>& a,
                    const std::vector<SymTraceless3>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, norm(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("coupled") {

TEST_CASE("translational operator vanishes on constant fields") {
  GridShape g{16, 8, kTau, kTau};
  FlowParams p;
  p.gamma_par = 0.8;
  p.gamma_perp = 0.3;
  std::vector<SymTraceless3> a(g.nx * g.ny, uniaxial(0.2, {0, 1, 0}));
  std::vector<SymTraceless3> q(g.nx * g.ny, uniaxial(0.45, {1, 0, 0}));
  auto out = n_operator_apply(a, q, p, g);
  for (const auto& v : out) CHECK(norm(v) < 1e-12);
}

TEST_CASE("translational operator reduces to a frozen-coefficient form on uniform Q") {
  // gamma_par == gamma_perp and constant Q: N(A) = gbar (M4 : lap A
  // - (I/3) Q : lap A) cell by cell
  GridShape g{24, 12, kTau, 1.5 * kTau};
  const int nc = g.nx * g.ny;
  FlowParams p;
  p.gamma_par = p.gamma_perp = 0.7;
  SymTraceless3 q0 = uniaxial(0.5, normalized(Vec3{1.0, 0.4, 0.2}));
  BinghamResult r = solve_bq(q0, default_rule());
  std::vector<SymTraceless3> q(nc, q0);

  std::mt19937 rng(11);
  std::vector<SymTraceless3> a = smooth_field(g, rng, 0.1);
  auto out = n_operator_apply(a, q, p, g);

  detail::Spectral2D& sp = detail::spectral_for(g);
  std::vector<SymTraceless3> lap(nc);
  for (int c = 0; c < 5; ++c)
    detail::set_comp(lap, c, sp.laplacian(detail::comp_of(a, c)));

  double scale = 0;
  for (int i = 0; i < nc; ++i) scale = std::max(scale, norm(lap[i]));
  for (int i = 0; i < nc; ++i) {
    Mat3 lm = lap[i].matrix();
    Mat3 expect = p.gamma_perp * (contract42(r.moments.m4, lm) -
                                  (ddot(q0, lm) / 3.0) * Mat3::identity());
    CHECK(norm(out[i] - SymTraceless3::from_matrix(expect)) < 1e-10 * scale);
  }
}

TEST_CASE("translational operator is dissipative") {
  GridShape g{24, 12, kTau, kTau};
  const int nc = g.nx * g.ny;
  std::mt19937 rng(12);
  std::vector<SymTraceless3> a = smooth_field(g, rng, 0.15);
  // admissible Q field with a slowly varying director
  std::vector<SymTraceless3> q(nc);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double th = 0.4 * std::sin(kTau * ix / g.nx) +
                  0.2 * std::cos(kTau * iy / g.ny);
      q[ix + g.nx * iy] =
          uniaxial(0.45, {std::cos(th), std::sin(th), 0.0});
    }

  for (bool variant : {false, true}) {
    FlowParams p;
    p.gamma_par = 0.8;
    p.gamma_perp = 0.3;
    p.n_operator_trace_variant = variant;
    auto out = n_operator_apply(a, q, p, g);
    double sum = 0, scale = 0;
    for (int i = 0; i < nc; ++i) {
      sum += ddot(a[i], out[i]);
      scale = std::max(scale, std::fabs(ddot(a[i], out[i])));
    }
    sum *= (g.lx / g.nx) * (g.ly / g.ny);
    CHECK(sum <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("both trace conventions agree on traceless arguments") {
  GridShape g{16, 16, kTau, kTau};
  FlowParams p;
  p.gamma_par = 0.6;
  p.gamma_perp = 0.6;
  std::mt19937 rng(13);
  std::vector<SymTraceless3> a = smooth_field(g, rng, 0.1);
  std::vector<SymTraceless3> q(g.nx * g.ny, uniaxial(0.4, {1, 0, 0}));
  FlowParams pv = p;
  pv.n_operator_trace_variant = true;
  auto o1 = n_operator_apply(a, q, p, g);
  auto o2 = n_operator_apply(a, q, pv, g);
  CHECK(max_abs_diff(o1, o2) < 1e-14);
}

TEST_CASE("uniform equilibrium is a fixed point of the coupled step") {
  GridShape g{16, 8, kTau, kTau};
  FlowParams p;
  p.alpha_ms = 7.0;
  p.eps = 0.05;
  FieldState s = uniform_equilibrium_state(g, p);
  std::vector<SymTraceless3> q0 = s.q;
  for (int k = 0; k < 5; ++k) step_coupled(s, p, 1e-3);
  CHECK(max_abs_diff(s.q, q0) < 5e-10);
  double vmax = 0;
  for (int i = 0; i < s.cells(); ++i)
    vmax = std::max({vmax, std::fabs(s.vx[i]), std::fabs(s.vy[i])});
  CHECK(vmax < 1e-12);
  CHECK(s.t == doctest::Approx(5e-3).epsilon(1e-12));
}

TEST_CASE("single-mode vortex decays at the viscous rate when the solvent dominates") {
  // gamma -> 1 shuts off the orientational stress; the cellular vortex
  // stays a single Fourier mode and the exponential integrator reproduces
  // exp(-2 nu t) per step to roundoff
  GridShape g = square(32);
  FlowParams p;
  p.alpha_ms = 7.0;
  p.gamma_solvent = 1.0 - 1e-9;
  p.re = 1.0;
  p.eps = 0.0;
  FieldState s = uniform_equilibrium_state(g, p);
  const double v0 = 0.05;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double x = kTau * ix / g.nx, y = kTau * iy / g.ny;
      s.vx[ix + g.nx * iy] = v0 * std::sin(x) * std::cos(y);
      s.vy[ix + g.nx * iy] = -v0 * std::cos(x) * std::sin(y);
    }
  const double dt = 1e-3;
  const int steps = 200;
  for (int k = 0; k < steps; ++k) step_coupled(s, p, dt);
  const double nu = p.gamma_solvent / p.re;
  const double decay = std::exp(-2.0 * nu * steps * dt);
  double err = 0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double x = kTau * ix / g.nx, y = kTau * iy / g.ny;
      err = std::max(err, std::fabs(s.vx[ix + g.nx * iy] -
                                    decay * v0 * std::sin(x) * std::cos(y)));
      err = std::max(err, std::fabs(s.vy[ix + g.nx * iy] +
                                    decay * v0 * std::cos(x) * std::sin(y)));
    }
  CHECK(err < 1e-6 * v0);
}

TEST_CASE("energy decays monotonically and the balance closes") {
  GridShape g = square(32);
  FlowParams p;
  p.alpha_ms = 7.0;
  p.eps = 0.05;
  FieldState s = perturbed_equilibrium_state(g, p, 7);
  const double dt = 1e-3;

  EnergyReport prev = energy_report(s, p);
  CHECK(prev.min_margin > 0.02);
  double worst_rise = -1e300;
  for (int k = 0; k < 100; ++k) {
    step_coupled(s, p, dt);
    EnergyReport rep = energy_report(s, p);
    worst_rise = std::max(worst_rise,
                          (rep.total - prev.total) / std::fabs(prev.total));
    CHECK(rep.min_margin > 0.02);
    prev = rep;
  }
  CHECK(worst_rise <= 1e-9);

  // one-step balance: -dE/dt against the dissipation channels
  EnergyReport r0 = energy_report(s, p);
  double e0 = r0.total;
  double diss = r0.diss_viscous + r0.diss_closure + r0.diss_rotational +
                r0.diss_translational;
  CHECK(r0.diss_viscous >= 0);
  CHECK(r0.diss_closure >= 0);
  CHECK(r0.diss_rotational >= -1e-12 * diss);
  step_coupled(s, p, dt);
  double e1 = energy_report(s, p).total;
  CHECK(std::fabs((e0 - e1) / dt - diss) < 0.025 * diss);
}

TEST_CASE("velocity stays divergence-free to roundoff") {
  GridShape g = square(32);
  FlowParams p;
  p.alpha_ms = 7.0;
  p.eps = 0.05;
  FieldState s = perturbed_equilibrium_state(g, p, 21);
  for (int k = 0; k < 20; ++k) step_coupled(s, p, 1e-3);
  detail::Spectral2D& sp = detail::spectral_for(g);
  std::vector<double> div = sp.deriv_x(s.vx);
  std::vector<double> dy = sp.deriv_y(s.vy);
  double m = 0;
  for (int i = 0; i < s.cells(); ++i) m = std::max(m, std::fabs(div[i] + dy[i]));
  CHECK(m < 1e-12);
}

TEST_CASE("identical seeds give bitwise identical trajectories") {
  GridShape g{16, 16, kTau, kTau};
  FlowParams p;
  p.alpha_ms = 7.0;
  p.eps = 0.05;
  FieldState s1 = perturbed_equilibrium_state(g, p, 99);
  FieldState s2 = perturbed_equilibrium_state(g, p, 99);
  for (int k = 0; k < 20; ++k) {
    step_coupled(s1, p, 1e-3);
    step_coupled(s2, p, 1e-3);
  }
  CHECK(std::memcmp(s1.q.data(), s2.q.data(),
                    s1.q.size() * sizeof(SymTraceless3)) == 0);
  CHECK(std::memcmp(s1.vx.data(), s2.vx.data(),
                    s1.vx.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(s1.vy.data(), s2.vy.data(),
                    s1.vy.size() * sizeof(double)) == 0);
}

TEST_CASE("step reports CFL violations, admissibility loss, and bad arguments") {
  GridShape g{16, 8, kTau, kTau};
  FlowParams p;
  p.alpha_ms = 7.0;
  FieldState s = uniform_equilibrium_state(g, p);

  FieldState fast = s;
  for (double& v : fast.vx) v = 1000.0;
  CHECK_THROWS_AS(step_coupled(fast, p, 1e-3), CFLViolation);

  FieldState bad = s;
  bad.q[5] = uniaxial(1.02, {0, 0, 1});
  CHECK_THROWS_AS(step_coupled(bad, p, 1e-3), AdmissibilityLost);

  CHECK_THROWS_AS(step_coupled(s, p, 0.0), std::invalid_argument);

  FieldState shrunk = s;
  shrunk.vx.pop_back();
  CHECK_THROWS_AS(step_coupled(shrunk, p, 1e-3), std::invalid_argument);

  FieldState tiny;
  tiny.grid = {2, 2, 1.0, 1.0};
  tiny.q.resize(4);
  tiny.vx.resize(4);
  tiny.vy.resize(4);
  CHECK_THROWS_AS(step_coupled(tiny, p, 1e-3), std::invalid_argument);
}

TEST_CASE("energy report of the isotropic rest state") {
  GridShape g{16, 16, kTau, kTau};
  FlowParams p;
  p.alpha_ms = 7.0;
  p.eps = 0.05;
  FieldState s;
  s.grid = g;
  s.q.resize(g.nx * g.ny);
  s.vx.assign(g.nx * g.ny, 0.0);
  s.vy.assign(g.nx * g.ny, 0.0);
  EnergyReport rep = energy_report(s, p);
  const double area = g.lx * g.ly;
  CHECK(rep.kinetic == 0.0);
  CHECK(std::fabs(rep.elastic) < 1e-14);
  CHECK(std::fabs(rep.bulk + std::log(4.0 * std::numbers::pi) * area) <
        1e-10 * area);
  CHECK(rep.min_margin == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(rep.max_speed == 0.0);
  CHECK(rep.diss_viscous == 0.0);
}

TEST_CASE("homogeneous shear limit study tends to the director equation") {
  FlowParams p;
  p.alpha_ms = 7.0;
  LimitTable t = limit_study({0.1, 0.05}, LimitScenario::HomogeneousShear, p);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].order == 0.0);
  CHECK(std::isfinite(t.rows[1].order));
  for (const LimitRow& row : t.rows) {
    CHECK(row.director_err < 0.1);
    CHECK(row.manifold_dist < 1.0 * row.de);
    CHECK(row.s2_err < 5.0 * row.de);
    CHECK(row.biaxiality < 0.1);
  }
  // halving De roughly halves the defect
  CHECK(t.rows[1].director_err < 0.75 * t.rows[0].director_err);
  CHECK(t.fitted_c > 0.0);

  CHECK_THROWS_AS(
      limit_study({0.05, 0.1}, LimitScenario::HomogeneousShear, p),
      std::invalid_argument);
  CHECK_THROWS_AS(limit_study({}, LimitScenario::HomogeneousShear, p),
                  std::invalid_argument);
}

TEST_CASE("periodic splay limit study stays near the director manifold") {
  FlowParams p;
  p.alpha_ms = 7.0;
  LimitTable t = limit_study({0.1}, LimitScenario::Periodic1DSplay, p);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].director_err < 0.05);
  CHECK(t.rows[0].s2_err < 5.0 * t.rows[0].de);
  CHECK(t.rows[0].manifold_dist < 1.0);
}

}  // TEST_SUITE
