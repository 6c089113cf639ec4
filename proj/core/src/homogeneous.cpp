#include <cmath>
#include <stdexcept>

#include "qtensor/dynamics.hpp"

namespace qtensor {

void FlowParams::validate() const {
  if (!(de > 0)) throw std::invalid_argument("de must be positive");
  if (!(re > 0)) throw std::invalid_argument("re must be positive");
  if (!(gamma_solvent > 0) || !(gamma_solvent < 1))
    throw std::invalid_argument("gamma_solvent must lie in (0, 1)");
  if (!(eps >= 0)) throw std::invalid_argument("eps must be non-negative");
  if (!(alpha_ms > 0)) throw std::invalid_argument("alpha_ms must be positive");
  if (!(g_const > 0)) throw std::invalid_argument("g_const must be positive");
  if (!(gamma_par >= 0) || !(gamma_perp >= 0))
    throw std::invalid_argument("diffusion coefficients must be >= 0");
  if (de_eps_consistent && std::fabs(de - eps) > 1e-12 * std::fabs(de))
    throw std::invalid_argument("de_eps_consistent requires de == eps");
}

namespace {

SymTraceless3 rhs_from(const SymTraceless3& q, const Sym4Moment& m4,
                       const Mat3& kappa, const FlowParams& p) {
  Mat3 relax = mq_apply(q, m4, q.matrix());
  Mat3 flow = mq_apply(q, m4, transpose(kappa));
  Mat3 total =
      (1.0 / p.de) * (-6.0 * q.matrix() +
                      2.0 * p.alpha_ms * (relax + transpose(relax))) +
      (flow + transpose(flow));
  return SymTraceless3::from_matrix(total);
}

}  // namespace

SymTraceless3 rhs_homogeneous(const SymTraceless3& q, const Mat3& kappa,
                              const FlowParams& p) {
  p.validate();
  BinghamResult r = solve_bq(q, default_rule());
  return rhs_from(q, r.moments.m4, kappa, p);
}

SymTraceless3 step_homogeneous(const SymTraceless3& q, const Mat3& kappa,
                               const FlowParams& p, double dt) {
  p.validate();
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  try {
    SymTraceless3 k1 = rhs_homogeneous(q, kappa, p);
    SymTraceless3 k2 = rhs_homogeneous(q + (0.5 * dt) * k1, kappa, p);
    SymTraceless3 k3 = rhs_homogeneous(q + (0.5 * dt) * k2, kappa, p);
    SymTraceless3 k4 = rhs_homogeneous(q + dt * k3, kappa, p);
    SymTraceless3 out =
        q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!check_admissible(out).admissible)
      throw AdmissibilityLost("step left the admissible set");
    return out;
  } catch (const NonAdmissible& e) {
    throw AdmissibilityLost(e.what());
  }
}

double homogeneous_dt_bound(const SymTraceless3& q, const Mat3& kappa,
                            const FlowParams& p) {
  p.validate();
  // finite-difference Jacobian in the orthonormal coordinates
  const auto& basis = sym_basis();
  double h = 1e-6 * std::max(1.0, norm(q));
  double jac[5][5];
  for (int j = 0; j < 5; ++j) {
    SymTraceless3 qp = q + h * basis[j];
    SymTraceless3 qm = q + (-h) * basis[j];
    auto rp = basis_coords(rhs_homogeneous(qp, kappa, p));
    auto rm = basis_coords(rhs_homogeneous(qm, kappa, p));
    for (int i = 0; i < 5; ++i) jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
  }
  // spectral radius estimate by power iteration with growth-rate readout
  double x[5] = {1.0, 0.7, -0.5, 0.3, -0.2};
  double rho = 0;
  for (int it = 0; it < 120; ++it) {
    double y[5] = {};
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) y[i] += jac[i][j] * x[j];
    double ny = 0;
    for (double v : y) ny += v * v;
    ny = std::sqrt(ny);
    if (ny < 1e-300) break;
    rho = ny;
    for (int i = 0; i < 5; ++i) x[i] = y[i] / ny;
  }
  if (rho <= 0) return 1.0;
  return 2.5 / rho;  // inside the RK4 real-axis stability interval
}

}  // namespace qtensor
