#pragma once

#include <stdexcept>
#include <vector>

#include "qtensor/quadrature.hpp"

namespace qtensor {

struct SubCritical : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A_k(eta) = int_0^1 x^k exp(eta x^2) dx, k in {0,2,4,6}, |eta| <= 500.
// Adaptive Gauss-Kronrod, error <= max(1e-13, 1e-14*|A_k|).
double ak(int k, double eta);

// Residual of the uniaxial self-consistency equation eta = alpha*S2(eta),
// written as 3 e^eta / A0 - (3 + 2 eta + 4 eta^2 / alpha).  eta = 0 is
// always a root.
double eta_residual(double eta, double alpha);

struct BranchRoot {
  double eta;
  double a0, a2, a4;
  double s2, s4;
};

// roots[0] is always the isotropic root eta = 0; nematic roots follow in
// descending eta (eta1 >= eta2 when present).
struct EquilibriumBranch {
  double alpha;
  std::vector<BranchRoot> roots;
};

// Sign-bracketing scan over eta (step 1e-2, covering negative eta so the
// lower branch is found past the spinodal), refined by bisection to 1e-12.
// Valid for alpha in (0, 100].
EquilibriumBranch solve_branches(double alpha);

struct CriticalPoint {
  double alpha_star;
  double eta_star;
};

// Smallest alpha with a nematic root: residual and its eta-derivative
// vanish simultaneously (2-d Newton seeded from a scan; both residuals
// <= 1e-10).  Computed once per process.
const CriticalPoint& critical_alpha();

struct OrderParams {
  double s2, s4;
};

// S2 = (3 A2 - A0)/(2 A0), S4 = (35 A4 - 30 A2 + 3 A0)/(8 A0)
OrderParams order_parameters(double eta);

// Closed uniaxial fourth moment: s4 nnnn + (s2-s4)/7 * sym(d nn)
// + (s4/35 - 2 s2/21 + 1/15) * sym(d d).
Sym4Moment uniaxial_m4(double s2, double s4, const Vec3& n);

// Uniaxial equilibrium state at coupling alpha along director n.
struct EquilibriumData {
  double alpha, eta, s2, s4;
  Vec3 n;
  SymTraceless3 q0;  // S2 (nn - I/3)
  SymTraceless3 b0;  // eta (nn - I/3)
  Sym4Moment m4;     // closed uniaxial form, cross-checked against quadrature
  Sym6Moment m6;     // quadrature moments at b0
  double z;          // partition function at b0
};

// Takes eta = eta1 (the largest root).  Throws SubCritical for
// alpha <= alpha_star.
EquilibriumData equilibrium_data(double alpha, const Vec3& n);

}  // namespace qtensor
