#pragma once

#include <array>

#include "qtensor/equilibria.hpp"

namespace qtensor {

struct LeslieCoefficients {
  double alpha1, alpha2, alpha3, alpha4, alpha5, alpha6;
  double gamma1, gamma2;
  double lambda;  // tumbling parameter -gamma2/gamma1
  // provenance
  double eta, alpha, s2, s4;
};

// Closure-derived Leslie coefficients on the nematic branch eta1(alpha).
// Throws SubCritical for alpha <= alpha_star.
LeslieCoefficients leslie_coefficients(double alpha);

// Same formulas at caller-supplied order parameters (exploration path; no
// branch solve, eta reported as 0).
LeslieCoefficients leslie_from_order_params(double s2, double s4,
                                            double alpha);

// Rotational/irrotational dissipation combinations of the director energy
// law: {alpha5 + alpha6 - gamma2^2/gamma1, alpha1 + gamma2^2/gamma1,
// 1/gamma1}.  Signs are reported, not asserted.
std::array<double, 3> el_dissipation_combos(const LeslieCoefficients& c);

struct FrankConstants {
  double k1, k2, k3;  // splay, twist, bend
  std::array<double, 5> j;
  double s2, s4;
};

// Elastic constants from the interaction-kernel moments J1..J5 at the
// equilibrium order parameters of alpha.
FrankConstants frank_constants(const std::array<double, 5>& j, double alpha);

// Coefficient k of the one-constant director energy E_F = (k/2)|grad n|^2
// induced by the closure: alpha*G*S2^2.  Requires g >= 0.
double ericksen_coefficient(double alpha, double g);

}  // namespace qtensor
