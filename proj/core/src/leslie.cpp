#include "qtensor/leslie.hpp"

#include <cmath>
#include <stdexcept>

namespace qtensor {

namespace {

LeslieCoefficients from_params(double s2, double s4, double alpha,
                               double eta) {
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  if (!(s2 > 0) || !(s2 < 1))
    throw std::invalid_argument("s2 must lie in (0, 1)");
  LeslieCoefficients c;
  c.eta = eta;
  c.alpha = alpha;
  c.s2 = s2;
  c.s4 = s4;
  c.lambda = 1.0 / 3.0 + 2.0 / (3.0 * s2) - 2.0 / (s2 * alpha);
  c.gamma1 = s2 / c.lambda;
  c.gamma2 = -s2;
  c.alpha1 = -0.5 * s4;
  c.alpha2 = -0.5 * s2 * (1.0 + 1.0 / c.lambda);
  c.alpha3 = -0.5 * s2 * (1.0 - 1.0 / c.lambda);
  c.alpha4 = 4.0 / 15.0 - (5.0 / 21.0) * s2 - (1.0 / 35.0) * s4;
  c.alpha5 = s4 / 7.0 + (6.0 / 7.0) * s2;
  c.alpha6 = s4 / 7.0 - s2 / 7.0;
  return c;
}

}  // namespace

LeslieCoefficients leslie_coefficients(double alpha) {
  EquilibriumBranch br = solve_branches(alpha);
  const std::vector<BranchRoot>& roots = br.roots;
  if (roots.size() < 2 || roots[1].eta <= 0)
    throw SubCritical("no nematic branch below the critical coupling");
  const BranchRoot& r = roots[1];
  return from_params(r.s2, r.s4, alpha, r.eta);
}

LeslieCoefficients leslie_from_order_params(double s2, double s4,
                                            double alpha) {
  return from_params(s2, s4, alpha, 0.0);
}

std::array<double, 3> el_dissipation_combos(const LeslieCoefficients& c) {
  double ratio = c.gamma2 * c.gamma2 / c.gamma1;
  return {c.alpha5 + c.alpha6 - ratio, c.alpha1 + ratio, 1.0 / c.gamma1};
}

FrankConstants frank_constants(const std::array<double, 5>& j, double alpha) {
  EquilibriumBranch br = solve_branches(alpha);
  const std::vector<BranchRoot>& roots = br.roots;
  if (roots.size() < 2 || roots[1].eta <= 0)
    throw SubCritical("no nematic branch below the critical coupling");
  double s2 = roots[1].s2, s4 = roots[1].s4;
  FrankConstants f;
  f.j = j;
  f.s2 = s2;
  f.s4 = s4;
  double s2sq = 2.0 * s2 * s2;
  double s4sq = s4 * s4;
  double cross = j[4] * s2 * s4;
  f.k1 = s2sq * (j[0] + j[2]) + s4sq * (16.0 * j[1] / 7.0 + 92.0 * j[3] / 49.0) -
         (6.0 / 7.0) * cross;
  f.k2 = s2sq * j[0] + s4sq * (16.0 * j[1] / 7.0 + 12.0 * j[3] / 49.0) -
         (2.0 / 7.0) * cross;
  f.k3 = s2sq * (j[0] + j[2]) + s4sq * (16.0 * j[1] / 7.0 + 120.0 * j[3] / 49.0) +
         (8.0 / 7.0) * cross;
  return f;
}

double ericksen_coefficient(double alpha, double g) {
  if (!(g >= 0)) throw std::invalid_argument("g must be non-negative");
  EquilibriumBranch br = solve_branches(alpha);
  const std::vector<BranchRoot>& roots = br.roots;
  if (roots.size() < 2 || roots[1].eta <= 0)
    throw SubCritical("no nematic branch below the critical coupling");
  double s2 = roots[1].s2;
  return alpha * g * s2 * s2;
}

}  // namespace qtensor
