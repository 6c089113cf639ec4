#pragma once

#include <vector>

#include "qtensor/tensor.hpp"

namespace qtensor {

// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times
// equispaced azimuth.  Weights sum to 4*pi.
struct QuadratureRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  int exactness = 0;  // polynomial degree integrated exactly
  int level = 0;
};

QuadratureRule build_rule(int level);

// Moments of the density exp(mm:B)/Z.
struct MomentSet {
  double z = 0;  // partition function, weight included (B=0 gives 4*pi)
  Mat3 m2;       // trace 1
  Sym4Moment m4;
  Sym6Moment m6;
};

// Requires rule exactness >= 12.  Exponents are shifted by the max of mm:B
// over the nodes before exponentiation; z has the shift re-applied.
// Reduction over nodes is a fixed pairwise tree, so the result is
// bit-reproducible.
MomentSet moments_of(const SymTraceless3& b, const QuadratureRule& rule);

// Deviatoric part of the fourth moment.
Traceless4 q4_of(const SymTraceless3& b, const QuadratureRule& rule);

// Shared level-32 rule (production default), built on first use.
const QuadratureRule& default_rule();

}  // namespace qtensor
