#pragma once

#include <stdexcept>
#include <string>

#include "qtensor/quadrature.hpp"

namespace qtensor {

struct NonAdmissible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  NoConvergence(const std::string& msg, double best, int iters)
      : std::runtime_error(msg), best_residual(best), iterations(iters) {}
  double best_residual;
  int iterations;
};

struct Admissibility {
  std::array<double, 3> eigenvalues;  // descending
  double margin;  // min distance of the eigenvalues to {-1/3, 2/3}
  bool admissible;
};

// Admissible means all eigenvalues strictly inside (-1/3, 2/3).
Admissibility check_admissible(const SymTraceless3& q);

struct BinghamResult {
  SymTraceless3 b;   // conjugate field, same eigenframe as q
  MomentSet moments; // forward moments of b under the given rule
  int iterations;
  double residual;   // inf-norm of m2 - I/3 - q
};

// Invert the moment relation m2(B) - I/3 = Q for B.  Damped Newton on the
// two free eigenvalues of B in q's eigenframe.  Requires margin >= 1e-6 and
// tol >= 1e-12.  Throws NonAdmissible / NoConvergence.
BinghamResult solve_bq(const SymTraceless3& q, const QuadratureRule& rule,
                       double tol = 1e-11, int max_iter = 100);

// Warm-started variant: b0 is a previous conjugate-field estimate for a
// nearby q (its eigenvalues in q's frame seed the Newton iteration).
BinghamResult solve_bq(const SymTraceless3& q, const QuadratureRule& rule,
                       const SymTraceless3& b0, double tol = 1e-11,
                       int max_iter = 100);

}  // namespace qtensor
