#pragma once

#include "qtensor/tensor.hpp"

namespace qtensor::detail {

// Per-cell closure solve on the folded (octant-reduced) rule: Newton in the
// eigenframe of q, moments rotated back to the lab frame.  No full-rule
// verification pass; the public solve_bq adds that.
struct CellSolve {
  SymTraceless3 b;
  Sym4Moment m4;
  double ln_z;      // true ln Z, exponent shift re-applied
  int iterations;
  double residual;  // inf-norm of the eigenframe moment mismatch
};

CellSolve solve_cell(const SymTraceless3& q, int level,
                     const SymTraceless3* warm, double tol, int max_iter);

// Sixth moment of exp(mm:B)/Z for an already-solved conjugate field.
Sym6Moment cell_m6(const SymTraceless3& b, int level);

}  // namespace qtensor::detail
