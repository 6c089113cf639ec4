#pragma once

#include <vector>

#include "qtensor/dynamics.hpp"

namespace qtensor::detail {

// Per-cell closure data for a whole field, solved on the folded rule.
struct FieldMoments {
  std::vector<SymTraceless3> b;
  std::vector<Sym4Moment> m4;
  std::vector<double> ln_z;
  std::vector<Sym6Moment> m6;  // filled only when requested
  double iterations_avg = 0;
};

// Solves every cell, warm-starting from `warm` when its size matches.
// Throws AdmissibilityLost carrying the first offending cell.
FieldMoments solve_field(const std::vector<SymTraceless3>& q,
                         const std::vector<SymTraceless3>& warm, bool want_m6);

// Divergence-form translational diffusion with caller-supplied moments.
std::vector<SymTraceless3> n_apply_with_moments(
    const std::vector<SymTraceless3>& a_field,
    const std::vector<SymTraceless3>& q_field,
    const std::vector<Sym4Moment>& m4s, const std::vector<Sym6Moment>& m6s,
    const FlowParams& p, const GridShape& g);

}  // namespace qtensor::detail
