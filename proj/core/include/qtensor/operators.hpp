#pragma once

#include "qtensor/equilibria.hpp"

namespace qtensor {

enum class OperatorTag { Qn, Jn, Kn, Ln };

// Linear operators on the 5-dim symmetric traceless space at the uniaxial
// equilibrium eq:
//   Qn(B) = M4:B - (1/3) I (Q0:B) - Q0 (Q0:B)
//   Jn(B) = B/3 + (B.Q0 + Q0.B)/2 - B:M4
//   Kn    = Id - alpha Qn
//   Ln    = -2 Jn o Kn
SymTraceless3 qn_apply(const SymTraceless3& b, const EquilibriumData& eq);
SymTraceless3 jn_apply(const SymTraceless3& b, const EquilibriumData& eq);
SymTraceless3 kn_apply(const SymTraceless3& b, const EquilibriumData& eq);
SymTraceless3 ln_apply(const SymTraceless3& b, const EquilibriumData& eq);

struct OperatorMatrix {
  OperatorTag tag;
  std::array<std::array<double, 5>, 5> m;  // in the fixed sym_basis()
  Vec3 n;
  double alpha, eta, s2, s4;
};

// Matrix representation in sym_basis().  If n differs from eq.n the
// equilibrium tensors are re-aimed along n (closed uniaxial forms).
// Asserts the structural invariants: symmetry of all four matrices,
// Jn positive definite, Kn positive semi-definite with a 2-dim kernel.
OperatorMatrix operator_matrix(OperatorTag tag, const EquilibriumData& eq,
                               const Vec3& n);

// {(n n1 + n1 n), (n n2 + n2 n)}/sqrt(2) for an orthonormal completion
// {n1, n2} of n: the shared kernel of Kn and Ln.
std::array<SymTraceless3, 2> kernel_basis(const Vec3& n);

// Inf-norm residual of the rank-6 moment identity behind the commutation
// property of (Id - alpha Qn) with Q0:
//   B0:[M6:B - M4 (Q0:B)] = B0.Qn(B) + B.Q0 + B/3 - B:M4 - (3/2) Qn(B)
double check_q6_identity(const SymTraceless3& b, const EquilibriumData& eq);

struct Spectrum {
  std::array<double, 5> eigenvalues;  // ascending
  std::array<std::array<double, 5>, 5> vectors;  // rows match eigenvalues
};

Spectrum operator_spectrum(const OperatorMatrix& om);

}  // namespace qtensor
