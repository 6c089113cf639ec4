#pragma once

#include <stdexcept>
#include <vector>

#include "qtensor/bingham.hpp"
#include "qtensor/leslie.hpp"

namespace qtensor {

struct AdmissibilityLost : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CFLViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlowParams {
  double de = 1.0;            // Deborah number, > 0
  double re = 1.0;            // Reynolds number, > 0
  double gamma_solvent = 0.5; // solvent viscosity fraction, in (0,1)
  double eps = 0.0;           // interaction-range parameter, >= 0
  double alpha_ms = 7.0;      // Maier-Saupe strength
  double g_const = 1.0;       // kernel second moment G
  double gamma_par = 0.0;     // translational diffusion, parallel
  double gamma_perp = 0.0;    // translational diffusion, perpendicular
  // The translational operator subtracts (d_ab/3) Q_kl in its rank-4
  // bracket as written; the variant subtracts the full trace part
  // (d_ab/3)(Q+I/3)_kl instead.
  bool n_operator_trace_variant = false;
  // Tie eps = de (the scaling the small-Deborah expansion assumes).
  bool de_eps_consistent = false;

  void validate() const;  // throws std::invalid_argument
};

struct GridShape {
  int nx = 0, ny = 0;
  double lx = 0, ly = 0;
};

// 2D periodic fields: full 3x3 traceless Q per cell, two velocity
// components.  Row-major storage, index ix + nx*iy.
struct FieldState {
  GridShape grid;
  std::vector<SymTraceless3> q;
  std::vector<double> vx, vy;
  // conjugate-field cache, maintained by the steppers for warm starts
  std::vector<SymTraceless3> b;
  double t = 0;

  int cells() const { return grid.nx * grid.ny; }
};

struct DirectorState {
  std::vector<Vec3> n;
  double t = 0;
};

struct EnergyReport {
  double kinetic;   // int |v|^2/2
  double bulk;      // int -ln Z + Q:B - (alpha/2)|Q|^2
  double elastic;   // (alpha G eps/4) int |grad Q|^2
  double total;     // kinetic + (1-gamma)/(Re De) * (bulk + elastic)
  // dissipation channels, all reported >= 0 in a dissipative state
  double diss_viscous;        // (gamma/Re) int |grad v|^2
  double diss_closure;        // (1-gamma)/(2 Re) int D:M4:D
  double diss_rotational;     // 4(1-gamma)/(Re De^2) int E:M_Q(E)
  double diss_translational;  // -eps(1-gamma)/(Re De^2) int E:N(E)
  double min_margin;          // admissibility margin over the cells
  double max_speed;
};

// ---- homogeneous ODE ----

// (1/De)(-6Q + 2 alpha [M+Mt](Q)) + [M+Mt](kappa^T); kappa_ij = dv_i/dx_j.
SymTraceless3 rhs_homogeneous(const SymTraceless3& q, const Mat3& kappa,
                              const FlowParams& p);

// One classical RK4 step; throws AdmissibilityLost if the result leaves
// the admissible set.
SymTraceless3 step_homogeneous(const SymTraceless3& q, const Mat3& kappa,
                               const FlowParams& p, double dt);

// Stability bound estimate from the spectral radius of the finite
// difference Jacobian at q.
double homogeneous_dt_bound(const SymTraceless3& q, const Mat3& kappa,
                            const FlowParams& p);

// ---- translational diffusion operator ----

// Divergence-form operator N_Q(A) with spectral derivatives on the
// periodic grid.  Output traceless.
std::vector<SymTraceless3> n_operator_apply(
    const std::vector<SymTraceless3>& a_field,
    const std::vector<SymTraceless3>& q_field, const FlowParams& p,
    const GridShape& g);

// ---- coupled 2D solver ----

FieldState uniform_equilibrium_state(const GridShape& g, const FlowParams& p);

// Equilibrium Q with a seeded long-wavelength director modulation and a
// weak solenoidal velocity.
FieldState perturbed_equilibrium_state(const GridShape& g,
                                       const FlowParams& p, unsigned seed);

double advective_cfl(const FieldState& s, double dt);
double min_admissibility_margin(const FieldState& s);

// One IMEX step: exponential treatment of the constant-coefficient linear
// terms, explicit closure nonlinearities, spectral (Leray) projection of
// the velocity.  Mutates the state in place.  Throws CFLViolation when the
// pre-step advective CFL exceeds 0.5, AdmissibilityLost if any cell leaves
// the admissible set.
void step_coupled(FieldState& s, const FlowParams& p, double dt);

EnergyReport energy_report(const FieldState& s, const FlowParams& p);

// ---- Ericksen-Leslie director reference ----

// dn/dt = -Omega.n + (1/gamma1)(I - nn)(h - gamma2 D.n); the advective
// term is the caller's business (homogeneous runs have none).
Vec3 el_director_rhs(const Vec3& n, const Mat3& kappa, const Vec3& h,
                     const LeslieCoefficients& c);

// RK4 step of the director ODE, renormalized.
Vec3 el_step(const Vec3& n, const Mat3& kappa, const Vec3& h,
             const LeslieCoefficients& c, double dt);

struct ShearResponse {
  bool aligning;  // |lambda| > 1
  double theta;   // steady angle to the flow direction (aligning case)
  double period;  // tumbling period (non-aligning case)
};

// Response of the director to simple shear kappa_12 = rate: steady angle
// with cos(2 theta) = 1/lambda when flow-aligning, tumbling period
// otherwise.  Found by integrating the ODE, not from the closed form.
ShearResponse shear_director_response(const LeslieCoefficients& c,
                                      double rate);

// ---- small-Deborah limit study ----

enum class LimitScenario { HomogeneousShear, Periodic1DSplay };

struct LimitRow {
  double de;
  double director_err;   // max angle vs the EL reference, radians
  double biaxiality;     // max of the biaxiality invariant over the run
  double manifold_dist;  // max |Q - S2 (nn - I/3)|
  double s2_err;         // |S2(Q) - S2_eq| at final time
  double order;          // log2(err(prev)/err(this)); 0 for the first row
};

struct LimitTable {
  std::vector<LimitRow> rows;
  double fitted_c;  // manifold_dist ~ C * De fit
};

// Integrate the Q-tensor system at each De = eps to a fixed physical time
// and compare the principal-eigenvector director against the EL solution.
LimitTable limit_study(const std::vector<double>& de_list, LimitScenario sc,
                       const FlowParams& p);

}  // namespace qtensor
