// Monolithic electro-thermo-mechanical time stepping: the DAE residual
// G = (H1, H2, H3), its 3x3 block tangent, and a backward-Euler Newton driver
// with per-field residual scaling, step halving and bit-exact rollback.

#ifndef SMP_COUPLED_HPP
#define SMP_COUPLED_HPP

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/SparseLU>

#include "smp/electrokinetics.hpp"
#include "smp/mechanics.hpp"
#include "smp/thermal.hpp"

namespace smp {

// Temperature Dirichlet program; region -1 drives every node.
struct ThetaProgram {
  int region = -1;
  PiecewiseLinear value = PiecewiseLinear::constant(293.0);
  double t_release = std::numeric_limits<double>::infinity();
};

// Displacement program on a single node, for grips that are not a whole
// facet region (e.g. the contact lines of a crimping plate).
struct NodeProgram {
  int node = -1;
  int comp = 0;  // 0..2
  PiecewiseLinear value = PiecewiseLinear::constant(0.0);
  double t_release = std::numeric_limits<double>::infinity();
};

// Everything that defines one coupled problem on a fixed mesh.
struct CoupledProblem {
  const Mesh* mesh = nullptr;
  DofLayout layout;
  MechParams mech = MechParams::sec_defaults();
  ThermalParams thermal = ThermalParams::table2();
  EmMaterial em = EmMaterial::table2();
  CoilSpec coil;
  MechBC mech_bc;
  std::vector<ThetaProgram> theta_bc;
  std::vector<NodeProgram> node_bc;
  // Facet regions excluded from convection/radiation (symmetry cuts).
  std::vector<int> insulated_regions;
  bool period_averaged = true;  // envelope drive and cycle-averaged losses
  bool em_body_force = false;   // Lorentz force on the mechanical row

  void check() const;
  // Ground + all displacement/temperature programs. The potential is always
  // pinned at the minimum-index boundary node.
  ConstraintSet constraints() const;
};

// Residual scale divisors per field; non-positive entries are replaced by the
// defaults sigma V / L^2, rho cp V / dt and E_g L^2.
struct BlockScaling {
  double phi = 0.0;
  double theta = 0.0;
  double u = 0.0;
};
BlockScaling resolve_scaling(const CoupledProblem& pb, const BlockScaling& user,
                             double dt);

struct SolverConfig {
  double dt = 1.0e-2;          // target step (s)
  double newton_tol = 1.0e-8;  // relative to the first scaled residual
  double newton_abs = 1.0e-14; // absolute floor on the scaled residual
  int newton_max = 25;
  int max_cuts = 8;            // dt halvings before aborting
  bool staggered = false;      // debug: exact EM pre-solve each iteration
  BlockScaling scaling;        // 0 = auto

  void check() const;
};

// Combined unknowns plus the committed internal variables at time t.
struct CoupledState {
  VecX v;
  MaterialState mat;
  double t = 0.0;
  int n = 0;  // committed step count
};

// phi = 0, theta = theta0, u = 0 with the active programs imposed at t = 0.
CoupledState initial_state(const CoupledProblem& pb, double theta0);

// Backward-Euler residual of the stacked system at v (new) given v_old:
//   H1 = K_ele phi + F_ele
//   H2 = M (theta - theta_old) + dt (K theta + boundary - W)
//   H3 = mechanical internal - external forces
// Updates mat.trial; throws on element inversion.
VecX residual_G(const CoupledProblem& pb, const VecX& v, const VecX& v_old,
                double dt, double t, MaterialState& mat);

// Exact block tangent dG/dv at v. Same sweep as the residual with all nine
// couplings (conductivity, Joule, geometric and material paths).
SpMat tangent_A(const CoupledProblem& pb, const VecX& v, double dt, double t,
                MaterialState& mat);

// Scaled residual norm: per-field infinity norms over the free DOFs divided
// by the block scales, maximised over fields.
double scaled_norm(const DofLayout& layout, const VecX& r,
                   const BlockScaling& s, const std::vector<int>& fixed_dofs);

// Volume integral of the Joule source at state v (W); period-averaged when
// the problem is.
double total_joule_power(const CoupledProblem& pb, const VecX& v, double t);

struct StepReport {
  bool converged = false;
  int iterations = 0;             // Newton updates taken
  int cuts = 0;                   // dt halvings used
  double dt_used = 0.0;
  double t = 0.0;                 // time after the step
  std::vector<double> residuals;  // scaled norm history, residuals[0] = r0
};

using StepCallback =
    std::function<void(const CoupledState&, const StepReport&)>;

// One-step-in-flight Newton driver with pattern-reusing sparse LU.
class CoupledSolver {
 public:
  CoupledSolver(const CoupledProblem& pb, SolverConfig cfg);

  // Advances one backward-Euler step of cfg.dt, halving on failure. Commits
  // the material state exactly once on success; committed data are untouched
  // by failed attempts. Throws after max_cuts halvings.
  StepReport advance(CoupledState& st);

  // Steps until t_end (final step shortened to land on it); returns the
  // number of committed steps.
  int run(CoupledState& st, double t_end, const StepCallback& on_step = {});

 private:
  StepReport try_step(CoupledState& st, double dt);

  const CoupledProblem* pb_;
  SolverConfig cfg_;
  ConstraintSet cs_;
  Eigen::SparseLU<SpMat> lu_;
  ReducedMap last_map_;
  bool analyzed_ = false;
};

}  // namespace smp

#endif
