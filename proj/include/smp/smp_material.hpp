// Shape-memory-polymer constitutive model at one quadrature point: glassy
// fraction, frozen-strain storage/release, J2 return mapping on the glassy
// branch, phase-mixture second Piola-Kirchhoff stress and the exact
// directional tangents dS/dF and dS/dtheta.

#ifndef SMP_SMP_MATERIAL_HPP
#define SMP_SMP_MATERIAL_HPP

#include "smp/params.hpp"
#include "smp/types.hpp"

namespace smp {

// Internal variable set Z = (z_g, F_f, F_p, F_pg, alpha). The coupled solver
// keeps one committed copy per quadrature point and a trial copy produced by
// return_mapping; commit promotes trial to committed after convergence.
struct QpState {
  double z_g = 0.0;
  Mat3 F_f = Mat3::Identity();   // frozen deformation gradient
  Mat3 F_p = Mat3::Identity();   // rubbery plastic gradient
  Mat3 F_pg = Mat3::Identity();  // glassy plastic gradient
  double alpha = 0.0;            // accumulated glassy plastic strain
};

// Virgin state: identity gradients, z at the initial temperature.
QpState virgin_state(double theta0, const MechParams& p);

// z_g(theta) = 1 / (1 + c exp(w (theta - theta_t))) and its derivative.
std::pair<double, double> glassy_fraction(double theta, const MechParams& p);

// Frozen-gradient update rule.
// Cooling (dz > 0):  F_f <- (1 - b) F_f0 + b F F_p^-1 with b = dz / z_new.
// Heating (dz <= 0): F_f <- I + (z_new/z_old)^c (F_f0 - I); no-op at z_old = 0.
Mat3 update_frozen(const QpState& committed, double z_new, const Mat3& F_total,
                   const Mat3& F_p_new, const MechParams& p);

// Stress and tangents. dSdF maps column-major flattened perturbations:
// delta S_flat = dSdF * delta F_flat with flat index = row + 3 col.
struct StressTangent {
  Mat3 S = Mat3::Zero();
  Mat9 dSdF = Mat9::Zero();
  Mat3 dSdTheta = Mat3::Zero();
};

struct ReturnMapResult {
  StressTangent st;
  QpState trial;
  bool glassy_plastic = false;
  bool rubbery_plastic = false;
  // von Mises magnitude of the return-mapped glassy branch stress; on a
  // plastic step it sits on the yield surface, R_pg + h alpha, to roundoff
  double glassy_vm = 0.0;
};

// Evaluates the full model from the committed state of the previous step.
// Throws on non-positive det(F) or a degenerate frozen/plastic gradient
// (signals a time-step cut to the caller).
ReturnMapResult return_mapping(const Mat3& F, double theta,
                               const QpState& committed, const MechParams& p,
                               bool with_tangent);

// Promotes a trial state; the caller asserts Newton convergence beforehand.
void commit(QpState& committed, const QpState& trial);

// Restates dSdF as the objective material tangent dS/dE on the same flat
// basis, using the representative dF = F^-T dE. Well defined wherever S
// depends on F only through C = F^T F (no active cooling increment).
Mat9 tangent_dSdE(const StressTangent& st, const Mat3& F);

}  // namespace smp

#endif
