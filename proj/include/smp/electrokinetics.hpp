// Lagrangian electrokinetic potential problem Div(J) = 0 with
// J = -sigma_L (F^T da_s/dt + Grad Phi), plus current density and Joule-loss
// evaluation and the directional derivatives feeding the coupled tangent.

#ifndef SMP_ELECTROKINETICS_HPP
#define SMP_ELECTROKINETICS_HPP

#include <vector>

#include "smp/assembly.hpp"
#include "smp/coil.hpp"
#include "smp/params.hpp"

namespace smp {

// Pointwise electromagnetic evaluation at one quadrature point.
struct EmQp {
  Vec3 A_dot;     // F^T da_s/dt at the deformed position (V/m, Lagrangian)
  Vec3 g;         // A_dot + Grad Phi (the negated effective field)
  Vec3 m;         // F^-T g (spatial counterpart)
  Vec3 J_L;       // Lagrangian current density -sigma_L g (A/m^2)
  double w;       // loss density per undeformed volume (W/m^3)
  double sigma;   // sigma_E at the local temperature
  Mat3 sigma_L;   // J sigma_E F^-1 F^-T
};
// In period-averaged mode the coil envelope amplitude replaces the
// instantaneous phase and the loss carries the cycle-average factor 1/2.
EmQp em_eval_qp(const QpData& q, const EmMaterial& mat, const CoilSpec& coil,
                double t, bool period_averaged);

// Element-level contributions to the monolithic system: the potential-row
// residual r_phi = K_ele phi + F_ele, the nodal loss vector W_i = int N_i w,
// and their derivatives with respect to the element's phi, theta and u DOFs
// (u columns node-major: 3 j + k).
struct EmElement {
  VecX r_phi;
  VecX loss;
  MatX K_pp;  // d r_phi / d phi
  MatX K_pt;  // d r_phi / d theta (conductivity path)
  MatX K_pu;  // d r_phi / d u (geometric + source-motion path)
  MatX W_p;   // d loss / d phi
  MatX W_t;   // d loss / d theta
  MatX W_u;   // d loss / d u
};
EmElement em_element(const std::vector<QpData>& qps, const EmMaterial& mat,
                     const CoilSpec& coil, double t, bool period_averaged,
                     bool with_tangent);

// Standalone assemblies over the phi block (phi DOF ids equal node ids).
SpMat assemble_K_ele(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                     const EmMaterial& mat);
VecX assemble_F_ele(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                    const EmMaterial& mat, const CoilSpec& coil, double t,
                    bool period_averaged = false);

// Minimum-index node on the boundary (region-independent); node 0 when the
// mesh carries no facets.
int ground_node(const Mesh& mesh);

// Solves K phi + F = 0 with phi[ground] = 0. Throws "floating conductor" when
// the grounded matrix is singular.
VecX solve_potential(const SpMat& K, const VecX& F, int ground);

// Field solution with per-quadrature-point current and loss densities.
struct EmSolution {
  VecX phi;
  std::vector<std::vector<Vec3>> J_qp;
  std::vector<std::vector<double>> w_qp;
};
EmSolution current_and_losses(const Mesh& mesh, const DofLayout& layout,
                              const VecX& v, const EmMaterial& mat,
                              const CoilSpec& coil, double t,
                              bool period_averaged = false);

}  // namespace smp

#endif
