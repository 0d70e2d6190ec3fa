// Quasistatic large-deformation mechanics on the undeformed configuration:
// internal forces from the mixture stress, electromagnetic body force,
// dead-load tractions, displacement programs and reaction probes.

#ifndef SMP_MECHANICS_HPP
#define SMP_MECHANICS_HPP

#include <array>
#include <limits>
#include <map>
#include <vector>

#include "smp/assembly.hpp"
#include "smp/coil.hpp"
#include "smp/mesh.hpp"
#include "smp/params.hpp"
#include "smp/smp_material.hpp"

namespace smp {

// Per-region displacement program: the flagged components are driven by
// piecewise-linear values until an optional release time.
struct DirichletProgram {
  int region = -1;
  std::array<bool, 3> comp{{false, false, false}};
  std::array<PiecewiseLinear, 3> u_D{{PiecewiseLinear::constant(0.0),
                                      PiecewiseLinear::constant(0.0),
                                      PiecewiseLinear::constant(0.0)}};
  double t_release = std::numeric_limits<double>::infinity();
};

struct MechBC {
  std::vector<DirichletProgram> dirichlet;
  std::map<int, Vec3> traction;  // region -> dead reference traction (N/m^2)

  // Throws when a region component carries both a displacement program and a
  // nonzero traction component.
  void check() const;
  // Registers the displacement programs on the u DOFs of their regions.
  void add_constraints(const Mesh& mesh, const DofLayout& layout,
                       ConstraintSet& cs) const;
};

// Committed / trial internal variables for every quadrature point.
struct MaterialState {
  std::vector<std::vector<QpState>> committed;  // [element][qp]
  std::vector<std::vector<QpState>> trial;

  static MaterialState virgin(const Mesh& mesh, double theta0,
                              const MechParams& p);
  // Promotes every trial state after a converged step.
  void commit_all();
};

// Internal-force element kernel. r_u(3i+a) = sum_qp wdet (F S B_i)_a with the
// exact consistent tangent; writes the per-qp trial states.
struct MechElement {
  VecX r_u;   // 3 nnode
  MatX K_uu;  // 3 nnode x 3 nnode (material + geometric)
  MatX K_ut;  // 3 nnode x nnode
  bool any_plastic = false;
};
MechElement mech_element(const std::vector<QpData>& qps,
                         const std::vector<QpState>& committed,
                         std::vector<QpState>* trial, const MechParams& p,
                         bool with_tangent);

// Spatial Lorentz force density j x b at one quadrature point (per unit
// deformed volume); the reference density entering the residual is J (j x b).
// The magnetisation-gradient term vanishes for the uniform solenoid field.
Vec3 em_body_force(const QpData& q, const EmMaterial& mat, const CoilSpec& coil,
                   double t);

// External body-force element: r_u(3i+a) = -sum_qp wdet J N_i (j x b)_a and
// its exact potential/temperature/displacement couplings. The one-period mean
// of j x b vanishes for the sinusoidal drive, so period-averaged mode returns
// zeros.
struct BodyForceElement {
  VecX r_u;
  MatX K_uu, K_ut, K_up;
};
BodyForceElement em_body_element(const std::vector<QpData>& qps,
                                 const EmMaterial& mat, const CoilSpec& coil,
                                 double t, bool period_averaged,
                                 bool with_tangent);

// Optional electromagnetic force context for the standalone residual.
struct EmForceContext {
  const EmMaterial* mat = nullptr;
  const CoilSpec* coil = nullptr;
  double t = 0.0;
  bool period_averaged = false;
};

// Subtracts the dead-load traction work int N_i t_L dGamma from the u rows.
void add_dead_tractions(const Mesh& mesh, const DofLayout& layout,
                        const VecX& v, const MechBC& bc, VecX& r);

// Standalone mechanical residual (internal - external) on the combined
// layout; only u entries are filled. Updates state.trial.
VecX mech_residual(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                   MaterialState& state, const MechParams& p, const MechBC& bc,
                   double t, const EmForceContext* em = nullptr);

// Standalone tangent d(residual)/d(u) on the combined layout.
SpMat mech_tangent(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                   MaterialState& state, const MechParams& p,
                   const EmForceContext* em = nullptr);

// Componentwise sum of internal-force entries over the nodes of a boundary
// region. Throws on a region with no facets.
Vec3 reaction_force(const Mesh& mesh, const DofLayout& layout,
                    const VecX& internal, int region);

}  // namespace smp

#endif
