// Lagrangian transient heat conduction: storage and conduction element
// kernels, convective/radiative boundary facets mapped by Nanson's formula,
// backward-Euler residual, and the nondimensionalization report.

#ifndef SMP_THERMAL_HPP
#define SMP_THERMAL_HPP

#include <vector>

#include "smp/assembly.hpp"
#include "smp/params.hpp"

namespace smp {

// Volume contribution of one element to the thermal row:
// r = M (theta - theta_old) + dt K(theta, u) theta. The Joule source and its
// couplings are composed in by the caller from the electrokinetics module.
struct ThermalElement {
  VecX r;
  MatX T_tt;  // d r / d theta: M + dt (K + conductivity path)
  MatX T_tu;  // d r / d u: dt times the geometric conduction derivative
};
ThermalElement thermal_element(const std::vector<QpData>& qps,
                               const VecX& theta_old, double dt,
                               const ThermalParams& p, bool with_tangent);

// Boundary contribution of one facet (convection + radiation), not scaled by
// dt; both terms carry the deformed-area factor J |F^-T n_L|.
struct ThermalFacet {
  VecX r;
  MatX T_tt;  // h_L + 4 eps sigma theta^3 path
  MatX T_tu;  // area-scale geometric path
};
ThermalFacet thermal_facet(const std::vector<FacetQp>& qps,
                           const ThermalParams& p, double t, bool with_tangent);

// Standalone assemblies over the theta block (node indexing).
SpMat assemble_M_the(const Mesh& mesh, const ThermalParams& p);
SpMat assemble_K_the(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                     const ThermalParams& p);

// Convective tangent matrix and combined boundary residual at the given state.
struct BoundaryTerms {
  SpMat H;  // d r / d theta over all boundary facets
  VecX r;   // convective + radiative residual
};
BoundaryTerms boundary_terms(const Mesh& mesh, const DofLayout& layout,
                             const VecX& v, const ThermalParams& p, double t);

// Full thermal residual on the theta block:
// R = M (theta - theta_old) + dt (K theta + boundary - source), with the
// source vector W_i = int N_i w from per-quadrature-point loss densities.
VecX thermal_residual(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                      const VecX& theta_old, double dt,
                      const std::vector<std::vector<double>>& w_qp,
                      const ThermalParams& p, double t);

}  // namespace smp

#endif
