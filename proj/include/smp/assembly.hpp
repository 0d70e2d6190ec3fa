// Element-to-global scatter assembly and per-quadrature-point field caches
// shared by all three physics.

#ifndef SMP_ASSEMBLY_HPP
#define SMP_ASSEMBLY_HPP

#include <functional>
#include <vector>

#include "smp/dof.hpp"
#include "smp/kinematics.hpp"
#include "smp/mesh.hpp"
#include "smp/types.hpp"

namespace smp {

// Triplet/vector accumulator for one global system.
class Assembler {
 public:
  explicit Assembler(int n) : n_(n), vec_(VecX::Zero(n)) {}

  void add_matrix(const std::vector<int>& dofs, const MatX& local);
  void add_matrix(const std::vector<int>& rows, const std::vector<int>& cols,
                  const MatX& local);
  void add_vector(const std::vector<int>& dofs, const VecX& local);
  void add(int row, int col, double v) { trips_.emplace_back(row, col, v); }
  void add(int row, double v) { vec_[row] += v; }

  SpMat matrix() const;
  const VecX& vector() const { return vec_; }
  const std::vector<Triplet>& triplets() const { return trips_; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<Triplet> trips_;
  VecX vec_;
};

// Generic element-loop assembly: kernel returns the element DOF list plus a
// local matrix and/or vector (either may be empty).
struct ElementContribution {
  std::vector<int> dofs;
  MatX mat;  // dofs.size() x dofs.size() or 0x0
  VecX vec;  // dofs.size() or 0
};
using ElementKernel = std::function<ElementContribution(int elem)>;
void assemble(const Mesh& mesh, const ElementKernel& kernel, Assembler& out);

// Per-element nodal values of the three fields extracted from the global
// state vector.
struct ElementFields {
  VecX phi;    // nnode
  VecX theta;  // nnode
  MatX u;      // nnode x 3
};
ElementFields gather_fields(const Mesh& mesh, int e, const DofLayout& layout,
                            const VecX& v);

// Volume quadrature point cache: geometry, gradients and field values.
struct QpData {
  double wdet;      // quadrature weight x detJ (undeformed measure)
  VecX N;           // shape values
  MatX B;           // nnode x 3 undeformed gradients
  Vec3 X;           // undeformed position
  Vec3 x;           // deformed position
  Mat3 F;
  double J;
  Mat3 Finv;
  double theta;
  Vec3 grad_theta;  // undeformed gradient of theta
  Vec3 grad_phi;    // undeformed gradient of Phi
};
std::vector<QpData> element_qps(const Mesh& mesh, int e,
                                const ElementFields& f);

// Boundary facet quadrature point cache. Normals and area measures refer to
// the undeformed configuration; area_scale = J |F^-T n_L| maps them to the
// deformed configuration (Nanson).
struct FacetQp {
  double warea;  // quadrature weight x undeformed area measure
  Vec3 n_L;      // unit outward undeformed normal
  VecX N;        // parent-element shape values
  MatX B;        // parent-element undeformed gradients
  Vec3 X;
  Mat3 F;
  double J;
  Mat3 Finv;
  double theta;
  double area_scale;
};
std::vector<FacetQp> facet_qps(const Mesh& mesh, const Facet& facet,
                               const ElementFields& f);

// DOF id lists for scattering element contributions.
std::vector<int> phi_dofs(const Mesh& mesh, int e, const DofLayout& layout);
std::vector<int> theta_dofs(const Mesh& mesh, int e, const DofLayout& layout);
std::vector<int> u_dofs(const Mesh& mesh, int e, const DofLayout& layout);

}  // namespace smp

#endif
