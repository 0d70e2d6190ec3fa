// DOF layout for the combined unknown v = (Phi, theta, u) and time-dependent
// Dirichlet constraint handling by elimination.

#ifndef SMP_DOF_HPP
#define SMP_DOF_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "smp/program.hpp"
#include "smp/types.hpp"

namespace smp {

// Global ordering: [Phi (n) | theta (n) | u (3n, node-major xyz)].
struct DofLayout {
  int n_nodes = 0;

  int phi(int node) const { return node; }
  int theta(int node) const { return n_nodes + node; }
  int u(int node, int comp) const { return 2 * n_nodes + 3 * node + comp; }
  int total() const { return 5 * n_nodes; }

  int phi_begin() const { return 0; }
  int theta_begin() const { return n_nodes; }
  int u_begin() const { return 2 * n_nodes; }
};

// One constrained DOF with a time program; inactive from t_release onwards.
struct Constraint {
  int dof;
  PiecewiseLinear value;
  double t_release = std::numeric_limits<double>::infinity();
};

class ConstraintSet {
 public:
  // Throws if the dof is already constrained.
  void add(int dof, PiecewiseLinear program,
           double t_release = std::numeric_limits<double>::infinity());
  void add_fixed(int dof, double value,
                 double t_release = std::numeric_limits<double>::infinity());
  bool has(int dof) const;
  std::size_t size() const { return constraints_.size(); }

  struct Active {
    std::vector<int> dofs;      // sorted
    std::vector<double> values; // aligned with dofs
  };
  Active active(double t) const;

 private:
  std::vector<Constraint> constraints_;
};

// Free/constrained partition of the DOF set at a fixed time.
struct ReducedMap {
  std::vector<int> full_to_red;  // -1 for constrained DOFs
  std::vector<int> red_to_full;
  int n_red = 0;

  bool same_partition(const ReducedMap& other) const {
    return full_to_red == other.full_to_red;
  }
};
ReducedMap build_reduced_map(int total, const ConstraintSet::Active& a);

// Imposes the active constraint values on the state vector.
void impose_values(VecX& v, const ConstraintSet::Active& a);

// Reduction of a linear system K x = b: drops constrained rows, lifts the
// right-hand side by -K_rc x_c. Returns the reduced matrix and rhs.
struct ReducedSystem {
  SpMat K;
  VecX b;
};
ReducedSystem apply_dirichlet(const std::vector<Triplet>& K_triplets,
                              const VecX& b, const ConstraintSet::Active& a,
                              const ReducedMap& map);

// Scatter of a reduced solution back to full size, constrained entries filled
// with their prescribed values.
VecX expand_solution(const VecX& x_red, const ConstraintSet::Active& a,
                     const ReducedMap& map);

}  // namespace smp

#endif
