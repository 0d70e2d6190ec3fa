// Reference elements: trilinear hex8 on [-1,1]^3 and linear tet4 on the unit
// simplex. Shape functions, quadrature rules, face parametrizations.

#ifndef SMP_ELEMENT_HPP
#define SMP_ELEMENT_HPP

#include <vector>

#include "smp/types.hpp"

namespace smp {

enum class ElemKind { Hex8, Tet4 };

int elem_node_count(ElemKind k);
int face_count(ElemKind k);
int face_node_count(ElemKind k, int face);
// Local node ids of a face, outward-oriented.
const int* face_nodes(ElemKind k, int face);

struct ShapeEval {
  VecX N;    // nnode shape values
  MatX dN;   // nnode x 3 reference gradients
};
ShapeEval shape_eval(ElemKind k, const Vec3& ref);

struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
};
// 2x2x2 Gauss for hex8 (sum of weights 8), 4-point rule for tet4 (sum 1/6).
const QuadratureRule& volume_rule(ElemKind k);

// Face quadrature in face coordinates (a,b): 2x2 Gauss on [-1,1]^2 for quad
// faces, 3-point rule on the unit triangle for tri faces.
struct FaceRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
};
const FaceRule& face_rule(ElemKind k);

// Affine map from face coordinates to element reference coordinates, chosen
// so that (d ref/da) x (d ref/db) points outward.
Vec3 face_ref_point(ElemKind k, int face, const Eigen::Vector2d& ab);
void face_ref_tangents(ElemKind k, int face, Vec3& dda, Vec3& ddb);

struct GradEval {
  MatX B;       // nnode x 3, rows are undeformed-configuration gradients of N_i
  double detJ;  // reference -> undeformed Jacobian determinant
};
// node_coords: nnode x 3. Throws on non-positive Jacobian.
GradEval physical_gradients(ElemKind k, const Vec3& ref, const MatX& node_coords);

}  // namespace smp

#endif
