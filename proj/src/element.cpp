#include "smp/element.hpp"

#include <cmath>
#include <stdexcept>

#include "smp/kinematics.hpp"

namespace smp {

namespace {

// Hex8 node order: bottom face (z=-1) counterclockwise 0-3, top face 4-7.
constexpr double kHexRef[8][3] = {
    {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
    {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

constexpr int kHexFaces[6][4] = {
    {0, 3, 7, 4},   // x = -1
    {1, 2, 6, 5},   // x = +1
    {0, 1, 5, 4},   // y = -1
    {2, 3, 7, 6},   // y = +1
    {0, 1, 2, 3},   // z = -1
    {4, 5, 6, 7}};  // z = +1

constexpr int kTetFaces[4][3] = {
    {1, 2, 3},   // opposite node 0
    {0, 2, 3},   // opposite node 1
    {0, 1, 3},   // opposite node 2
    {0, 1, 2}};  // opposite node 3

}  // namespace

int elem_node_count(ElemKind k) { return k == ElemKind::Hex8 ? 8 : 4; }
int face_count(ElemKind k) { return k == ElemKind::Hex8 ? 6 : 4; }
int face_node_count(ElemKind k, int) { return k == ElemKind::Hex8 ? 4 : 3; }

const int* face_nodes(ElemKind k, int face) {
  if (face < 0 || face >= face_count(k)) throw std::out_of_range("face id");
  return k == ElemKind::Hex8 ? kHexFaces[face] : kTetFaces[face];
}

ShapeEval shape_eval(ElemKind k, const Vec3& p) {
  ShapeEval s;
  if (k == ElemKind::Hex8) {
    s.N.resize(8);
    s.dN.resize(8, 3);
    for (int i = 0; i < 8; ++i) {
      const double gx = kHexRef[i][0], gy = kHexRef[i][1], gz = kHexRef[i][2];
      const double fx = 1.0 + gx * p.x();
      const double fy = 1.0 + gy * p.y();
      const double fz = 1.0 + gz * p.z();
      s.N(i) = 0.125 * fx * fy * fz;
      s.dN(i, 0) = 0.125 * gx * fy * fz;
      s.dN(i, 1) = 0.125 * fx * gy * fz;
      s.dN(i, 2) = 0.125 * fx * fy * gz;
    }
  } else if (k == ElemKind::Tet4) {
    s.N.resize(4);
    s.dN.resize(4, 3);
    s.N << 1.0 - p.x() - p.y() - p.z(), p.x(), p.y(), p.z();
    s.dN << -1, -1, -1, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  } else {
    throw std::invalid_argument("unknown element kind");
  }
  return s;
}

const QuadratureRule& volume_rule(ElemKind k) {
  static const QuadratureRule hex = [] {
    QuadratureRule r;
    const double g = 1.0 / std::sqrt(3.0);
    for (int i = -1; i <= 1; i += 2)
      for (int j = -1; j <= 1; j += 2)
        for (int l = -1; l <= 1; l += 2) {
          r.points.emplace_back(g * i, g * j, g * l);
          r.weights.push_back(1.0);
        }
    return r;
  }();
  static const QuadratureRule tet = [] {
    QuadratureRule r;
    const double a = (5.0 - std::sqrt(5.0)) / 20.0;
    const double b = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
    r.points = {{a, a, a}, {b, a, a}, {a, b, a}, {a, a, b}};
    r.weights = {1.0 / 24.0, 1.0 / 24.0, 1.0 / 24.0, 1.0 / 24.0};
    return r;
  }();
  return k == ElemKind::Hex8 ? hex : tet;
}

const FaceRule& face_rule(ElemKind k) {
  static const FaceRule quad = [] {
    FaceRule r;
    const double g = 1.0 / std::sqrt(3.0);
    for (int i = -1; i <= 1; i += 2)
      for (int j = -1; j <= 1; j += 2) {
        r.points.emplace_back(g * i, g * j);
        r.weights.push_back(1.0);
      }
    return r;
  }();
  static const FaceRule tri = [] {
    FaceRule r;
    r.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0},
                {1.0 / 6.0, 2.0 / 3.0}};
    r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return r;
  }();
  return k == ElemKind::Hex8 ? quad : tri;
}

Vec3 face_ref_point(ElemKind k, int face, const Eigen::Vector2d& ab) {
  const double a = ab.x(), b = ab.y();
  if (k == ElemKind::Hex8) {
    switch (face) {
      case 0: return {-1.0, b, a};
      case 1: return {1.0, a, b};
      case 2: return {a, -1.0, b};
      case 3: return {b, 1.0, a};
      case 4: return {b, a, -1.0};
      case 5: return {a, b, 1.0};
    }
  } else {
    switch (face) {
      case 0: return {1.0 - a - b, a, b};
      case 1: return {0.0, b, a};
      case 2: return {a, 0.0, b};
      case 3: return {b, a, 0.0};
    }
  }
  throw std::out_of_range("face id");
}

void face_ref_tangents(ElemKind k, int face, Vec3& dda, Vec3& ddb) {
  if (k == ElemKind::Hex8) {
    switch (face) {
      case 0: dda = {0, 0, 1}; ddb = {0, 1, 0}; return;
      case 1: dda = {0, 1, 0}; ddb = {0, 0, 1}; return;
      case 2: dda = {1, 0, 0}; ddb = {0, 0, 1}; return;
      case 3: dda = {0, 0, 1}; ddb = {1, 0, 0}; return;
      case 4: dda = {0, 1, 0}; ddb = {1, 0, 0}; return;
      case 5: dda = {1, 0, 0}; ddb = {0, 1, 0}; return;
    }
  } else {
    switch (face) {
      case 0: dda = {-1, 1, 0}; ddb = {-1, 0, 1}; return;
      case 1: dda = {0, 0, 1}; ddb = {0, 1, 0}; return;
      case 2: dda = {1, 0, 0}; ddb = {0, 0, 1}; return;
      case 3: dda = {0, 1, 0}; ddb = {1, 0, 0}; return;
    }
  }
  throw std::out_of_range("face id");
}

GradEval physical_gradients(ElemKind k, const Vec3& ref, const MatX& X) {
  const ShapeEval s = shape_eval(k, ref);
  const Mat3 jac = (s.dN.transpose() * X).transpose();  // dX/dref
  const double det = jac.determinant();
  if (det <= 0.0) throw std::runtime_error("inverted element: detJ <= 0");
  const Mat3 jinv = inverse3(jac, det);
  GradEval g;
  g.B = s.dN * jinv;  // grad_X N_i = J^-T dN_i (rowwise)
  g.detJ = det;
  return g;
}

}  // namespace smp
