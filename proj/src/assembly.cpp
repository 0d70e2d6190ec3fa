#include "smp/assembly.hpp"

#include <stdexcept>

namespace smp {

void Assembler::add_matrix(const std::vector<int>& dofs, const MatX& local) {
  add_matrix(dofs, dofs, local);
}

void Assembler::add_matrix(const std::vector<int>& rows,
                           const std::vector<int>& cols, const MatX& local) {
  if (local.rows() != static_cast<Eigen::Index>(rows.size()) ||
      local.cols() != static_cast<Eigen::Index>(cols.size()))
    throw std::invalid_argument("local matrix size does not match dof lists");
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      trips_.emplace_back(rows[i], cols[j], local(i, j));
}

void Assembler::add_vector(const std::vector<int>& dofs, const VecX& local) {
  if (local.size() != static_cast<Eigen::Index>(dofs.size()))
    throw std::invalid_argument("local vector size does not match dof list");
  for (std::size_t i = 0; i < dofs.size(); ++i) vec_[dofs[i]] += local[i];
}

SpMat Assembler::matrix() const {
  SpMat m(n_, n_);
  m.setFromTriplets(trips_.begin(), trips_.end());
  return m;
}

void assemble(const Mesh& mesh, const ElementKernel& kernel, Assembler& out) {
  for (int e = 0; e < mesh.n_elems(); ++e) {
    ElementContribution c = kernel(e);
    if (c.mat.size() > 0) out.add_matrix(c.dofs, c.mat);
    if (c.vec.size() > 0) out.add_vector(c.dofs, c.vec);
  }
}

ElementFields gather_fields(const Mesh& mesh, int e, const DofLayout& layout,
                            const VecX& v) {
  const int nn = mesh.nodes_of(e);
  ElementFields f;
  f.phi.resize(nn);
  f.theta.resize(nn);
  f.u.resize(nn, 3);
  for (int i = 0; i < nn; ++i) {
    const int n = mesh.elems[e][i];
    f.phi[i] = v[layout.phi(n)];
    f.theta[i] = v[layout.theta(n)];
    for (int c = 0; c < 3; ++c) f.u(i, c) = v[layout.u(n, c)];
  }
  return f;
}

namespace {

void fill_point_state(const ShapeEval& s, const GradEval& g, const MatX& coords,
                      const ElementFields& f, QpData& q) {
  q.N = s.N;
  q.B = g.B;
  q.X = (coords.transpose() * s.N);
  const Vec3 uq = f.u.transpose() * s.N;
  q.x = q.X + uq;
  const Mat3 grad_u = f.u.transpose() * g.B;  // du_i/dX_j
  q.F = Mat3::Identity() + grad_u;
  q.J = q.F.determinant();
  if (q.J <= 1e-12) throw std::runtime_error("element inversion: det F <= 0");
  q.Finv = inverse3(q.F, q.J);
  q.theta = f.theta.dot(s.N);
  q.grad_theta = q.B.transpose() * f.theta;
  q.grad_phi = q.B.transpose() * f.phi;
}

}  // namespace

std::vector<QpData> element_qps(const Mesh& mesh, int e,
                                const ElementFields& f) {
  const ElemKind k = mesh.kinds[e];
  const MatX coords = mesh.elem_coords(e);
  const QuadratureRule& rule = volume_rule(k);
  std::vector<QpData> out(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const ShapeEval s = shape_eval(k, rule.points[q]);
    const GradEval g = physical_gradients(k, rule.points[q], coords);
    fill_point_state(s, g, coords, f, out[q]);
    out[q].wdet = rule.weights[q] * g.detJ;
  }
  return out;
}

std::vector<FacetQp> facet_qps(const Mesh& mesh, const Facet& facet,
                               const ElementFields& f) {
  const int e = facet.elem;
  const ElemKind k = mesh.kinds[e];
  const MatX coords = mesh.elem_coords(e);
  const FaceRule& rule = face_rule(k);
  Vec3 dda, ddb;
  face_ref_tangents(k, facet.face, dda, ddb);

  std::vector<FacetQp> out(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec3 ref = face_ref_point(k, facet.face, rule.points[q]);
    const ShapeEval s = shape_eval(k, ref);
    const GradEval g = physical_gradients(k, ref, coords);

    // undeformed surface tangents and outward normal
    const Mat3 jac = coords.transpose() * s.dN;  // dX/dref
    const Vec3 ta = jac * dda;
    const Vec3 tb = jac * ddb;
    const Vec3 nw = ta.cross(tb);
    const double area = nw.norm();
    if (area <= 0.0) throw std::runtime_error("degenerate boundary facet");

    FacetQp& p = out[q];
    QpData tmp;
    fill_point_state(s, g, coords, f, tmp);
    p.N = tmp.N;
    p.B = tmp.B;
    p.X = tmp.X;
    p.F = tmp.F;
    p.J = tmp.J;
    p.Finv = tmp.Finv;
    p.theta = tmp.theta;
    p.warea = rule.weights[q] * area;
    p.n_L = nw / area;
    p.area_scale = p.J * (p.Finv.transpose() * p.n_L).norm();
  }
  return out;
}

std::vector<int> phi_dofs(const Mesh& mesh, int e, const DofLayout& layout) {
  const int nn = mesh.nodes_of(e);
  std::vector<int> d(nn);
  for (int i = 0; i < nn; ++i) d[i] = layout.phi(mesh.elems[e][i]);
  return d;
}

std::vector<int> theta_dofs(const Mesh& mesh, int e, const DofLayout& layout) {
  const int nn = mesh.nodes_of(e);
  std::vector<int> d(nn);
  for (int i = 0; i < nn; ++i) d[i] = layout.theta(mesh.elems[e][i]);
  return d;
}

std::vector<int> u_dofs(const Mesh& mesh, int e, const DofLayout& layout) {
  const int nn = mesh.nodes_of(e);
  std::vector<int> d(3 * nn);
  for (int i = 0; i < nn; ++i)
    for (int c = 0; c < 3; ++c) d[3 * i + c] = layout.u(mesh.elems[e][i], c);
  return d;
}

}  // namespace smp
