#include "smp/electrokinetics.hpp"

#include <algorithm>
#include <stdexcept>

#include "smp/linear_solver.hpp"

namespace smp {

EmQp em_eval_qp(const QpData& q, const EmMaterial& mat, const CoilSpec& coil,
                double t, bool period_averaged) {
  EmQp e;
  e.sigma = mat.sigma(q.theta);
  const CoilEval src = a_source(coil, q.x.x(), q.x.y(), t, period_averaged);
  e.A_dot = q.F.transpose() * src.da_dt;
  e.g = e.A_dot + q.grad_phi;
  e.m = q.Finv.transpose() * e.g;
  e.sigma_L = e.sigma * q.J * q.Finv * q.Finv.transpose();
  e.J_L = -e.sigma_L * e.g;
  const double factor = period_averaged ? 0.5 : 1.0;
  e.w = factor * q.J * e.sigma * e.m.squaredNorm();
  return e;
}

EmElement em_element(const std::vector<QpData>& qps, const EmMaterial& mat,
                     const CoilSpec& coil, double t, bool period_averaged,
                     bool with_tangent) {
  const int nn = qps.empty() ? 0 : static_cast<int>(qps[0].N.size());
  EmElement out;
  out.r_phi = VecX::Zero(nn);
  out.loss = VecX::Zero(nn);
  if (with_tangent) {
    out.K_pp = MatX::Zero(nn, nn);
    out.K_pt = MatX::Zero(nn, nn);
    out.K_pu = MatX::Zero(nn, 3 * nn);
    out.W_p = MatX::Zero(nn, nn);
    out.W_t = MatX::Zero(nn, nn);
    out.W_u = MatX::Zero(nn, 3 * nn);
  }
  const double factor = period_averaged ? 0.5 : 1.0;
  const double dsig = mat.dsigma_dtheta();

  for (const QpData& q : qps) {
    const EmQp e = em_eval_qp(q, mat, coil, t, period_averaged);
    const Vec3 sLg = e.sigma_L * e.g;
    out.r_phi += q.wdet * (q.B * sLg);
    out.loss += q.wdet * e.w * q.N;
    if (!with_tangent) continue;

    const Mat3 FiFt = q.Finv * q.Finv.transpose();
    const Vec3 da_dt =
        a_source(coil, q.x.x(), q.x.y(), t, period_averaged).da_dt;
    const Mat3 rate_grad = a_source_rate_gradient(coil, t, period_averaged);

    for (int j = 0; j < nn; ++j) {
      const Vec3 Bj = q.B.row(j).transpose();
      // phi column: delta g = B_j
      const Vec3 dm_phi = q.Finv.transpose() * Bj;
      out.K_pp.col(j) += q.wdet * (q.B * (e.sigma_L * Bj));
      out.W_p.col(j) +=
          q.wdet * (factor * 2.0 * q.J * e.sigma * e.m.dot(dm_phi)) * q.N;
      // theta column: conductivity path
      const double ds = dsig * q.N[j];
      out.K_pt.col(j) += q.wdet * (ds * q.J) * (q.B * (FiFt * e.g));
      out.W_t.col(j) += q.wdet * (factor * ds * q.J * e.m.squaredNorm()) * q.N;
      // u columns: delta F = e_k B_j^T
      for (int k = 0; k < 3; ++k) {
        Mat3 dF = Mat3::Zero();
        dF.row(k) = Bj.transpose();
        const double dJ = q.J * q.Finv.col(k).dot(Bj);
        const Mat3 dFinv = -q.Finv * dF * q.Finv;
        const Mat3 dsigma_L =
            e.sigma * (dJ * FiFt + q.J * (dFinv * q.Finv.transpose() +
                                          q.Finv * dFinv.transpose()));
        const Vec3 dA_dot =
            dF.transpose() * da_dt + q.N[j] * (q.F.transpose() * rate_grad.col(k));
        const Vec3 dm = dFinv.transpose() * e.g + q.Finv.transpose() * dA_dot;
        const double dw = factor * e.sigma *
                          (dJ * e.m.squaredNorm() + 2.0 * q.J * e.m.dot(dm));
        out.K_pu.col(3 * j + k) +=
            q.wdet * (q.B * (dsigma_L * e.g + e.sigma_L * dA_dot));
        out.W_u.col(3 * j + k) += q.wdet * dw * q.N;
      }
    }
  }
  return out;
}

SpMat assemble_K_ele(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                     const EmMaterial& mat) {
  Assembler out(mesh.n_nodes());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    const auto qps = element_qps(mesh, e, f);
    const int nn = mesh.nodes_of(e);
    MatX k = MatX::Zero(nn, nn);
    for (const QpData& q : qps) {
      const Mat3 sigma_L =
          mat.sigma(q.theta) * q.J * q.Finv * q.Finv.transpose();
      k += q.wdet * (q.B * sigma_L * q.B.transpose());
    }
    out.add_matrix(phi_dofs(mesh, e, layout), k);
  }
  return out.matrix();
}

VecX assemble_F_ele(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                    const EmMaterial& mat, const CoilSpec& coil, double t,
                    bool period_averaged) {
  Assembler out(mesh.n_nodes());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    const auto qps = element_qps(mesh, e, f);
    const int nn = mesh.nodes_of(e);
    VecX load = VecX::Zero(nn);
    for (const QpData& q : qps) {
      const EmQp emq = em_eval_qp(q, mat, coil, t, period_averaged);
      load += q.wdet * (q.B * (emq.sigma_L * emq.A_dot));
    }
    out.add_vector(phi_dofs(mesh, e, layout), load);
  }
  return out.vector();
}

int ground_node(const Mesh& mesh) {
  int g = mesh.n_nodes();
  for (const Facet& f : mesh.facets)
    for (int id : mesh.facet_node_ids(f)) g = std::min(g, id);
  return g == mesh.n_nodes() ? 0 : g;
}

VecX solve_potential(const SpMat& K, const VecX& F, int ground) {
  const int n = static_cast<int>(K.rows());
  if (ground < 0 || ground >= n)
    throw std::invalid_argument("solve_potential: ground node out of range");
  std::vector<Triplet> trips;
  trips.reserve(K.nonZeros());
  for (int col = 0; col < K.outerSize(); ++col)
    for (SpMat::InnerIterator it(K, col); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  ConstraintSet cs;
  cs.add_fixed(ground, 0.0);
  const auto active = cs.active(0.0);
  const ReducedMap map = build_reduced_map(n, active);
  const ReducedSystem rs = apply_dirichlet(trips, -F, active, map);
  DirectSolver solver;
  if (!solver.factor(rs.K, 0))
    throw std::runtime_error("solve_potential: floating conductor, no ground");
  return expand_solution(solver.solve(rs.b), active, map);
}

EmSolution current_and_losses(const Mesh& mesh, const DofLayout& layout,
                              const VecX& v, const EmMaterial& mat,
                              const CoilSpec& coil, double t,
                              bool period_averaged) {
  EmSolution sol;
  sol.phi = v.segment(layout.phi_begin(), mesh.n_nodes());
  sol.J_qp.resize(mesh.n_elems());
  sol.w_qp.resize(mesh.n_elems());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    for (const QpData& q : element_qps(mesh, e, f)) {
      const EmQp emq = em_eval_qp(q, mat, coil, t, period_averaged);
      sol.J_qp[e].push_back(emq.J_L);
      sol.w_qp[e].push_back(emq.w);
    }
  }
  return sol;
}

}  // namespace smp
