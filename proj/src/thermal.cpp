#include "smp/thermal.hpp"

#include <cmath>
#include <stdexcept>

namespace smp {

ThermalElement thermal_element(const std::vector<QpData>& qps,
                               const VecX& theta_old, double dt,
                               const ThermalParams& p, bool with_tangent) {
  const int nn = qps.empty() ? 0 : static_cast<int>(qps[0].N.size());
  ThermalElement out;
  out.r = VecX::Zero(nn);
  if (with_tangent) {
    out.T_tt = MatX::Zero(nn, nn);
    out.T_tu = MatX::Zero(nn, 3 * nn);
  }
  const double rc = p.rho0 * p.cp;
  const double dkap = p.dkappa_dtheta();

  for (const QpData& q : qps) {
    const double kap = p.kappa(q.theta);
    const Mat3 FiFt = q.Finv * q.Finv.transpose();
    const Mat3 kappa_L = kap * q.J * FiFt;
    const double dtheta_qp = q.theta - q.N.dot(theta_old);
    const Vec3 flux = kappa_L * q.grad_theta;
    out.r += q.wdet * (rc * dtheta_qp * q.N + dt * (q.B * flux));
    if (!with_tangent) continue;

    out.T_tt += q.wdet * (rc * (q.N * q.N.transpose()) +
                          dt * (q.B * kappa_L * q.B.transpose()));
    for (int j = 0; j < nn; ++j) {
      const Vec3 Bj = q.B.row(j).transpose();
      if (dkap != 0.0) {
        out.T_tt.col(j) +=
            q.wdet * dt * (dkap * q.N[j] * q.J) * (q.B * (FiFt * q.grad_theta));
      }
      for (int k = 0; k < 3; ++k) {
        Mat3 dF = Mat3::Zero();
        dF.row(k) = Bj.transpose();
        const double dJ = q.J * q.Finv.col(k).dot(Bj);
        const Mat3 dFinv = -q.Finv * dF * q.Finv;
        const Mat3 dkappa_L =
            kap * (dJ * FiFt + q.J * (dFinv * q.Finv.transpose() +
                                      q.Finv * dFinv.transpose()));
        out.T_tu.col(3 * j + k) +=
            q.wdet * dt * (q.B * (dkappa_L * q.grad_theta));
      }
    }
  }
  return out;
}

ThermalFacet thermal_facet(const std::vector<FacetQp>& qps,
                           const ThermalParams& p, double t,
                           bool with_tangent) {
  const int nn = qps.empty() ? 0 : static_cast<int>(qps[0].N.size());
  ThermalFacet out;
  out.r = VecX::Zero(nn);
  if (with_tangent) {
    out.T_tt = MatX::Zero(nn, nn);
    out.T_tu = MatX::Zero(nn, 3 * nn);
  }
  const double theta_B = p.theta_B(t);
  const double es = p.eps_R * p.sigma_R;

  for (const FacetQp& q : qps) {
    const double th = q.theta;
    const double flux = p.h_E * (th - theta_B) +
                        es * (th * th * th * th -
                              p.theta_R * p.theta_R * p.theta_R * p.theta_R);
    out.r += q.warea * q.area_scale * flux * q.N;
    if (!with_tangent) continue;

    const double dflux = p.h_E + es * 4.0 * th * th * th;
    out.T_tt += q.warea * q.area_scale * dflux * (q.N * q.N.transpose());
    // geometric path: d(area_scale) with qn = F^-T n_L
    const Vec3 qn = q.Finv.transpose() * q.n_L;
    const double qn_norm = qn.norm();
    for (int j = 0; j < nn; ++j) {
      const Vec3 Bj = q.B.row(j).transpose();
      for (int k = 0; k < 3; ++k) {
        const double dJ = q.J * q.Finv.col(k).dot(Bj);
        // delta qn = -F^-T dF^T qn with dF = e_k Bj^T
        const Vec3 dqn = -qn[k] * (q.Finv.transpose() * Bj);
        const double darea = dJ * qn_norm + q.J * qn.dot(dqn) / qn_norm;
        out.T_tu.col(3 * j + k) += q.warea * darea * flux * q.N;
      }
    }
  }
  return out;
}

SpMat assemble_M_the(const Mesh& mesh, const ThermalParams& p) {
  const DofLayout layout{mesh.n_nodes()};
  Assembler out(mesh.n_nodes());
  const double rc = p.rho0 * p.cp;
  for (int e = 0; e < mesh.n_elems(); ++e) {
    ElementFields f;
    const int nn = mesh.nodes_of(e);
    f.phi = VecX::Zero(nn);
    f.theta = VecX::Zero(nn);
    f.u = MatX::Zero(nn, 3);
    MatX m = MatX::Zero(nn, nn);
    for (const QpData& q : element_qps(mesh, e, f))
      m += q.wdet * rc * (q.N * q.N.transpose());
    out.add_matrix(phi_dofs(mesh, e, layout), m);  // node indexing
  }
  return out.matrix();
}

SpMat assemble_K_the(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                     const ThermalParams& p) {
  Assembler out(mesh.n_nodes());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    const int nn = mesh.nodes_of(e);
    MatX k = MatX::Zero(nn, nn);
    for (const QpData& q : element_qps(mesh, e, f)) {
      const Mat3 kappa_L =
          p.kappa(q.theta) * q.J * q.Finv * q.Finv.transpose();
      k += q.wdet * (q.B * kappa_L * q.B.transpose());
    }
    out.add_matrix(phi_dofs(mesh, e, layout), k);  // node indexing
  }
  return out.matrix();
}

BoundaryTerms boundary_terms(const Mesh& mesh, const DofLayout& layout,
                             const VecX& v, const ThermalParams& p, double t) {
  Assembler mat(mesh.n_nodes());
  Assembler vec(mesh.n_nodes());
  for (const Facet& fac : mesh.facets) {
    const ElementFields f = gather_fields(mesh, fac.elem, layout, v);
    const ThermalFacet tf = thermal_facet(facet_qps(mesh, fac, f), p, t, true);
    const std::vector<int> dofs = phi_dofs(mesh, fac.elem, layout);
    mat.add_matrix(dofs, tf.T_tt);
    vec.add_vector(dofs, tf.r);
  }
  return {mat.matrix(), vec.vector()};
}

VecX thermal_residual(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                      const VecX& theta_old, double dt,
                      const std::vector<std::vector<double>>& w_qp,
                      const ThermalParams& p, double t) {
  if (!(dt > 0.0)) throw std::invalid_argument("thermal_residual: dt <= 0");
  Assembler out(mesh.n_nodes());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    const auto qps = element_qps(mesh, e, f);
    const int nn = mesh.nodes_of(e);
    VecX th_old(nn);
    for (int i = 0; i < nn; ++i) th_old[i] = theta_old[mesh.elems[e][i]];
    const ThermalElement te = thermal_element(qps, th_old, dt, p, false);
    VecX r = te.r;
    if (!w_qp.empty()) {
      for (std::size_t qi = 0; qi < qps.size(); ++qi)
        r -= dt * qps[qi].wdet * w_qp[e][qi] * qps[qi].N;
    }
    out.add_vector(phi_dofs(mesh, e, layout), r);
  }
  for (const Facet& fac : mesh.facets) {
    const ElementFields f = gather_fields(mesh, fac.elem, layout, v);
    const ThermalFacet tf = thermal_facet(facet_qps(mesh, fac, f), p, t, false);
    VecX r = dt * tf.r;
    out.add_vector(phi_dofs(mesh, fac.elem, layout), r);
  }
  return out.vector();
}

NondimReport nondim_report(const ThermalParams& p, double L_c, double w_ref,
                           double dtheta_band, double dt) {
  if (!(L_c > 0.0)) throw std::invalid_argument("nondim_report: L_c <= 0");
  NondimReport r;
  r.L_c = L_c;
  r.T_c = p.rho0 * p.cp * L_c * L_c / p.kappa0;
  r.source_storage_ratio = w_ref * r.T_c / (p.rho0 * p.cp * dtheta_band);
  r.per_step_band_ok = w_ref * dt / (p.rho0 * p.cp) <= dtheta_band;
  return r;
}

}  // namespace smp
