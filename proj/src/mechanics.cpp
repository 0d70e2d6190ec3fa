#include "smp/mechanics.hpp"

#include <stdexcept>
#include <string>

namespace smp {

void MechBC::check() const {
  for (const auto& d : dirichlet) {
    const auto it = traction.find(d.region);
    if (it == traction.end()) continue;
    for (int c = 0; c < 3; ++c)
      if (d.comp[c] && it->second[c] != 0.0)
        throw std::invalid_argument(
            "MechBC: region " + std::to_string(d.region) + " component " +
            std::to_string(c) + " has both a displacement program and a traction");
  }
}

void MechBC::add_constraints(const Mesh& mesh, const DofLayout& layout,
                             ConstraintSet& cs) const {
  for (const auto& d : dirichlet) {
    const std::vector<int> nodes = mesh.region_nodes(d.region);
    if (nodes.empty())
      throw std::invalid_argument("MechBC: region " + std::to_string(d.region) +
                                  " has no facets");
    for (int n : nodes)
      for (int c = 0; c < 3; ++c)
        if (d.comp[c]) cs.add(layout.u(n, c), d.u_D[c], d.t_release);
  }
}

MaterialState MaterialState::virgin(const Mesh& mesh, double theta0,
                                    const MechParams& p) {
  MaterialState s;
  s.committed.resize(mesh.n_elems());
  for (int e = 0; e < mesh.n_elems(); ++e)
    s.committed[e].assign(volume_rule(mesh.kinds[e]).points.size(),
                          virgin_state(theta0, p));
  s.trial = s.committed;
  return s;
}

void MaterialState::commit_all() {
  for (std::size_t e = 0; e < committed.size(); ++e)
    for (std::size_t q = 0; q < committed[e].size(); ++q)
      commit(committed[e][q], trial[e][q]);
}

MechElement mech_element(const std::vector<QpData>& qps,
                         const std::vector<QpState>& committed,
                         std::vector<QpState>* trial, const MechParams& p,
                         bool with_tangent) {
  const int nn = static_cast<int>(qps.front().N.size());
  MechElement out;
  out.r_u = VecX::Zero(3 * nn);
  if (with_tangent) {
    out.K_uu = MatX::Zero(3 * nn, 3 * nn);
    out.K_ut = MatX::Zero(3 * nn, nn);
  }

  Mat9 A9;
  MatX W(9, 3 * nn);
  for (std::size_t qi = 0; qi < qps.size(); ++qi) {
    const QpData& q = qps[qi];
    const ReturnMapResult rm =
        return_mapping(q.F, q.theta, committed[qi], p, with_tangent);
    if (trial) (*trial)[qi] = rm.trial;
    out.any_plastic = out.any_plastic || rm.glassy_plastic || rm.rubbery_plastic;

    const Mat3 P = q.F * rm.st.S;  // first Piola-Kirchhoff
    for (int i = 0; i < nn; ++i)
      out.r_u.segment<3>(3 * i) += q.wdet * (P * q.B.row(i).transpose());

    if (!with_tangent) continue;

    // A9(a+3A, k+3K) = d P_aA / d F_kK = delta_ak S_KA + (F dS)_aA
    for (int c = 0; c < 9; ++c) {
      const int k = c % 3, K = c / 3;
      const Mat3 dS = Eigen::Map<const Mat3>(rm.st.dSdF.col(c).data());
      Mat3 dP = q.F * dS;
      dP.row(k) += rm.st.S.row(K);
      A9.col(c) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(dP.data());
    }
    W.setZero();
    for (int j = 0; j < nn; ++j)
      for (int K = 0; K < 3; ++K)
        for (int k = 0; k < 3; ++k) W(k + 3 * K, 3 * j + k) = q.B(j, K);
    out.K_uu.noalias() += q.wdet * W.transpose() * A9 * W;

    const Mat3 dPdt = q.F * rm.st.dSdTheta;
    for (int i = 0; i < nn; ++i) {
      const Vec3 col = q.wdet * (dPdt * q.B.row(i).transpose());
      out.K_ut.block(3 * i, 0, 3, nn) += col * q.N.transpose();
    }
  }
  return out;
}

Vec3 em_body_force(const QpData& q, const EmMaterial& mat, const CoilSpec& coil,
                   double t) {
  const CoilEval ce = a_source(coil, q.x[0], q.x[1], t, false);
  const Vec3 m = ce.da_dt + q.Finv.transpose() * q.grad_phi;  // spatial e = -m
  const Vec3 j = -mat.sigma(q.theta) * m;
  return j.cross(ce.b);
}

BodyForceElement em_body_element(const std::vector<QpData>& qps,
                                 const EmMaterial& mat, const CoilSpec& coil,
                                 double t, bool period_averaged,
                                 bool with_tangent) {
  const int nn = static_cast<int>(qps.front().N.size());
  BodyForceElement out;
  out.r_u = VecX::Zero(3 * nn);
  if (with_tangent) {
    out.K_uu = MatX::Zero(3 * nn, 3 * nn);
    out.K_ut = MatX::Zero(3 * nn, nn);
    out.K_up = MatX::Zero(3 * nn, nn);
  }
  // <cos wt (a_dc + b sin wt)> = 0: the averaged Lorentz force vanishes
  if (period_averaged) return out;

  for (const QpData& q : qps) {
    const CoilEval ce = a_source(coil, q.x[0], q.x[1], t, false);
    const Mat3 rate_grad = a_source_rate_gradient(coil, t, false);
    const double sigma = mat.sigma(q.theta);
    const Mat3 Fit = q.Finv.transpose();
    const Vec3 gp = Fit * q.grad_phi;  // spatial potential gradient
    const Vec3 m = ce.da_dt + gp;
    const Vec3 f = -sigma * q.J * m.cross(ce.b);  // reference force density

    for (int i = 0; i < nn; ++i)
      out.r_u.segment<3>(3 * i) -= q.wdet * q.N[i] * f;

    if (!with_tangent) continue;
    for (int jn = 0; jn < nn; ++jn) {
      const Vec3 bj = q.B.row(jn).transpose();
      // potential path: dm = F^-T B_j
      {
        const Vec3 dm = Fit * bj;
        const Vec3 df = -sigma * q.J * dm.cross(ce.b);
        for (int i = 0; i < nn; ++i)
          out.K_up.block(3 * i, jn, 3, 1) -= q.wdet * q.N[i] * df;
      }
      // temperature path: dsigma = sigma' N_j
      {
        const Vec3 df = -mat.dsigma_dtheta() * q.N[jn] * q.J * m.cross(ce.b);
        for (int i = 0; i < nn; ++i)
          out.K_ut.block(3 * i, jn, 3, 1) -= q.wdet * q.N[i] * df;
      }
      // displacement path
      for (int k = 0; k < 3; ++k) {
        const double dJ = q.J * q.Finv.col(k).dot(bj);
        const Vec3 dm =
            q.N[jn] * rate_grad.col(k) - gp[k] * (Fit * bj);
        const Vec3 df =
            -sigma * (dJ * m.cross(ce.b) + q.J * dm.cross(ce.b));
        for (int i = 0; i < nn; ++i)
          out.K_uu.block(3 * i, 3 * jn + k, 3, 1) -= q.wdet * q.N[i] * df;
      }
    }
  }
  return out;
}

void add_dead_tractions(const Mesh& mesh, const DofLayout& layout,
                        const VecX& v, const MechBC& bc, VecX& r) {
  for (const Facet& fct : mesh.facets) {
    const auto it = bc.traction.find(fct.region);
    if (it == bc.traction.end() || it->second.isZero(0.0)) continue;
    const ElementFields f = gather_fields(mesh, fct.elem, layout, v);
    const std::vector<FacetQp> fqs = facet_qps(mesh, fct, f);
    const std::vector<int> dofs = u_dofs(mesh, fct.elem, layout);
    const int nn = static_cast<int>(fqs.front().N.size());
    for (const FacetQp& fq : fqs)
      for (int i = 0; i < nn; ++i)
        for (int c = 0; c < 3; ++c)
          r[dofs[3 * i + c]] -= fq.warea * fq.N[i] * it->second[c];
  }
}

VecX mech_residual(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                   MaterialState& state, const MechParams& p, const MechBC& bc,
                   double t, const EmForceContext* em) {
  bc.check();
  VecX r = VecX::Zero(layout.total());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    const std::vector<QpData> qps = element_qps(mesh, e, f);
    const MechElement me =
        mech_element(qps, state.committed[e], &state.trial[e], p, false);
    const std::vector<int> dofs = u_dofs(mesh, e, layout);
    for (std::size_t i = 0; i < dofs.size(); ++i) r[dofs[i]] += me.r_u[i];
    if (em) {
      const BodyForceElement bf = em_body_element(
          qps, *em->mat, *em->coil, em->t, em->period_averaged, false);
      for (std::size_t i = 0; i < dofs.size(); ++i) r[dofs[i]] += bf.r_u[i];
    }
  }
  add_dead_tractions(mesh, layout, v, bc, r);
  (void)t;
  return r;
}

SpMat mech_tangent(const Mesh& mesh, const DofLayout& layout, const VecX& v,
                   MaterialState& state, const MechParams& p,
                   const EmForceContext* em) {
  Assembler asmb(layout.total());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    const std::vector<QpData> qps = element_qps(mesh, e, f);
    const MechElement me =
        mech_element(qps, state.committed[e], &state.trial[e], p, true);
    const std::vector<int> dofs = u_dofs(mesh, e, layout);
    asmb.add_matrix(dofs, me.K_uu);
    if (em) {
      const BodyForceElement bf = em_body_element(
          qps, *em->mat, *em->coil, em->t, em->period_averaged, true);
      asmb.add_matrix(dofs, bf.K_uu);
    }
  }
  return asmb.matrix();
}

Vec3 reaction_force(const Mesh& mesh, const DofLayout& layout,
                    const VecX& internal, int region) {
  const std::vector<int> nodes = mesh.region_nodes(region);
  if (nodes.empty())
    throw std::invalid_argument("reaction_force: region " +
                                std::to_string(region) + " has no facets");
  Vec3 out = Vec3::Zero();
  for (int n : nodes)
    for (int c = 0; c < 3; ++c) out[c] += internal[layout.u(n, c)];
  return out;
}

}  // namespace smp
