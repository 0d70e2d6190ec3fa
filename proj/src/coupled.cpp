#include "smp/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smp {

namespace {

bool insulated(const CoupledProblem& pb, const Facet& fct) {
  return std::find(pb.insulated_regions.begin(), pb.insulated_regions.end(),
                   fct.region) != pb.insulated_regions.end();
}

}  // namespace

void CoupledProblem::check() const {
  if (!mesh) throw std::invalid_argument("CoupledProblem: no mesh");
  if (layout.n_nodes != mesh->n_nodes())
    throw std::invalid_argument("CoupledProblem: layout/mesh node mismatch");
  mech.check();
  thermal.check();
  coil.check();
  mech_bc.check();
  for (const NodeProgram& np : node_bc) {
    if (np.node < 0 || np.node >= layout.n_nodes)
      throw std::invalid_argument("NodeProgram: node out of range");
    if (np.comp < 0 || np.comp > 2)
      throw std::invalid_argument("NodeProgram: component out of range");
  }
}

ConstraintSet CoupledProblem::constraints() const {
  check();
  ConstraintSet cs;
  cs.add_fixed(layout.phi(ground_node(*mesh)), 0.0);
  mech_bc.add_constraints(*mesh, layout, cs);
  for (const ThetaProgram& tp : theta_bc) {
    if (tp.region < 0) {
      for (int n = 0; n < layout.n_nodes; ++n)
        cs.add(layout.theta(n), tp.value, tp.t_release);
    } else {
      const std::vector<int> nodes = mesh->region_nodes(tp.region);
      if (nodes.empty())
        throw std::invalid_argument("ThetaProgram: region " +
                                    std::to_string(tp.region) + " has no facets");
      for (int n : nodes) cs.add(layout.theta(n), tp.value, tp.t_release);
    }
  }
  for (const NodeProgram& np : node_bc)
    cs.add(layout.u(np.node, np.comp), np.value, np.t_release);
  return cs;
}

BlockScaling resolve_scaling(const CoupledProblem& pb, const BlockScaling& user,
                             double dt) {
  BlockScaling s = user;
  const double V = pb.mesh->volume();
  const double L = std::cbrt(V);
  if (s.phi <= 0.0) s.phi = pb.em.sigma0 * V / (L * L);
  if (s.theta <= 0.0) s.theta = pb.thermal.rho0 * pb.thermal.cp * V / dt;
  if (s.u <= 0.0) s.u = pb.mech.E_g * L * L;
  return s;
}

void SolverConfig::check() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt <= 0");
  if (!(newton_tol > 0.0 && newton_tol < 1.0))
    throw std::invalid_argument("SolverConfig: newton_tol outside (0, 1)");
  if (newton_max < 1) throw std::invalid_argument("SolverConfig: newton_max < 1");
  if (max_cuts < 0) throw std::invalid_argument("SolverConfig: max_cuts < 0");
}

CoupledState initial_state(const CoupledProblem& pb, double theta0) {
  pb.check();
  CoupledState st;
  st.v = VecX::Zero(pb.layout.total());
  for (int n = 0; n < pb.layout.n_nodes; ++n)
    st.v[pb.layout.theta(n)] = theta0;
  impose_values(st.v, pb.constraints().active(0.0));
  st.mat = MaterialState::virgin(*pb.mesh, theta0, pb.mech);
  return st;
}

VecX residual_G(const CoupledProblem& pb, const VecX& v, const VecX& v_old,
                double dt, double t, MaterialState& mat) {
  const Mesh& mesh = *pb.mesh;
  VecX r = VecX::Zero(pb.layout.total());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, pb.layout, v);
    const std::vector<QpData> qps = element_qps(mesh, e, f);
    const ElementFields f_old = gather_fields(mesh, e, pb.layout, v_old);

    const EmElement ee =
        em_element(qps, pb.em, pb.coil, t, pb.period_averaged, false);
    const ThermalElement te =
        thermal_element(qps, f_old.theta, dt, pb.thermal, false);
    const MechElement me =
        mech_element(qps, mat.committed[e], &mat.trial[e], pb.mech, false);

    const std::vector<int> pd = phi_dofs(mesh, e, pb.layout);
    const std::vector<int> td = theta_dofs(mesh, e, pb.layout);
    const std::vector<int> ud = u_dofs(mesh, e, pb.layout);
    for (std::size_t i = 0; i < pd.size(); ++i) r[pd[i]] += ee.r_phi[i];
    for (std::size_t i = 0; i < td.size(); ++i)
      r[td[i]] += te.r[i] - dt * ee.loss[i];
    for (std::size_t i = 0; i < ud.size(); ++i) r[ud[i]] += me.r_u[i];

    if (pb.em_body_force) {
      const BodyForceElement bf = em_body_element(qps, pb.em, pb.coil, t,
                                                  pb.period_averaged, false);
      for (std::size_t i = 0; i < ud.size(); ++i) r[ud[i]] += bf.r_u[i];
    }
  }

  if (pb.thermal.h_E != 0.0 || pb.thermal.eps_R != 0.0) {
    for (const Facet& fct : mesh.facets) {
      if (insulated(pb, fct)) continue;
      const ElementFields f = gather_fields(mesh, fct.elem, pb.layout, v);
      const ThermalFacet tf =
          thermal_facet(facet_qps(mesh, fct, f), pb.thermal, t, false);
      const std::vector<int> td = theta_dofs(mesh, fct.elem, pb.layout);
      for (std::size_t i = 0; i < td.size(); ++i) r[td[i]] += dt * tf.r[i];
    }
  }

  add_dead_tractions(mesh, pb.layout, v, pb.mech_bc, r);
  return r;
}

SpMat tangent_A(const CoupledProblem& pb, const VecX& v, double dt, double t,
                MaterialState& mat) {
  const Mesh& mesh = *pb.mesh;
  Assembler A(pb.layout.total());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, pb.layout, v);
    const std::vector<QpData> qps = element_qps(mesh, e, f);

    const EmElement ee =
        em_element(qps, pb.em, pb.coil, t, pb.period_averaged, true);
    const ThermalElement te =
        thermal_element(qps, f.theta, dt, pb.thermal, true);
    const MechElement me =
        mech_element(qps, mat.committed[e], &mat.trial[e], pb.mech, true);

    const std::vector<int> pd = phi_dofs(mesh, e, pb.layout);
    const std::vector<int> td = theta_dofs(mesh, e, pb.layout);
    const std::vector<int> ud = u_dofs(mesh, e, pb.layout);

    A.add_matrix(pd, pd, ee.K_pp);
    A.add_matrix(pd, td, ee.K_pt);
    A.add_matrix(pd, ud, ee.K_pu);

    A.add_matrix(td, pd, -dt * ee.W_p);
    A.add_matrix(td, td, te.T_tt - dt * ee.W_t);
    A.add_matrix(td, ud, te.T_tu - dt * ee.W_u);

    A.add_matrix(ud, ud, me.K_uu);
    A.add_matrix(ud, td, me.K_ut);

    if (pb.em_body_force) {
      const BodyForceElement bf =
          em_body_element(qps, pb.em, pb.coil, t, pb.period_averaged, true);
      A.add_matrix(ud, ud, bf.K_uu);
      A.add_matrix(ud, td, bf.K_ut);
      A.add_matrix(ud, pd, bf.K_up);
    }
  }

  if (pb.thermal.h_E != 0.0 || pb.thermal.eps_R != 0.0) {
    for (const Facet& fct : mesh.facets) {
      if (insulated(pb, fct)) continue;
      const ElementFields f = gather_fields(mesh, fct.elem, pb.layout, v);
      const ThermalFacet tf =
          thermal_facet(facet_qps(mesh, fct, f), pb.thermal, t, true);
      const std::vector<int> td = theta_dofs(mesh, fct.elem, pb.layout);
      const std::vector<int> ud = u_dofs(mesh, fct.elem, pb.layout);
      A.add_matrix(td, td, dt * tf.T_tt);
      A.add_matrix(td, ud, dt * tf.T_tu);
    }
  }
  return A.matrix();
}

double scaled_norm(const DofLayout& layout, const VecX& r,
                   const BlockScaling& s, const std::vector<int>& fixed_dofs) {
  std::vector<char> fixed(layout.total(), 0);
  for (int d : fixed_dofs) fixed[d] = 1;
  double np = 0.0, nt = 0.0, nu = 0.0;
  const int n = layout.n_nodes;
  for (int d = 0; d < layout.total(); ++d) {
    if (fixed[d]) continue;
    const double a = std::abs(r[d]);
    if (d < n)
      np = std::max(np, a);
    else if (d < 2 * n)
      nt = std::max(nt, a);
    else
      nu = std::max(nu, a);
  }
  return std::max({np / s.phi, nt / s.theta, nu / s.u});
}

double total_joule_power(const CoupledProblem& pb, const VecX& v, double t) {
  const EmSolution sol = current_and_losses(*pb.mesh, pb.layout, v, pb.em,
                                            pb.coil, t, pb.period_averaged);
  double P = 0.0;
  for (int e = 0; e < pb.mesh->n_elems(); ++e) {
    const ElementFields f = gather_fields(*pb.mesh, e, pb.layout, v);
    const std::vector<QpData> qps = element_qps(*pb.mesh, e, f);
    for (std::size_t q = 0; q < qps.size(); ++q)
      P += qps[q].wdet * sol.w_qp[e][q];
  }
  return P;
}

CoupledSolver::CoupledSolver(const CoupledProblem& pb, SolverConfig cfg)
    : pb_(&pb), cfg_(cfg) {
  pb.check();
  cfg_.check();
  cs_ = pb.constraints();
}

StepReport CoupledSolver::try_step(CoupledState& st, double dt) {
  const DofLayout& layout = pb_->layout;
  const double t_new = st.t + dt;
  StepReport rep;
  rep.dt_used = dt;
  rep.t = t_new;

  const ConstraintSet::Active active = cs_.active(t_new);
  VecX v = st.v;
  impose_values(v, active);

  // reduction partition for the delta system (all lifted values are zero);
  // staggered mode additionally freezes the exactly-solved potential DOFs
  ConstraintSet::Active red = active;
  if (cfg_.staggered) {
    std::vector<char> fixed(layout.total(), 0);
    for (int d : red.dofs) fixed[d] = 1;
    for (int n = 0; n < layout.n_nodes; ++n) fixed[layout.phi(n)] = 1;
    red.dofs.clear();
    for (int d = 0; d < layout.total(); ++d)
      if (fixed[d]) red.dofs.push_back(d);
  }
  red.values.assign(red.dofs.size(), 0.0);
  const ReducedMap map = build_reduced_map(layout.total(), red);

  const BlockScaling scales = resolve_scaling(*pb_, cfg_.scaling, dt);
  double norm0 = 0.0;
  for (int it = 0;; ++it) {
    VecX r;
    try {
      r = residual_G(*pb_, v, st.v, dt, t_new, st.mat);
    } catch (const std::runtime_error&) {
      return rep;  // element inversion: signal a step cut
    }
    const double nrm = scaled_norm(layout, r, scales, active.dofs);
    rep.residuals.push_back(nrm);
    rep.iterations = it;
    if (it == 0) norm0 = nrm;
    if (nrm <= std::max(cfg_.newton_tol * norm0, cfg_.newton_abs)) {
      rep.converged = true;
      break;
    }
    if (it == cfg_.newton_max) break;  // exhausted: signal a step cut

    if (cfg_.staggered) {
      const SpMat K = assemble_K_ele(*pb_->mesh, layout, v, pb_->em);
      const VecX F = assemble_F_ele(*pb_->mesh, layout, v, pb_->em, pb_->coil,
                                    t_new, pb_->period_averaged);
      const VecX phi = solve_potential(K, F, ground_node(*pb_->mesh));
      for (int n = 0; n < layout.n_nodes; ++n) v[layout.phi(n)] = phi[n];
      r = residual_G(*pb_, v, st.v, dt, t_new, st.mat);
    }

    const SpMat A = tangent_A(*pb_, v, dt, t_new, st.mat);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(A.nonZeros()));
    for (int c = 0; c < A.outerSize(); ++c)
      for (SpMat::InnerIterator itr(A, c); itr; ++itr)
        trips.emplace_back(static_cast<int>(itr.row()),
                           static_cast<int>(itr.col()), itr.value());
    const ReducedSystem rs = apply_dirichlet(trips, VecX(-r), red, map);

    if (!analyzed_ || !map.same_partition(last_map_)) {
      lu_.analyzePattern(rs.K);
      analyzed_ = true;
      last_map_ = map;
    }
    lu_.factorize(rs.K);
    if (lu_.info() != Eigen::Success) return rep;  // singular: step cut
    const VecX dx = lu_.solve(rs.b);
    for (int i = 0; i < map.n_red; ++i) v[map.red_to_full[i]] += dx[i];
  }

  if (rep.converged) {
    st.v = v;
    st.mat.commit_all();
    st.t = t_new;
    st.n += 1;
  }
  return rep;
}

StepReport CoupledSolver::advance(CoupledState& st) {
  double dt = cfg_.dt;
  for (int cut = 0; cut <= cfg_.max_cuts; ++cut) {
    StepReport rep = try_step(st, dt);
    rep.cuts = cut;
    if (rep.converged) return rep;
    dt *= 0.5;
  }
  throw std::runtime_error("coupled solver: step at t = " +
                           std::to_string(st.t) + " failed after " +
                           std::to_string(cfg_.max_cuts) + " halvings");
}

int CoupledSolver::run(CoupledState& st, double t_end,
                       const StepCallback& on_step) {
  int steps = 0;
  const double eps = 1.0e-12 * std::max(1.0, std::abs(t_end));
  while (st.t < t_end - eps) {
    const double dt_save = cfg_.dt;
    if (st.t + cfg_.dt > t_end) cfg_.dt = t_end - st.t;  // land on t_end
    StepReport rep;
    try {
      rep = advance(st);
    } catch (...) {
      cfg_.dt = dt_save;
      throw;
    }
    cfg_.dt = dt_save;
    ++steps;
    if (on_step) on_step(st, rep);
  }
  return steps;
}

}  // namespace smp
