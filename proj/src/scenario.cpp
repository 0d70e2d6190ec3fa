#include "smp/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "smp/electrokinetics.hpp"

namespace smp {

namespace {

// Nodes lying on the line y = +r (sign > 0) or y = -r of a tube mesh; these
// are the contact lines of the crimping plates. n_circ is a multiple of 4 so
// the extreme-y nodes exist exactly.
std::vector<int> plate_line_nodes(const Mesh& mesh, double r, int sign) {
  const double tol = 1.0e-9 * r;
  std::vector<int> out;
  for (int i = 0; i < mesh.n_nodes(); ++i)
    if (sign * mesh.nodes[i][1] >= r - tol) out.push_back(i);
  if (out.empty())
    throw std::logic_error("plate_line_nodes: no nodes on the plate line");
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("scenario: cannot open '" + path + "'");
  return os;
}

}  // namespace

std::vector<std::string> record_header() {
  return {"t",        "theta", "theta_min", "theta_max",   "eps_yy",
          "sigma_yy", "pk2_yy", "u_y",      "F_y",         "joule_power",
          "glassy_vm"};
}

std::vector<double> probe_row(const CoupledProblem& pb, const CoupledState& st,
                              const ProbeSpec& ps) {
  const Mesh& mesh = *pb.mesh;
  const DofLayout& L = pb.layout;

  double tmin = std::numeric_limits<double>::infinity();
  double tmax = -tmin, tsum = 0.0;
  for (int i = 0; i < L.n_nodes; ++i) {
    const double th = st.v[L.theta(i)];
    tmin = std::min(tmin, th);
    tmax = std::max(tmax, th);
    tsum += th;
  }

  const double u_p = st.v[L.u(ps.u_node, ps.comp)];

  // Probe stresses re-evaluated from the committed internal variables.
  const ElementFields f = gather_fields(mesh, ps.elem, L, st.v);
  const std::vector<QpData> qps = element_qps(mesh, ps.elem, f);
  const QpData& q = qps.at(ps.qp);
  const ReturnMapResult rm = return_mapping(
      q.F, q.theta, st.mat.committed[ps.elem][ps.qp], pb.mech, false);
  const Mat3 sigma = (q.F * rm.st.S * q.F.transpose()) / q.J;

  // Grip reaction: the u-row residual at constrained DOFs is internal minus
  // applied force.
  MaterialState scratch = st.mat;
  const EmForceContext em{&pb.em, &pb.coil, st.t, pb.period_averaged};
  const VecX r = mech_residual(mesh, L, st.v, scratch, pb.mech, pb.mech_bc,
                               st.t, pb.em_body_force ? &em : nullptr);
  double F_grip = 0.0;
  for (int nd : ps.force_nodes) F_grip += r[L.u(nd, ps.comp)];

  return {st.t,
          tsum / L.n_nodes,
          tmin,
          tmax,
          u_p / ps.L_ref,
          sigma(ps.comp, ps.comp),
          rm.st.S(ps.comp, ps.comp),
          u_p,
          F_grip,
          total_joule_power(pb, st.v, st.t),
          rm.glassy_vm};
}

ScenarioProblem build_sec(const ScenarioConfig& cfg) {
  cfg.check();
  ScenarioProblem sp;
  sp.mesh = std::make_unique<Mesh>(
      make_box(1, 1, 1, cfg.edge, cfg.edge, cfg.edge));
  sp.pb.mesh = sp.mesh.get();
  sp.pb.layout = DofLayout{sp.mesh->n_nodes()};
  sp.pb.mech = cfg.mech;
  sp.pb.thermal = cfg.thermal;
  sp.pb.em = cfg.em;
  sp.pb.coil = cfg.coil;
  sp.pb.period_averaged = cfg.period_averaged;
  sp.pb.em_body_force = cfg.em_body_force;

  // Symmetry supports on the three coordinate faces, stretch program on y = L.
  DirichletProgram x0;  // region 0: x = 0
  x0.region = 0;
  x0.comp = {true, false, false};
  DirichletProgram y0;  // region 2: y = 0
  y0.region = 2;
  y0.comp = {false, true, false};
  DirichletProgram z0;  // region 4: z = 0
  z0.region = 4;
  z0.comp = {false, false, true};
  DirichletProgram grip;  // region 3: y = L
  grip.region = 3;
  grip.comp = {false, true, false};
  grip.u_D[1] = cfg.grip;
  grip.t_release = cfg.grip_release;
  sp.pb.mech_bc.dirichlet = {x0, y0, z0, grip};

  if (cfg.mode == "imposed") {
    sp.pb.theta_bc = {ThetaProgram{-1, cfg.theta_program,
                                   std::numeric_limits<double>::infinity()}};
  }
  // In coupled mode the cube exchanges heat with the ambient program
  // cfg.thermal.theta_B (the imposed schedule by default) instead.

  sp.theta0 = cfg.theta_program(0.0);
  sp.probes.elem = 0;
  sp.probes.qp = 0;
  sp.probes.comp = 1;
  sp.probes.L_ref = cfg.edge;
  sp.probes.force_nodes = sp.mesh->region_nodes(3);
  sp.probes.u_node = sp.probes.force_nodes.front();
  sp.snapshot_times = {cfg.t_end};
  return sp;
}

ScenarioProblem build_cvs(const ScenarioConfig& cfg) {
  cfg.check();
  ScenarioProblem sp;
  sp.mesh = std::make_unique<Mesh>(make_tube(cfg.r_outer, cfg.thickness,
                                             cfg.length, cfg.n_circ,
                                             cfg.n_axial, cfg.n_rad));
  sp.pb.mesh = sp.mesh.get();
  sp.pb.layout = DofLayout{sp.mesh->n_nodes()};
  sp.pb.mech = cfg.mech;
  sp.pb.thermal = cfg.thermal;
  sp.pb.em = cfg.em;
  sp.pb.coil = cfg.coil;
  sp.pb.period_averaged = cfg.period_averaged;
  sp.pb.em_body_force = cfg.em_body_force;
  // The tube is a segment of a longer device: its cut ends are symmetry
  // planes, so convection/radiation acts on the lateral surfaces only.
  sp.pb.insulated_regions = {0, 1};

  const std::vector<int> top = plate_line_nodes(*sp.mesh, cfg.r_outer, +1);
  const std::vector<int> bottom = plate_line_nodes(*sp.mesh, cfg.r_outer, -1);
  const double inf = std::numeric_limits<double>::infinity();
  for (int nd : bottom)  // bottom plate: clamped for good
    for (int c = 0; c < 3; ++c)
      sp.pb.node_bc.push_back(
          NodeProgram{nd, c, PiecewiseLinear::constant(0.0), inf});
  for (int nd : top) {
    // Plate drive down to -crush, released after cooling; the lateral guide
    // u_x = 0 stays on to pin the rotation mode about the bottom line.
    sp.pb.node_bc.push_back(NodeProgram{nd, 1, cfg.grip, cfg.grip_release});
    sp.pb.node_bc.push_back(
        NodeProgram{nd, 0, PiecewiseLinear::constant(0.0), inf});
  }

  if (cfg.mode == "imposed") {
    sp.pb.theta_bc = {ThetaProgram{-1, cfg.theta_program, inf}};
  }

  sp.theta0 = cfg.mode == "imposed" ? cfg.theta_program(0.0)
                                    : cfg.thermal.theta_B(0.0);
  sp.probes.elem = 0;
  sp.probes.qp = 0;
  sp.probes.comp = 1;
  sp.probes.L_ref = 2.0 * cfg.r_outer;
  sp.probes.force_nodes = top;
  sp.probes.u_node = top.front();
  const double t1 = cfg.cvs_t_load;
  const double t2 = t1 + cfg.cvs_t_cool;
  const double t3 = t2 + cfg.cvs_t_hold;
  const double t4 = t3 + cfg.cvs_t_heat;
  sp.snapshot_times = {0.0, t1, t2, t3, t4};
  return sp;
}

namespace {

void emit_snapshot(const std::string& path, const CoupledProblem& pb,
                   const CoupledState& st, std::vector<std::string>& files) {
  const Mesh& mesh = *pb.mesh;
  const DofLayout& L = pb.layout;
  const int n = mesh.n_nodes();
  const int ne = mesh.n_elems();

  VtkField u{"u", 3, std::vector<double>(3 * n)};
  VtkField theta{"theta", 1, std::vector<double>(n)};
  VtkField phi{"phi", 1, std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) u.data[3 * i + c] = st.v[L.u(i, c)];
    theta.data[i] = st.v[L.theta(i)];
    phi.data[i] = st.v[L.phi(i)];
  }

  // Quadrature averages of the eddy current density and Joule source.
  const EmSolution sol = current_and_losses(mesh, L, st.v, pb.em, pb.coil,
                                            st.t, pb.period_averaged);
  VtkField J{"J", 3, std::vector<double>(3 * ne, 0.0)};
  VtkField w{"joule_w", 1, std::vector<double>(ne, 0.0)};
  for (int e = 0; e < ne; ++e) {
    const auto& Je = sol.J_qp[e];
    for (std::size_t q = 0; q < Je.size(); ++q) {
      for (int c = 0; c < 3; ++c) J.data[3 * e + c] += Je[q][c] / Je.size();
      w.data[e] += sol.w_qp[e][q] / Je.size();
    }
  }

  write_vtk(path, mesh, {u, theta, phi}, {J, w});
  files.push_back(path);
}

ScenarioResult run_common(const ScenarioConfig& cfg, const ScenarioProblem& sp) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::string dir = cfg.out_dir + "/";

  ScenarioResult res;
  res.mesh = *sp.mesh;
  res.layout = sp.pb.layout;
  res.records.header = record_header();

  {
    std::ofstream os = open_out(dir + "config_resolved.ini");
    os << echo_config(cfg);
  }
  res.files.push_back(dir + "config_resolved.ini");

  CoupledState st = initial_state(sp.pb, sp.theta0);
  res.records.append(probe_row(sp.pb, st, sp.probes));

  std::ofstream log = open_out(dir + "log.jsonl");
  std::size_t next_snap = 0;
  const auto snapshot = [&](const CoupledState& s) {
    emit_snapshot(dir + "snapshot_" + std::to_string(next_snap) + ".vtk",
                  sp.pb, s, res.files);
    ++next_snap;
  };
  while (next_snap < sp.snapshot_times.size() &&
         sp.snapshot_times[next_snap] <= 1.0e-12)
    snapshot(st);

  CoupledSolver solver(sp.pb, cfg.solver);
  res.steps = solver.run(
      st, cfg.t_end, [&](const CoupledState& s, const StepReport& rep) {
        res.records.append(probe_row(sp.pb, s, sp.probes));
        write_step_line(log, s.n, rep.t, rep.dt_used, rep.iterations, rep.cuts,
                        rep.residuals);
        while (next_snap < sp.snapshot_times.size() &&
               s.t >= sp.snapshot_times[next_snap] - 1.0e-12)
          snapshot(s);
      });
  log.flush();
  if (!log) throw std::runtime_error("scenario: write failed for the step log");
  res.files.push_back(dir + "log.jsonl");

  res.final_v = st.v;
  res.final_t = st.t;

  const auto emit = [&](const Table& t, const std::string& name) {
    write_csv(dir + name, t);
    res.files.push_back(dir + name);
  };
  emit(res.records, "records.csv");
  if (cfg.name == "sec") {
    emit(select(res.records, {"theta", "eps_yy", "sigma_yy"}),
         "curve_theta_eps_sigma.csv");
    emit(select(res.records, {"t", "eps_yy"}), "curve_eps_t.csv");
    emit(select(res.records, {"t", "sigma_yy"}), "curve_sigma_t.csv");
    emit(select(res.records, {"eps_yy", "sigma_yy"}), "curve_sigma_eps.csv");
    emit(select(res.records, {"theta", "sigma_yy"}), "curve_sigma_theta.csv");
    emit(select(res.records, {"theta", "eps_yy"}), "curve_eps_theta.csv");
  } else {
    emit(select(res.records, {"u_y", "F_y"}), "curve_Fy_uy.csv");
    emit(select(res.records, {"theta", "u_y"}), "curve_uy_theta.csv");
    emit(select(res.records, {"theta", "F_y"}), "curve_Fy_theta.csv");
    emit(select(res.records, {"t", "theta"}), "curve_theta_t.csv");
  }
  return res;
}

}  // namespace

ScenarioResult run_sec(const ScenarioConfig& cfg) {
  return run_common(cfg, build_sec(cfg));
}

ScenarioResult run_cvs(const ScenarioConfig& cfg) {
  return run_common(cfg, build_cvs(cfg));
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  if (cfg.name == "sec") return run_sec(cfg);
  if (cfg.name == "cvs") return run_cvs(cfg);
  throw std::invalid_argument("run_scenario: unknown scenario '" + cfg.name +
                              "'");
}

}  // namespace smp
