#include <cmath>
#include <random>

#include "doctest.h"
#include "smp/linear_solver.hpp"
#include "smp/thermal.hpp"

using namespace smp;

namespace {

VecX uniform_state(const Mesh& mesh, const DofLayout& layout, double theta) {
  VecX v = VecX::Zero(layout.total());
  for (int n = 0; n < mesh.n_nodes(); ++n) v[layout.theta(n)] = theta;
  return v;
}

std::vector<Triplet> to_triplets(const SpMat& m) {
  std::vector<Triplet> trips;
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  return trips;
}

}  // namespace

TEST_CASE("heat capacity matrix") {
  ThermalParams p;  // rho0 = 270, cp = 10
  SUBCASE("1 mm^3 cube stores rho cp V = 2.7e-6 J/K") {
    const Mesh mesh = make_box(2, 2, 2, 1.0e-3, 1.0e-3, 1.0e-3);
    const SpMat M = assemble_M_the(mesh, p);
    const VecX ones = VecX::Ones(mesh.n_nodes());
    CHECK(ones.dot(M * ones) == doctest::Approx(2.7e-6).epsilon(1e-12));
    CHECK((MatX(M) - MatX(M).transpose()).lpNorm<Eigen::Infinity>() <=
          1e-14 * MatX(M).lpNorm<Eigen::Infinity>());
  }
  SUBCASE("doubling the edge scales the total by 8") {
    const Mesh m1 = make_box(2, 2, 2, 1.0e-3, 1.0e-3, 1.0e-3);
    const Mesh m2 = make_box(2, 2, 2, 2.0e-3, 2.0e-3, 2.0e-3);
    const VecX ones = VecX::Ones(m1.n_nodes());
    const double t1 = ones.dot(assemble_M_the(m1, p) * ones);
    const double t2 = ones.dot(assemble_M_the(m2, p) * ones);
    CHECK(t2 == doctest::Approx(8.0 * t1).epsilon(1e-13));
  }
}

TEST_CASE("conduction matrix") {
  ThermalParams p;  // kappa = 237
  SUBCASE("unit cube flux kappa A / L and zero row sums") {
    const Mesh mesh = make_box(3, 3, 3, 1.0, 1.0, 1.0);
    const DofLayout layout{mesh.n_nodes()};
    const VecX v = uniform_state(mesh, layout, 300.0);
    const SpMat K = assemble_K_the(mesh, layout, v, p);
    const VecX ones = VecX::Ones(mesh.n_nodes());
    CHECK((K * ones).lpNorm<Eigen::Infinity>() <= 1e-12 * K.coeff(0, 0));

    ConstraintSet cs;
    for (int n : mesh.region_nodes(0)) cs.add_fixed(n, 1.0);
    for (int n : mesh.region_nodes(1)) cs.add_fixed(n, 0.0);
    const auto active = cs.active(0.0);
    const ReducedMap map = build_reduced_map(mesh.n_nodes(), active);
    const ReducedSystem rs = apply_dirichlet(to_triplets(K),
                                             VecX::Zero(mesh.n_nodes()),
                                             active, map);
    DirectSolver solver;
    REQUIRE(solver.factor(rs.K, 0));
    const VecX th = expand_solution(solver.solve(rs.b), active, map);
    double flux = 0.0;
    const VecX Kth = K * th;
    for (int n : mesh.region_nodes(0)) flux += Kth[n];
    CHECK(flux == doctest::Approx(237.0).epsilon(1e-10));
  }
  SUBCASE("pullback equivalence under uniform stretch") {
    const Mesh m_ref = make_box(2, 2, 2, 1.0, 1.0, 1.0);
    const Mesh m_def = make_box(2, 2, 2, 1.0, 3.0, 1.0);
    const DofLayout layout{m_ref.n_nodes()};
    VecX v = uniform_state(m_ref, layout, 300.0);
    for (int n = 0; n < m_ref.n_nodes(); ++n)
      v[layout.u(n, 1)] = 2.0 * m_ref.nodes[n].y();  // y -> 3y
    const SpMat K_pull = assemble_K_the(m_ref, layout, v, p);
    const SpMat K_def = assemble_K_the(
        m_def, layout, uniform_state(m_def, layout, 300.0), p);
    CHECK((MatX(K_pull) - MatX(K_def)).lpNorm<Eigen::Infinity>() <=
          1e-10 * MatX(K_def).lpNorm<Eigen::Infinity>());
  }
  SUBCASE("temperature-dependent conductivity") {
    ThermalParams p2 = p;
    p2.kappa_alpha = 1.0e-2;
    p2.theta_ref = 300.0;
    const Mesh mesh = make_box(1, 1, 1, 1.0, 1.0, 1.0);
    const DofLayout layout{mesh.n_nodes()};
    const SpMat K_hot =
        assemble_K_the(mesh, layout, uniform_state(mesh, layout, 400.0), p2);
    const SpMat K_ref =
        assemble_K_the(mesh, layout, uniform_state(mesh, layout, 300.0), p2);
    CHECK(MatX(K_hot).lpNorm<Eigen::Infinity>() ==
          doctest::Approx(2.0 * MatX(K_ref).lpNorm<Eigen::Infinity>())
              .epsilon(1e-12));
  }
}

TEST_CASE("boundary terms") {
  ThermalParams p;
  p.h_E = 500.0;
  const Mesh mesh = make_box(2, 2, 2, 1.0e-3, 1.0e-3, 1.0e-3);
  const DofLayout layout{mesh.n_nodes()};

  SUBCASE("equilibrium temperature gives zero residual") {
    ThermalParams p2 = p;
    p2.eps_R = 0.7;
    p2.theta_B = PiecewiseLinear::constant(310.0);
    p2.theta_R = 310.0;
    const BoundaryTerms bt = boundary_terms(
        mesh, layout, uniform_state(mesh, layout, 310.0), p2, 0.0);
    CHECK(bt.r.lpNorm<Eigen::Infinity>() <= 1e-20);
  }
  SUBCASE("unit excess temperature dissipates h_E A") {
    p.theta_B = PiecewiseLinear::constant(300.0);
    const BoundaryTerms bt = boundary_terms(
        mesh, layout, uniform_state(mesh, layout, 301.0), p, 0.0);
    // closed box: total area 6e-6 m^2
    CHECK(bt.r.sum() == doctest::Approx(500.0 * 6.0e-6).epsilon(1e-12));
  }
  SUBCASE("zero emissivity removes radiation exactly") {
    p.theta_B = PiecewiseLinear::constant(350.0);
    p.eps_R = 0.0;
    p.theta_R = 100.0;  // far from theta; would radiate strongly if active
    const BoundaryTerms bt = boundary_terms(
        mesh, layout, uniform_state(mesh, layout, 350.0), p, 0.0);
    CHECK(bt.r.lpNorm<Eigen::Infinity>() <= 1e-20);
  }
  SUBCASE("radiative residual sign and magnitude") {
    ThermalParams p2 = p;
    p2.h_E = 0.0;
    p2.eps_R = 1.0;
    p2.theta_R = 293.0;
    const double th = 400.0;
    const BoundaryTerms bt =
        boundary_terms(mesh, layout, uniform_state(mesh, layout, th), p2, 0.0);
    const double exact = p2.sigma_R *
                         (th * th * th * th - 293.0 * 293.0 * 293.0 * 293.0) *
                         6.0e-6;
    CHECK(bt.r.sum() == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("thermal residual") {
  ThermalParams p;
  const Mesh mesh = make_box(2, 2, 2, 1.0e-3, 1.0e-3, 1.0e-3);
  const DofLayout layout{mesh.n_nodes()};
  ThermalParams insulated = p;
  insulated.h_E = 0.0;

  SUBCASE("steady uniform state with no source is at rest") {
    const VecX v = uniform_state(mesh, layout, 321.0);
    const VecX theta_old = VecX::Constant(mesh.n_nodes(), 321.0);
    const VecX r = thermal_residual(mesh, layout, v, theta_old, 1.0e-4, {},
                                    insulated, 0.0);
    // roundoff in theta - N . theta_old: scaled by rho cp V theta
    CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-18);
  }
  SUBCASE("uniform source heats uniformly: dtheta = w dt / (rho cp)") {
    const double w = 1.0e8, dt = 1.0e-4;
    const double dtheta = w * dt / (p.rho0 * p.cp);  // 3.7037 K
    REQUIRE(dtheta == doctest::Approx(1.0e4 / 2700.0));
    std::vector<std::vector<double>> w_qp(mesh.n_elems());
    for (int e = 0; e < mesh.n_elems(); ++e) w_qp[e].assign(8, w);
    const VecX theta_old = VecX::Constant(mesh.n_nodes(), 300.0);
    const VecX v = uniform_state(mesh, layout, 300.0 + dtheta);
    const VecX r =
        thermal_residual(mesh, layout, v, theta_old, dt, w_qp, insulated, 0.0);
    // residual scale: M dtheta ~ rho cp V dtheta
    const double scale = p.rho0 * p.cp * 1.0e-9 * dtheta;
    CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
  }
  SUBCASE("dt must be positive") {
    const VecX v = uniform_state(mesh, layout, 300.0);
    CHECK_THROWS(thermal_residual(mesh, layout, v,
                                  VecX::Constant(mesh.n_nodes(), 300.0), 0.0,
                                  {}, p, 0.0));
  }
}

TEST_CASE("convective decay of a hot cube") {
  // lumped ODE: rho cp V dtheta/dt = -h A (theta - theta_B)
  ThermalParams p;
  p.theta_B = PiecewiseLinear::constant(300.0);
  const Mesh mesh = make_box(2, 2, 2, 1.0e-3, 1.0e-3, 1.0e-3);
  const DofLayout layout{mesh.n_nodes()};
  const double V = 1.0e-9, A = 6.0e-6;
  const double rate = p.h_E * A / (p.rho0 * p.cp * V);  // 1/tau
  const double dt = 1.0 / rate / 100.0;
  const int steps = 10;

  const SpMat M = assemble_M_the(mesh, p);
  const SpMat K = assemble_K_the(
      mesh, layout, uniform_state(mesh, layout, 300.0), p);
  const BoundaryTerms bt = boundary_terms(
      mesh, layout, uniform_state(mesh, layout, 300.0), p, 0.0);
  // linear problem: (M + dt (K + H)) theta_new = M theta_old + dt H theta_B
  const SpMat A_sys = M + dt * (K + bt.H);
  DirectSolver solver;
  REQUIRE(solver.factor(A_sys, 0));
  VecX theta = VecX::Constant(mesh.n_nodes(), 350.0);
  const VecX load = dt * 300.0 * (bt.H * VecX::Ones(mesh.n_nodes()));
  double theta_min = theta.minCoeff();
  for (int s = 0; s < steps; ++s) {
    theta = solver.solve(M * theta + load);
    theta_min = std::min(theta_min, theta.minCoeff());
  }
  // volume-averaged excess temperature decay
  const VecX ones = VecX::Ones(mesh.n_nodes());
  const double heat = ones.dot(M * (theta - 300.0 * ones));
  const double mean_excess = heat / (p.rho0 * p.cp * V);
  const double fitted_rate = -std::log(mean_excess / 50.0) / (steps * dt);
  CHECK(fitted_rate == doctest::Approx(rate).epsilon(0.01));

  SUBCASE("discrete minimum principle") {
    CHECK(theta_min >= std::min(350.0, 300.0) - 1e-9);
  }
}

TEST_CASE("element and facet tangents match finite differences") {
  Mesh mesh = make_box(1, 1, 1, 1.0e-3, 1.0e-3, 1.0e-3);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (Vec3& x : mesh.nodes) x += 1.0e-4 * Vec3(d(rng), d(rng), d(rng));
  mesh.validate();
  const DofLayout layout{mesh.n_nodes()};
  VecX v = VecX::Zero(layout.total());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    v[layout.theta(n)] = 330.0 + 15.0 * d(rng);
    for (int c = 0; c < 3; ++c) v[layout.u(n, c)] = 5.0e-5 * d(rng);
  }
  ThermalParams p;
  p.kappa_alpha = 3.0e-3;
  p.eps_R = 0.8;
  p.theta_B = PiecewiseLinear::constant(300.0);
  const double dt = 1.0e-4;
  const VecX theta_old = VecX::Constant(mesh.n_nodes(), 320.0);

  SUBCASE("volume kernel") {
    VecX th_old_e(8);
    for (int i = 0; i < 8; ++i) th_old_e[i] = theta_old[mesh.elems[0][i]];
    const auto eval = [&](const VecX& state) {
      const ElementFields f = gather_fields(mesh, 0, layout, state);
      return thermal_element(element_qps(mesh, 0, f), th_old_e, dt, p, false).r;
    };
    const ElementFields f0 = gather_fields(mesh, 0, layout, v);
    const ThermalElement an =
        thermal_element(element_qps(mesh, 0, f0), th_old_e, dt, p, true);
    const double scale = std::max(MatX(an.T_tt).lpNorm<Eigen::Infinity>(),
                                  MatX(an.T_tu).lpNorm<Eigen::Infinity>());
    for (int j = 0; j < 8; ++j) {
      const int gj = mesh.elems[0][j];
      {
        const double h = 1.0e-4;
        VecX vp = v, vm = v;
        vp[layout.theta(gj)] += h;
        vm[layout.theta(gj)] -= h;
        const VecX fd = (eval(vp) - eval(vm)) / (2.0 * h);
        CHECK((fd - an.T_tt.col(j)).lpNorm<Eigen::Infinity>() <= 1e-6 * scale);
      }
      for (int k = 0; k < 3; ++k) {
        const double h = 1.0e-8;
        VecX vp = v, vm = v;
        vp[layout.u(gj, k)] += h;
        vm[layout.u(gj, k)] -= h;
        const VecX fd = (eval(vp) - eval(vm)) / (2.0 * h);
        CHECK((fd - an.T_tu.col(3 * j + k)).lpNorm<Eigen::Infinity>() <=
              1e-6 * scale);
      }
    }
  }

  SUBCASE("facet kernel including the radiative tangent") {
    const Facet& fac = mesh.facets[2];
    const auto eval = [&](const VecX& state) {
      const ElementFields f = gather_fields(mesh, fac.elem, layout, state);
      return thermal_facet(facet_qps(mesh, fac, f), p, 0.0, false).r;
    };
    const ElementFields f0 = gather_fields(mesh, fac.elem, layout, v);
    const ThermalFacet an =
        thermal_facet(facet_qps(mesh, fac, f0), p, 0.0, true);
    const double scale = std::max(MatX(an.T_tt).lpNorm<Eigen::Infinity>(),
                                  MatX(an.T_tu).lpNorm<Eigen::Infinity>());
    for (int j = 0; j < 8; ++j) {
      const int gj = mesh.elems[fac.elem][j];
      {
        const double h = 1.0e-4;
        VecX vp = v, vm = v;
        vp[layout.theta(gj)] += h;
        vm[layout.theta(gj)] -= h;
        const VecX fd = (eval(vp) - eval(vm)) / (2.0 * h);
        CHECK((fd - an.T_tt.col(j)).lpNorm<Eigen::Infinity>() <= 1e-6 * scale);
      }
      for (int k = 0; k < 3; ++k) {
        const double h = 1.0e-8;
        VecX vp = v, vm = v;
        vp[layout.u(gj, k)] += h;
        vm[layout.u(gj, k)] -= h;
        const VecX fd = (eval(vp) - eval(vm)) / (2.0 * h);
        CHECK((fd - an.T_tu.col(3 * j + k)).lpNorm<Eigen::Infinity>() <=
              1e-6 * scale);
      }
    }
  }
}

TEST_CASE("nondimensionalization report") {
  ThermalParams p;  // Table values: rho = 270, cp = 10, kappa = 237
  SUBCASE("characteristic time at L_c = 0.02 m") {
    const NondimReport r = nondim_report(p, 0.02);
    CHECK(r.T_c == doctest::Approx(270.0 * 10.0 * 4.0e-4 / 237.0)
                       .epsilon(1e-15));
    CHECK(r.T_c == doctest::Approx(4.557e-3).epsilon(1e-3));
  }
  SUBCASE("infinite conductivity limit") {
    ThermalParams p2 = p;
    p2.kappa0 = 1.0e12;
    CHECK(nondim_report(p2, 0.02).T_c <= 1e-11);
  }
  SUBCASE("doubling L_c quadruples T_c") {
    CHECK(nondim_report(p, 0.04).T_c ==
          doctest::Approx(4.0 * nondim_report(p, 0.02).T_c).epsilon(1e-14));
  }
  SUBCASE("per-step temperature band flag") {
    // w dt / (rho cp) = 1e8 * 1e-4 / 2700 = 3.7 K
    CHECK(nondim_report(p, 0.02, 1.0e8, 5.0, 1.0e-4).per_step_band_ok);
    CHECK_FALSE(nondim_report(p, 0.02, 1.0e8, 2.0, 1.0e-4).per_step_band_ok);
  }
  SUBCASE("invalid length throws") { CHECK_THROWS(nondim_report(p, 0.0)); }
}
