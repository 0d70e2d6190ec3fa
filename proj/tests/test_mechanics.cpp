#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "smp/mechanics.hpp"

using namespace smp;

namespace {

constexpr double kEdge = 1.0e-3;  // cube edge (m)

// global state with u = (F0 - I) X imposed exactly and a uniform temperature
VecX affine_state(const Mesh& mesh, const DofLayout& layout, const Mat3& F0,
                  double theta) {
  VecX v = VecX::Zero(layout.total());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const Vec3 u = (F0 - Mat3::Identity()) * mesh.nodes[n];
    v[layout.theta(n)] = theta;
    for (int c = 0; c < 3; ++c) v[layout.u(n, c)] = u[c];
  }
  return v;
}

struct OneElem {
  Mesh mesh;
  DofLayout layout;
  VecX v;
};

OneElem distorted_element(unsigned seed, double theta0) {
  OneElem o;
  o.mesh = make_box(1, 1, 1, kEdge, kEdge, kEdge);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (Vec3& x : o.mesh.nodes) x += 1.0e-4 * Vec3(d(rng), d(rng), d(rng));
  o.mesh.validate();
  o.layout = DofLayout{o.mesh.n_nodes()};
  o.v = VecX::Zero(o.layout.total());
  for (int n = 0; n < o.mesh.n_nodes(); ++n) {
    o.v[o.layout.phi(n)] = 1.0e-4 * d(rng);
    o.v[o.layout.theta(n)] = theta0 + 5.0 * d(rng);
    for (int c = 0; c < 3; ++c) o.v[o.layout.u(n, c)] = 2.0e-5 * d(rng);
  }
  return o;
}

// u-block of a sparse tangent as a dense matrix, rows/cols in node-major order
MatX u_block(const SpMat& K, const DofLayout& layout) {
  const int n = 3 * layout.n_nodes;
  MatX A = MatX::Zero(n, n);
  for (int col = 0; col < K.outerSize(); ++col)
    for (SpMat::InnerIterator it(K, col); it; ++it) {
      const int i = it.row() - layout.u_begin();
      const int j = col - layout.u_begin();
      if (i >= 0 && j >= 0) A(i, j) = it.value();
    }
  return A;
}

CoilSpec test_coil(double i0) {
  CoilSpec c;
  c.i0 = PiecewiseLinear::constant(i0);
  return c;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double xm = 0, ym = 0;
  for (int i = 0; i < n; ++i) xm += x[i], ym += y[i];
  xm /= n, ym /= n;
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  return num / den;
}

}  // namespace

TEST_CASE("mechanics: stress-free reference state has zero residual") {
  const Mesh mesh = make_box(2, 2, 2, kEdge, kEdge, kEdge);
  const DofLayout layout{mesh.n_nodes()};
  const MechParams p = MechParams::sec_defaults();
  MaterialState state = MaterialState::virgin(mesh, 420.0, p);
  const VecX v = affine_state(mesh, layout, Mat3::Identity(), 420.0);

  const VecX r = mech_residual(mesh, layout, v, state, p, MechBC{}, 0.0);
  CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-12 * p.E_r * kEdge * kEdge);
  CHECK(reaction_force(mesh, layout, r, 0).norm() <=
        1e-12 * p.E_r * kEdge * kEdge);
}

TEST_CASE("mechanics: uniaxial rubbery stretch reproduces E_r A eps") {
  const MechParams p = MechParams::sec_defaults();
  const double eps = 1.0e-4;
  const Mat3 F0 =
      Vec3(1.0 + eps, 1.0 - p.nu_r * eps, 1.0 - p.nu_r * eps).asDiagonal();

  const Mesh mesh = make_box(1, 1, 1, kEdge, kEdge, kEdge);
  const DofLayout layout{mesh.n_nodes()};
  MaterialState state = MaterialState::virgin(mesh, 420.0, p);
  const VecX v = affine_state(mesh, layout, F0, 420.0);
  const VecX r = mech_residual(mesh, layout, v, state, p, MechBC{}, 0.0);

  const double force = p.E_r * kEdge * kEdge * eps;
  const Vec3 R1 = reaction_force(mesh, layout, r, 1);  // x = L face
  const Vec3 R0 = reaction_force(mesh, layout, r, 0);  // x = 0 face
  CHECK(R1[0] == doctest::Approx(force).epsilon(0.01));
  CHECK((R0 + R1).norm() <= 1e-8 * force);  // opposite faces balance
  CHECK(std::abs(R1[1]) <= 0.01 * force);   // free lateral directions
  CHECK(std::abs(R1[2]) <= 0.01 * force);

  SUBCASE("doubling the cross-section doubles the reaction") {
    const Mesh wide = make_box(1, 2, 1, kEdge, 2.0 * kEdge, kEdge);
    const DofLayout wl{wide.n_nodes()};
    MaterialState ws = MaterialState::virgin(wide, 420.0, p);
    const VecX wv = affine_state(wide, wl, F0, 420.0);
    const VecX wr = mech_residual(wide, wl, wv, ws, p, MechBC{}, 0.0);
    CHECK(reaction_force(wide, wl, wr, 1)[0] ==
          doctest::Approx(2.0 * R1[0]).epsilon(1e-9));
  }

  SUBCASE("unknown probe region throws") {
    CHECK_THROWS_AS(reaction_force(mesh, layout, r, 77), std::invalid_argument);
  }
}

TEST_CASE("mechanics: constant-stress patch test on a distorted interior") {
  // Jiggle only interior nodes so the boundary faces stay flat and the exact
  // traction of a uniform P state is constant per region.
  Mesh mesh = make_box(3, 3, 3, kEdge, kEdge, kEdge);
  std::vector<bool> boundary(mesh.n_nodes(), false);
  for (int rgn = 0; rgn < 6; ++rgn)
    for (int n : mesh.region_nodes(rgn)) boundary[n] = true;
  std::mt19937 rng(11u);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int n = 0; n < mesh.n_nodes(); ++n)
    if (!boundary[n]) mesh.nodes[n] += 4.0e-5 * Vec3(d(rng), d(rng), d(rng));
  mesh.validate();

  const MechParams p = MechParams::sec_defaults();
  const double theta = 380.0;
  Mat3 F0 = Mat3::Identity();
  F0(0, 0) += 8.0e-4;
  F0(1, 1) -= 3.0e-4;
  F0(0, 1) = F0(1, 0) = 2.0e-4;
  F0(2, 2) += 5.0e-4;

  const Mat3 S = return_mapping(F0, theta, virgin_state(theta, p), p, false).st.S;
  const Mat3 P = F0 * S;

  MechBC bc;
  const Vec3 normals[6] = {{-1, 0, 0}, {1, 0, 0},  {0, -1, 0},
                           {0, 1, 0},  {0, 0, -1}, {0, 0, 1}};
  for (int rgn = 0; rgn < 6; ++rgn) bc.traction[rgn] = P * normals[rgn];

  const DofLayout layout{mesh.n_nodes()};
  MaterialState state = MaterialState::virgin(mesh, theta, p);
  const VecX v = affine_state(mesh, layout, F0, theta);
  const VecX r = mech_residual(mesh, layout, v, state, p, bc, 0.0);

  const double ext = P.lpNorm<Eigen::Infinity>() * kEdge * kEdge;
  CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-8 * ext);
}

TEST_CASE("mechanics: tangent equals the classical small-strain stiffness at "
          "the reference") {
  OneElem o = distorted_element(3u, 420.0);
  const MechParams p = MechParams::sec_defaults();
  const double theta = 420.0;
  o.v = affine_state(o.mesh, o.layout, Mat3::Identity(), theta);
  MaterialState state = MaterialState::virgin(o.mesh, theta, p);

  const MatX K = u_block(mech_tangent(o.mesh, o.layout, o.v, state, p), o.layout);

  // mixture moduli at theta
  const double z = glassy_fraction(theta, p).first;
  const auto [lr, mr] = lame(p, Phase::Rubbery);
  const auto [lg, mg] = lame(p, Phase::Glassy);
  const double lam = z * lg + (1.0 - z) * lr;
  const double mu = z * mg + (1.0 - z) * mr;

  const ElementFields f = gather_fields(o.mesh, 0, o.layout, o.v);
  const std::vector<QpData> qps = element_qps(o.mesh, 0, f);
  const auto& conn = o.mesh.elems[0];
  const int nn = 8;
  MatX Kcl = MatX::Zero(3 * nn, 3 * nn);
  for (const QpData& q : qps)
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) {
        const Vec3 bi = q.B.row(i).transpose(), bj = q.B.row(j).transpose();
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            Kcl(3 * conn[i] + a, 3 * conn[j] + b) +=
                q.wdet * (lam * bi[a] * bj[b] + mu * bi[b] * bj[a] +
                          (a == b ? mu * bi.dot(bj) : 0.0));
      }

  const double scale = Kcl.lpNorm<Eigen::Infinity>();
  CHECK((K - Kcl).lpNorm<Eigen::Infinity>() <= 1e-10 * scale);

  SUBCASE("tangent stays symmetric at a stretched elastic state") {
    const Mat3 F0 = Vec3(1.02, 0.99, 1.005).asDiagonal();
    const VecX vs = affine_state(o.mesh, o.layout, F0, theta);
    const MatX Ks = u_block(mech_tangent(o.mesh, o.layout, vs, state, p), o.layout);
    CHECK((Ks - Ks.transpose()).lpNorm<Eigen::Infinity>() <=
          1e-10 * Ks.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("mechanics: assembled tangent matches finite differences") {
  Mesh mesh = make_box(2, 2, 2, kEdge, kEdge, kEdge);
  std::mt19937 rng(17u);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (Vec3& x : mesh.nodes) x += 2.0e-5 * Vec3(d(rng), d(rng), d(rng));
  mesh.validate();
  const DofLayout layout{mesh.n_nodes()};
  const MechParams p = MechParams::sec_defaults();

  auto fd_check = [&](double theta, const Mat3& F0, double noise, double tol,
                      bool expect_plastic) {
    VecX v = affine_state(mesh, layout, F0, theta);
    for (int n = 0; n < mesh.n_nodes(); ++n)
      for (int c = 0; c < 3; ++c) v[layout.u(n, c)] += noise * d(rng);
    MaterialState state = MaterialState::virgin(mesh, theta, p);

    const MatX K = u_block(mech_tangent(mesh, layout, v, state, p), layout);
    bool plastic = false;
    for (const auto& elem : state.trial)
      for (const QpState& qs : elem) plastic = plastic || qs.alpha > 0.0;
    CHECK(plastic == expect_plastic);

    const double h = 1.0e-8;
    MatX Kfd(K.rows(), K.cols());
    for (int n = 0; n < mesh.n_nodes(); ++n)
      for (int c = 0; c < 3; ++c) {
        VecX vp = v, vm = v;
        vp[layout.u(n, c)] += h;
        vm[layout.u(n, c)] -= h;
        const VecX rp = mech_residual(mesh, layout, vp, state, p, MechBC{}, 0.0);
        const VecX rm = mech_residual(mesh, layout, vm, state, p, MechBC{}, 0.0);
        Kfd.col(3 * n + c) =
            ((rp - rm) / (2.0 * h)).segment(layout.u_begin(), K.rows());
      }
    CHECK((K - Kfd).lpNorm<Eigen::Infinity>() <=
          tol * K.lpNorm<Eigen::Infinity>());
  };

  SUBCASE("elastic, rubbery") {
    fd_check(420.0, Vec3(1.001, 0.9995, 1.0).asDiagonal(), 1e-6, 1e-5, false);
  }
  SUBCASE("plastic, glassy") {
    fd_check(200.0, Vec3(1.04, 0.99, 1.0).asDiagonal(), 1e-6, 1e-3, true);
  }
}

TEST_CASE("mechanics: element temperature coupling block matches finite "
          "differences") {
  // committed at 370 K, evaluated mid-transition: every point on the smooth
  // cooling branch
  OneElem o = distorted_element(23u, 345.0);
  for (int n = 0; n < o.mesh.n_nodes(); ++n)
    o.v[o.layout.u(n, 0)] += 1.0e-5;  // bias so F != I
  const MechParams p = MechParams::sec_defaults();
  MaterialState state = MaterialState::virgin(o.mesh, 370.0, p);

  auto element_r = [&](const VecX& v) {
    const ElementFields f = gather_fields(o.mesh, 0, o.layout, v);
    const std::vector<QpData> qps = element_qps(o.mesh, 0, f);
    return mech_element(qps, state.committed[0], nullptr, p, false).r_u;
  };

  const ElementFields f = gather_fields(o.mesh, 0, o.layout, o.v);
  const std::vector<QpData> qps = element_qps(o.mesh, 0, f);
  const MechElement me = mech_element(qps, state.committed[0], nullptr, p, true);

  // element block columns follow the element-local node order
  const auto& conn = o.mesh.elems[0];
  const double h = 1.0e-4;
  MatX Kfd(24, 8);
  for (int j = 0; j < 8; ++j) {
    VecX vp = o.v, vm = o.v;
    vp[o.layout.theta(conn[j])] += h;
    vm[o.layout.theta(conn[j])] -= h;
    Kfd.col(j) = (element_r(vp) - element_r(vm)) / (2.0 * h);
  }
  CHECK((me.K_ut - Kfd).lpNorm<Eigen::Infinity>() <=
        1e-5 * me.K_ut.lpNorm<Eigen::Infinity>());
}

TEST_CASE("mechanics: electromagnetic body force trivia") {
  const Mesh mesh = make_box(1, 1, 1, kEdge, kEdge, kEdge);
  const DofLayout layout{mesh.n_nodes()};
  EmMaterial mat = EmMaterial::table2();

  SUBCASE("zero excitation gives zero force") {
    const VecX v = affine_state(mesh, layout, Mat3::Identity(), 320.0);
    const ElementFields f = gather_fields(mesh, 0, layout, v);
    for (const QpData& q : element_qps(mesh, 0, f))
      CHECK(em_body_force(q, mat, test_coil(0.0), 1.0e-4).norm() == 0.0);
  }

  SUBCASE("undeformed solid: azimuthal eddies + axial field = radial force") {
    CoilSpec coil = test_coil(1.0);
    coil.waveform_a = 1.0;  // DC offset so b and db/dt are nonzero at t = 0
    const double t = 0.0;
    const VecX v = affine_state(mesh, layout, Mat3::Identity(), 320.0);
    const ElementFields f = gather_fields(mesh, 0, layout, v);
    const double bz = coil.mu() * coil.turns / coil.length;       // (1 + sin 0)
    const double bdot = bz * coil.omega();                        // cos 0
    for (const QpData& q : element_qps(mesh, 0, f)) {
      const Vec3 j = -mat.sigma(q.theta) * 0.5 * bdot * Vec3(-q.x[1], q.x[0], 0);
      const Vec3 expect = j.cross(Vec3(0, 0, bz));
      const Vec3 got = em_body_force(q, mat, coil, t);
      CHECK((got - expect).norm() <= 1e-12 * expect.norm());
      CHECK(std::abs(got[2]) == 0.0);                       // no axial push
      CHECK(std::abs(got.dot(Vec3(-q.x[1], q.x[0], 0))) <=  // no azimuthal part
            1e-12 * expect.norm() * q.x.head<2>().norm());
    }
  }

  SUBCASE("potential gradient adds to the eddy current at identity F") {
    CoilSpec coil = test_coil(1.0);
    coil.waveform_a = 1.0;
    VecX v = affine_state(mesh, layout, Mat3::Identity(), 320.0);
    const Vec3 g(3.0e-2, -1.0e-2, 2.0e-2);
    for (int n = 0; n < mesh.n_nodes(); ++n)
      v[layout.phi(n)] = g.dot(mesh.nodes[n]);
    const ElementFields f = gather_fields(mesh, 0, layout, v);
    const double t = 1.3e-4;
    for (const QpData& q : element_qps(mesh, 0, f)) {
      const CoilEval ce = a_source(coil, q.x[0], q.x[1], t, false);
      const Vec3 expect = (-mat.sigma(q.theta) * (ce.da_dt + g)).cross(ce.b);
      CHECK((em_body_force(q, mat, coil, t) - expect).norm() <=
            1e-12 * expect.norm());
    }
  }

  SUBCASE("period-averaged element contribution vanishes identically") {
    OneElem o = distorted_element(31u, 320.0);
    const ElementFields f = gather_fields(o.mesh, 0, o.layout, o.v);
    const std::vector<QpData> qps = element_qps(o.mesh, 0, f);
    const BodyForceElement bf =
        em_body_element(qps, mat, test_coil(2.0), 1.7e-4, true, true);
    CHECK(bf.r_u.norm() == 0.0);
    CHECK(bf.K_uu.norm() == 0.0);
    CHECK(bf.K_ut.norm() == 0.0);
    CHECK(bf.K_up.norm() == 0.0);
  }
}

TEST_CASE("mechanics: body-force element blocks match finite differences") {
  OneElem o = distorted_element(41u, 320.0);
  EmMaterial mat = EmMaterial::table2();
  mat.sigma_alpha = 1.0e-3;  // a live conductivity-temperature path
  const CoilSpec coil = test_coil(1.0);
  const double t = 1.7e-4;  // sin and cos both nonzero

  auto element_r = [&](const VecX& v) {
    const ElementFields f = gather_fields(o.mesh, 0, o.layout, v);
    const std::vector<QpData> qps = element_qps(o.mesh, 0, f);
    return em_body_element(qps, mat, coil, t, false, false).r_u;
  };

  const ElementFields f = gather_fields(o.mesh, 0, o.layout, o.v);
  const std::vector<QpData> qps = element_qps(o.mesh, 0, f);
  const BodyForceElement bf = em_body_element(qps, mat, coil, t, false, true);

  auto fd_block = [&](auto dof_of, double h, int cols) {
    MatX K(24, cols);
    for (int j = 0; j < cols; ++j) {
      VecX vp = o.v, vm = o.v;
      vp[dof_of(j)] += h;
      vm[dof_of(j)] -= h;
      K.col(j) = (element_r(vp) - element_r(vm)) / (2.0 * h);
    }
    return K;
  };

  // element block columns follow the element-local node order
  const auto& conn = o.mesh.elems[0];
  const MatX Kp =
      fd_block([&](int j) { return o.layout.phi(conn[j]); }, 1e-9, 8);
  CHECK((bf.K_up - Kp).lpNorm<Eigen::Infinity>() <=
        1e-6 * bf.K_up.lpNorm<Eigen::Infinity>());

  const MatX Kt =
      fd_block([&](int j) { return o.layout.theta(conn[j]); }, 1e-4, 8);
  CHECK((bf.K_ut - Kt).lpNorm<Eigen::Infinity>() <=
        1e-6 * bf.K_ut.lpNorm<Eigen::Infinity>());

  const MatX Ku = fd_block(
      [&](int j) { return o.layout.u(conn[j / 3], j % 3); }, 1e-9, 24);
  CHECK((bf.K_uu - Ku).lpNorm<Eigen::Infinity>() <=
        1e-5 * bf.K_uu.lpNorm<Eigen::Infinity>());
}

TEST_CASE("mechanics: rigid translation produces no internal force") {
  OneElem o = distorted_element(53u, 420.0);
  const MechParams p = MechParams::sec_defaults();
  MaterialState state = MaterialState::virgin(o.mesh, 420.0, p);
  VecX v = affine_state(o.mesh, o.layout, Mat3::Identity(), 420.0);
  const Vec3 shift(0.37 * kEdge, -0.21 * kEdge, 0.11 * kEdge);
  for (int n = 0; n < o.mesh.n_nodes(); ++n)
    for (int c = 0; c < 3; ++c) v[o.layout.u(n, c)] += shift[c];

  const VecX r = mech_residual(o.mesh, o.layout, v, state, p, MechBC{}, 0.0);
  CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-10 * p.E_g * kEdge * kEdge);
}

TEST_CASE("mechanics: rigid rotation invariance and second-order tangent "
          "response") {
  const Mesh mesh = make_box(1, 1, 1, kEdge, kEdge, kEdge);
  const DofLayout layout{mesh.n_nodes()};
  const MechParams p = MechParams::sec_defaults();
  const Vec3 center(0.5 * kEdge, 0.5 * kEdge, 0.5 * kEdge);
  const Vec3 axis = Vec3(1, 1, 1).normalized();

  auto rotation_state = [&](double angle, double theta) {
    const Mat3 R = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    VecX v = VecX::Zero(layout.total());
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      const Vec3 u = R * (mesh.nodes[n] - center) + center - mesh.nodes[n];
      v[layout.theta(n)] = theta;
      for (int c = 0; c < 3; ++c) v[layout.u(n, c)] = u[c];
    }
    return v;
  };

  SUBCASE("finite rotations leave the residual at roundoff") {
    for (double theta : {420.0, 200.0}) {
      MaterialState state = MaterialState::virgin(mesh, theta, p);
      const VecX v = rotation_state(0.3, theta);
      const VecX r = mech_residual(mesh, layout, v, state, p, MechBC{}, 0.0);
      CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-9 * p.E_g * kEdge * kEdge);
    }
  }

  SUBCASE("linearised response to a rotation field is second order") {
    MaterialState state = MaterialState::virgin(mesh, 420.0, p);
    const VecX v0 = affine_state(mesh, layout, Mat3::Identity(), 420.0);
    const SpMat K = mech_tangent(mesh, layout, v0, state, p);
    std::vector<double> lx, ly;
    for (double angle : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
      const VecX dv = rotation_state(angle, 0.0);  // displacement entries only
      VecX du = VecX::Zero(layout.total());
      du.segment(layout.u_begin(), 3 * layout.n_nodes) =
          dv.segment(layout.u_begin(), 3 * layout.n_nodes);
      lx.push_back(std::log(angle));
      ly.push_back(std::log((K * du).lpNorm<Eigen::Infinity>()));
    }
    CHECK(fit_slope(lx, ly) >= 1.9);
    CHECK(fit_slope(lx, ly) <= 2.1);
  }
}

TEST_CASE("mechanics: internal virtual work is conjugate, S : dE = r . du") {
  Mesh mesh = make_box(2, 1, 1, 2.0 * kEdge, kEdge, kEdge);
  std::mt19937 rng(61u);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (Vec3& x : mesh.nodes) x += 3.0e-5 * Vec3(d(rng), d(rng), d(rng));
  mesh.validate();
  const DofLayout layout{mesh.n_nodes()};
  const MechParams p = MechParams::sec_defaults();

  VecX v = affine_state(mesh, layout, Vec3(1.01, 0.995, 1.0).asDiagonal(), 345.0);
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    v[layout.theta(n)] = 340.0 + 8.0 * d(rng);
    for (int c = 0; c < 3; ++c) v[layout.u(n, c)] += 1.0e-5 * d(rng);
  }
  MaterialState state = MaterialState::virgin(mesh, 370.0, p);
  const VecX r = mech_residual(mesh, layout, v, state, p, MechBC{}, 0.0);

  VecX du = VecX::Zero(layout.total());
  for (int n = 0; n < mesh.n_nodes(); ++n)
    for (int c = 0; c < 3; ++c) v[layout.u(n, c)], du[layout.u(n, c)] = d(rng);

  double work = 0.0;
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const ElementFields f = gather_fields(mesh, e, layout, v);
    const std::vector<QpData> qps = element_qps(mesh, e, f);
    for (std::size_t qi = 0; qi < qps.size(); ++qi) {
      const QpData& q = qps[qi];
      const Mat3 S =
          return_mapping(q.F, q.theta, state.committed[e][qi], p, false).st.S;
      Mat3 dF = Mat3::Zero();
      const auto& conn = mesh.elems[e];
      for (int j = 0; j < 8; ++j) {
        Vec3 duj;
        for (int c = 0; c < 3; ++c) duj[c] = du[layout.u(conn[j], c)];
        dF += duj * q.B.row(j);
      }
      const Mat3 dE = 0.5 * (q.F.transpose() * dF + dF.transpose() * q.F);
      work += q.wdet * (S.array() * dE.array()).sum();
    }
  }
  CHECK(r.dot(du) == doctest::Approx(work).epsilon(1e-12));
}

TEST_CASE("mechanics: boundary-condition programs") {
  const Mesh mesh = make_box(1, 1, 1, kEdge, kEdge, kEdge);
  const DofLayout layout{mesh.n_nodes()};

  SUBCASE("conflicting program and traction on the same component throws") {
    MechBC bc;
    DirichletProgram d;
    d.region = 1;
    d.comp[0] = true;
    bc.dirichlet.push_back(d);
    bc.traction[1] = Vec3(5.0, 0.0, 0.0);
    CHECK_THROWS_AS(bc.check(), std::invalid_argument);
    bc.traction[1] = Vec3(0.0, 5.0, 0.0);  // different component is fine
    CHECK_NOTHROW(bc.check());
  }

  SUBCASE("programs register on the region nodes and release on time") {
    MechBC bc;
    DirichletProgram d;
    d.region = 0;
    d.comp[0] = true;
    d.u_D[0] = PiecewiseLinear({{0.0, 0.0}, {1.0, 1.0e-5}});
    d.t_release = 2.0;
    bc.dirichlet.push_back(d);

    ConstraintSet cs;
    bc.add_constraints(mesh, layout, cs);
    CHECK(cs.size() == mesh.region_nodes(0).size());

    const auto mid = cs.active(1.0);
    REQUIRE(mid.dofs.size() == 4);
    for (double val : mid.values) CHECK(val == doctest::Approx(1.0e-5));
    CHECK(cs.active(2.0).dofs.empty());  // released
  }

  SUBCASE("empty region throws") {
    MechBC bc;
    DirichletProgram d;
    d.region = 9;
    d.comp[2] = true;
    bc.dirichlet.push_back(d);
    ConstraintSet cs;
    CHECK_THROWS_AS(bc.add_constraints(mesh, layout, cs), std::invalid_argument);
  }
}

TEST_CASE("mechanics: element inversion raises") {
  const Mesh mesh = make_box(1, 1, 1, kEdge, kEdge, kEdge);
  const DofLayout layout{mesh.n_nodes()};
  const MechParams p = MechParams::sec_defaults();
  MaterialState state = MaterialState::virgin(mesh, 420.0, p);
  const VecX v =
      affine_state(mesh, layout, Vec3(-0.5, 1.0, 1.0).asDiagonal(), 420.0);
  CHECK_THROWS_AS(mech_residual(mesh, layout, v, state, p, MechBC{}, 0.0),
                  std::runtime_error);
}

TEST_CASE("mechanics: material state bookkeeping") {
  const Mesh mesh = make_box(2, 1, 1, 2.0 * kEdge, kEdge, kEdge);
  const MechParams p = MechParams::sec_defaults();
  MaterialState state = MaterialState::virgin(mesh, 360.0, p);

  REQUIRE(state.committed.size() == 2);
  for (const auto& elem : state.committed) {
    REQUIRE(elem.size() == 8);  // 2x2x2 rule
    for (const QpState& qs : elem) {
      CHECK(qs.z_g ==
            doctest::Approx(glassy_fraction(360.0, p).first).epsilon(1e-14));
      CHECK(qs.F_f.isIdentity(0.0));
      CHECK(qs.F_p.isIdentity(0.0));
      CHECK(qs.F_pg.isIdentity(0.0));
      CHECK(qs.alpha == 0.0);
    }
  }

  state.trial[1][3].alpha = 0.25;
  state.trial[1][3].F_pg(0, 0) = 1.01;
  state.commit_all();
  CHECK(state.committed[1][3].alpha == 0.25);
  CHECK(state.committed[1][3].F_pg(0, 0) == 1.01);
  CHECK(state.committed[0][0].alpha == 0.0);
}
