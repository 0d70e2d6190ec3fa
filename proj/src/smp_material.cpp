#include "smp/smp_material.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace smp {

std::pair<double, double> lame(const MechParams& p, Phase phase) {
  const double E = phase == Phase::Glassy ? p.E_g : p.E_r;
  const double nu = phase == Phase::Glassy ? p.nu_g : p.nu_r;
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = E / (2.0 * (1.0 + nu));
  return {lambda, mu};
}

std::pair<double, double> glassy_fraction(double theta, const MechParams& p) {
  if (!(theta > 0.0))
    throw std::invalid_argument("glassy_fraction: theta must be positive");
  const double ex = std::exp(p.w * (theta - p.theta_t));
  // overflow of exp saturates z to 0 through IEEE inf arithmetic
  const double z = 1.0 / (1.0 + p.c * ex);
  const double dz = -p.w * z * (1.0 - z);
  return {z, dz};
}

QpState virgin_state(double theta0, const MechParams& p) {
  QpState s;
  s.z_g = glassy_fraction(theta0, p).first;
  return s;
}

Mat3 update_frozen(const QpState& committed, double z_new, const Mat3& F_total,
                   const Mat3& F_p_new, const MechParams& p) {
  const double dz = z_new - committed.z_g;
  if (dz > 0.0) {
    const double b = dz / z_new;
    return (1.0 - b) * committed.F_f + b * (F_total * F_p_new.inverse());
  }
  if (committed.z_g <= 0.0) return committed.F_f;  // nothing stored
  const double r = std::pow(z_new / committed.z_g, p.c);
  return Mat3::Identity() + r * (committed.F_f - Mat3::Identity());
}

void commit(QpState& committed, const QpState& trial) { committed = trial; }

namespace {

constexpr double kDetTol = 1.0e-12;

Mat3 sym_part(const Mat3& m) { return 0.5 * (m + m.transpose()); }

Mat3 deviator(const Mat3& m) {
  return m - (m.trace() / 3.0) * Mat3::Identity();
}

double vmises(const Mat3& s) { return std::sqrt(1.5) * deviator(s).norm(); }

// matrix exponential of a symmetric matrix by spectral decomposition
Mat3 expm_sym(const Mat3& a) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(a);
  return es.eigenvectors() *
         es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

// Full primal evaluation with every intermediate kept for the directional
// derivative pass.
struct Ctx {
  const QpState* c0;
  const MechParams* p;
  Mat3 F;
  double z = 0.0, dz_dtheta = 0.0;
  bool cooling = false;
  double lam_g = 0.0, mu_g = 0.0, lam_r = 0.0, mu_r = 0.0;
  // rubbery branch
  Mat3 Fp0_inv, Fp_new_inv;
  double Jp0 = 1.0;
  Mat3 Fhat_r, Sbar_r;
  bool rub_plastic = false;
  // frozen gradient
  Mat3 F_f, F_f_inv;
  double J_f = 1.0;
  // glassy branch
  Mat3 G0, Fhat, Shat;
  double q_tr = 0.0, dgamma = 0.0;
  Mat3 n_dir = Mat3::Zero();
  Mat3 Sbar_g, S_g;
  bool gls_plastic = false;
  // mixture
  Mat3 S;
  QpState trial;
};

Ctx evaluate(const Mat3& F, double theta, const QpState& c0,
             const MechParams& p) {
  if (!(F.determinant() > kDetTol))
    throw std::runtime_error("smp material: element inversion (det F <= 0)");
  Ctx c;
  c.c0 = &c0;
  c.p = &p;
  c.F = F;
  std::tie(c.z, c.dz_dtheta) = glassy_fraction(theta, p);
  std::tie(c.lam_g, c.mu_g) = lame(p, Phase::Glassy);
  std::tie(c.lam_r, c.mu_r) = lame(p, Phase::Rubbery);
  c.cooling = (c.z - c0.z_g) > 0.0;

  // rubbery branch: trial against the committed plastic gradient
  if (!(c0.F_p.determinant() > kDetTol))
    throw std::runtime_error("smp material: degenerate F_p");
  c.Fp0_inv = c0.F_p.inverse();
  c.Jp0 = c0.F_p.determinant();
  c.Fhat_r = F * c.Fp0_inv;
  const Mat3 Ehat_r =
      0.5 * (c.Fhat_r.transpose() * c.Fhat_r - Mat3::Identity());
  const Mat3 Shat_r =
      c.lam_r * Ehat_r.trace() * Mat3::Identity() + 2.0 * c.mu_r * Ehat_r;
  c.Sbar_r = Shat_r;
  Mat3 F_p_new = c0.F_p;
  if (p.c_p_ratio > 0.0) {
    const double q = vmises(Shat_r);
    const double yield = p.c_p_ratio * p.R_pg;
    if (q > yield) {
      c.rub_plastic = true;
      const double dg = (q - yield) / (3.0 * c.mu_r);  // perfect plasticity
      const Mat3 n = 1.5 * deviator(Shat_r) / q;
      c.Sbar_r = Shat_r - 2.0 * c.mu_r * dg * n;
      F_p_new = expm_sym(dg * n) * c0.F_p;
    }
  }
  c.Fp_new_inv = F_p_new.inverse();

  // frozen gradient
  c.F_f = update_frozen(c0, c.z, F, F_p_new, p);
  c.J_f = c.F_f.determinant();
  if (!(c.J_f > kDetTol))
    throw std::runtime_error("smp material: degenerate F_f");
  c.F_f_inv = c.F_f.inverse();

  // glassy branch with the committed plastic sandwich
  if (!(c0.F_pg.determinant() > kDetTol))
    throw std::runtime_error("smp material: degenerate F_pg");
  c.G0 = c0.F_pg.inverse();
  c.Fhat = F * c.F_f_inv * c.G0;
  const Mat3 Ehat = 0.5 * (c.Fhat.transpose() * c.Fhat - Mat3::Identity());
  c.Shat = c.lam_g * Ehat.trace() * Mat3::Identity() + 2.0 * c.mu_g * Ehat;
  c.q_tr = vmises(c.Shat);
  const double yield_g = p.R_pg + p.h * c0.alpha;
  Mat3 F_pg_new = c0.F_pg;
  double alpha_new = c0.alpha;
  c.Sbar_g = c.Shat;
  if (c.q_tr > yield_g) {
    c.gls_plastic = true;
    c.dgamma = (c.q_tr - yield_g) / (3.0 * c.mu_g + p.h);
    c.n_dir = 1.5 * deviator(c.Shat) / c.q_tr;
    c.Sbar_g = c.Shat - 2.0 * c.mu_g * c.dgamma * c.n_dir;
    F_pg_new = expm_sym(c.dgamma * c.n_dir) * c0.F_pg;
    alpha_new = c0.alpha + c.dgamma;
  }
  c.S_g = c.G0 * c.Sbar_g * c.G0.transpose();

  const Mat3 T_g = c.z * c.J_f * (c.F_f_inv * c.S_g * c.F_f_inv.transpose());
  const Mat3 T_r =
      (1.0 - c.z) * c.Jp0 * (c.Fp0_inv * c.Sbar_r * c.Fp0_inv.transpose());
  c.S = T_g + T_r;

  c.trial.z_g = c.z;
  c.trial.F_f = c.F_f;
  c.trial.F_p = F_p_new;
  c.trial.F_pg = F_pg_new;
  c.trial.alpha = alpha_new;
  return c;
}

// Exact directional derivative of the mixture stress along (dF, dtheta).
// The rubbery plastic correction uses the elastic approximation (default
// configuration has the rubbery flow disabled).
Mat3 dstress(const Ctx& c, const Mat3& dF, double dtheta) {
  const QpState& c0 = *c.c0;
  const MechParams& p = *c.p;
  const double dz = c.dz_dtheta * dtheta;

  // rubbery branch
  const Mat3 dFhat_r = dF * c.Fp0_inv;
  const Mat3 dEhat_r = sym_part(c.Fhat_r.transpose() * dFhat_r);
  const Mat3 dSbar_r = c.lam_r * dEhat_r.trace() * Mat3::Identity() +
                       2.0 * c.mu_r * dEhat_r;

  // frozen gradient
  Mat3 dF_f = Mat3::Zero();
  if (c.cooling) {
    const double beta = (c.z - c0.z_g) / c.z;
    const double dbeta = (c0.z_g / (c.z * c.z)) * dz;
    const Mat3 FFp = c.F * c.Fp_new_inv;
    dF_f = dbeta * (FFp - c0.F_f) + beta * (dF * c.Fp_new_inv);
  } else if (c0.z_g > 0.0 && c.z > 0.0) {
    const double r = std::pow(c.z / c0.z_g, p.c);
    const double dr = p.c * r / c.z * dz;
    dF_f = dr * (c0.F_f - Mat3::Identity());
  }
  const Mat3 dFf_inv = -c.F_f_inv * dF_f * c.F_f_inv;
  const double dJ_f = c.J_f * (c.F_f_inv * dF_f).trace();

  // glassy branch
  const Mat3 dFhat = dF * c.F_f_inv * c.G0 + c.F * dFf_inv * c.G0;
  const Mat3 dEhat = sym_part(c.Fhat.transpose() * dFhat);
  const Mat3 dShat =
      c.lam_g * dEhat.trace() * Mat3::Identity() + 2.0 * c.mu_g * dEhat;
  Mat3 dSbar_g = dShat;
  if (c.gls_plastic) {
    const double dq = (c.n_dir.array() * dShat.array()).sum();
    const double ddg = dq / (3.0 * c.mu_g + p.h);
    const Mat3 dn = 1.5 * deviator(dShat) / c.q_tr - c.n_dir * (dq / c.q_tr);
    dSbar_g = dShat - 2.0 * c.mu_g * (ddg * c.n_dir + c.dgamma * dn);
  }
  const Mat3 dS_g = c.G0 * dSbar_g * c.G0.transpose();

  const Mat3 core_g = c.F_f_inv * c.S_g * c.F_f_inv.transpose();
  const Mat3 dT_g =
      dz * c.J_f * core_g + c.z * dJ_f * core_g +
      c.z * c.J_f *
          (dFf_inv * c.S_g * c.F_f_inv.transpose() +
           c.F_f_inv * dS_g * c.F_f_inv.transpose() +
           c.F_f_inv * c.S_g * dFf_inv.transpose());
  const Mat3 core_r = c.Fp0_inv * c.Sbar_r * c.Fp0_inv.transpose();
  const Mat3 dT_r = -dz * c.Jp0 * core_r +
                    (1.0 - c.z) * c.Jp0 *
                        (c.Fp0_inv * dSbar_r * c.Fp0_inv.transpose());
  return dT_g + dT_r;
}

}  // namespace

ReturnMapResult return_mapping(const Mat3& F, double theta,
                               const QpState& committed, const MechParams& p,
                               bool with_tangent) {
  const Ctx c = evaluate(F, theta, committed, p);
  ReturnMapResult out;
  out.st.S = c.S;
  out.trial = c.trial;
  out.glassy_plastic = c.gls_plastic;
  out.rubbery_plastic = c.rub_plastic;
  out.glassy_vm = vmises(c.Sbar_g);
  if (with_tangent) {
    for (int j = 0; j < 9; ++j) {
      Mat3 dF = Mat3::Zero();
      dF(j % 3, j / 3) = 1.0;  // column-major flattening: index = row + 3 col
      const Mat3 dS = dstress(c, dF, 0.0);
      out.st.dSdF.col(j) =
          Eigen::Map<const Eigen::Matrix<double, 9, 1>>(dS.data());
    }
    out.st.dSdTheta = dstress(c, Mat3::Zero(), 1.0);
  }
  return out;
}

Mat9 tangent_dSdE(const StressTangent& st, const Mat3& F) {
  const Mat3 Fit = F.inverse().transpose();
  Mat9 c = Mat9::Zero();
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      Mat3 de = Mat3::Zero();
      de(k, l) += 0.5;
      de(l, k) += 0.5;
      const Mat3 df = Fit * de;
      c.col(k + 3 * l) =
          st.dSdF * Eigen::Map<const Eigen::Matrix<double, 9, 1>>(df.data());
    }
  return c;
}

}  // namespace smp
