// Material parameter sets for the mechanical (Table-1 style) and
// electromagnetic/thermal (Table-2 style) problems, with the SEC and CVS
// default values.

#ifndef SMP_PARAMS_HPP
#define SMP_PARAMS_HPP

#include <stdexcept>
#include <utility>

#include "smp/program.hpp"

namespace smp {

enum class Phase { Glassy, Rubbery };

struct MechParams {
  double E_r = 0.9e6;        // rubbery Young modulus (Pa)
  double E_g = 771.0e6;      // glassy Young modulus (Pa)
  double nu_r = 0.49;
  double nu_g = 0.29;
  double R_pg = 10.0e6;      // glassy yield stress (Pa)
  double h = 0.0;            // hardening modulus (Pa)
  double delta_theta = 30.0; // transition half-width (K), reporting only
  double theta_t = 350.0;    // transition temperature (K)
  double w = 0.2;            // transition slope (1/K)
  double c = 1.0;            // recovery ideality
  double c_p_ratio = 0.0;    // rubbery plasticity ratio c^p

  static MechParams sec_defaults() { return {}; }
  static MechParams cvs_defaults() {
    MechParams p;
    p.delta_theta = 5.0;
    p.theta_t = 344.0;
    p.w = 0.375;
    return p;
  }

  void check() const {
    if (!(E_r > 0 && E_g > 0)) throw std::invalid_argument("moduli must be > 0");
    if (!(nu_r > 0 && nu_r < 0.5 && nu_g > 0 && nu_g < 0.5))
      throw std::invalid_argument("Poisson ratios must lie in (0, 0.5)");
    if (!(R_pg > 0)) throw std::invalid_argument("R_pg must be > 0");
    if (c < 0 || c_p_ratio < 0) throw std::invalid_argument("c, c^p must be >= 0");
  }
};

// lambda = E nu / ((1+nu)(1-2nu)), mu = E / (2(1+nu))
std::pair<double, double> lame(const MechParams& p, Phase phase);

struct EmMaterial {
  double sigma0 = 1.0e4;      // electric conductivity (S/m) at theta_ref
  double sigma_alpha = 0.0;   // linear law sigma0 (1 + alpha (theta - theta_ref))
  double theta_ref = 300.0;   // (K)
  double mu_r = 20.0;

  double sigma(double theta) const {
    return sigma0 * (1.0 + sigma_alpha * (theta - theta_ref));
  }
  double dsigma_dtheta() const { return sigma0 * sigma_alpha; }

  static EmMaterial table2() { return {}; }
};

struct ThermalParams {
  double rho0 = 270.0;        // mass density (kg/m^3)
  double cp = 10.0;           // heat capacity (J/(kg K))
  double kappa0 = 237.0;      // thermal conductivity (W/(m K)) at theta_ref
  double kappa_alpha = 0.0;   // linear law, mirrors sigma
  double theta_ref = 300.0;
  double h_E = 500.0;         // convective coefficient (W/(m^2 K))
  PiecewiseLinear theta_B = PiecewiseLinear::constant(300.0);  // bulk temp (K)
  double eps_R = 0.0;         // radiative emissivity
  double sigma_R = 5.670374419e-8;  // Stefan-Boltzmann (W/(m^2 K^4))
  double theta_R = 293.0;     // radiative reference (K)

  double kappa(double theta) const {
    return kappa0 * (1.0 + kappa_alpha * (theta - theta_ref));
  }
  double dkappa_dtheta() const { return kappa0 * kappa_alpha; }

  static ThermalParams table2() { return {}; }

  void check() const {
    if (!(rho0 > 0 && cp > 0 && kappa0 > 0))
      throw std::invalid_argument("rho0, cp, kappa must be > 0");
    if (eps_R < 0 || eps_R > 1)
      throw std::invalid_argument("emissivity must lie in [0, 1]");
  }
};

// Characteristic diffusion time T_c = rho0 cp L_c^2 / kappa and a
// source-to-storage magnitude report.
struct NondimReport {
  double T_c;
  double L_c;
  double source_storage_ratio;  // w_ref T_c / (rho0 cp dtheta_band)
  bool per_step_band_ok;
};
NondimReport nondim_report(const ThermalParams& p, double L_c,
                           double w_ref = 0.0, double dtheta_band = 1.0e3,
                           double dt = 1.0);

}  // namespace smp

#endif
