// Analytic coil excitation: current waveform I_s(t) = I0(t) (a + b sin(2 pi f t)),
// uniform axial induction b_s = mu (N/L) I_s e_z of the infinite solenoid, the
// symmetric vector potential a_s = 1/2 b_s (-y, x, 0) evaluated at deformed
// coordinates, and its one-form pullback A_s = F^T a_s.

#ifndef SMP_COIL_HPP
#define SMP_COIL_HPP

#include "smp/program.hpp"
#include "smp/types.hpp"

namespace smp {

struct CoilSpec {
  double turns = 1000.0;       // N
  double length = 1.0;         // L (m)
  double mu_r = 20.0;          // of the driven material filling the solenoid
  double waveform_a = 0.0;     // DC factor
  double waveform_b = 1.0;     // AC factor
  double frequency = 1000.0;   // f (Hz)
  PiecewiseLinear i0 = PiecewiseLinear::constant(0.0);  // amplitude program (A)

  double mu() const;           // mu0 * mu_r (H/m)
  double omega() const;        // 2 pi f

  void check() const;          // positivity of N, L, f, mu
};

// I_s(t); throws before the first I0 breakpoint.
double coil_current(const CoilSpec& c, double t);
// d I_s/dt (analytic; piecewise d I0/dt included)
double coil_current_rate(const CoilSpec& c, double t);

// Axial induction magnitude b_s(t) and its time derivative.
double b_source(const CoilSpec& c, double t);
double b_source_rate(const CoilSpec& c, double t);

// Period-average envelope: b amplitude I0(t)*b-factor with the sine at peak,
// used by the averaged-source mode. The slow dI0/dt contribution is dropped.
double b_source_envelope(const CoilSpec& c, double t);
double b_source_rate_envelope(const CoilSpec& c, double t);

struct CoilEval {
  Vec3 a;        // a_s at the deformed point (Wb/m)
  Vec3 da_dt;    // partial_t a_s at fixed deformed position
  Vec3 b;        // b_s e_z (T)
  double b_dot;  // d b_s/dt used for da_dt
};
// x, y are deformed coordinates. In averaged mode the envelope rate replaces
// the instantaneous one and b uses the envelope amplitude.
CoilEval a_source(const CoilSpec& c, double x, double y, double t,
                  bool period_averaged = false);

// Spatial gradient of partial_t a_s with respect to deformed coordinates:
// d(da_dt)_i / dx_j (constant matrix times b_dot).
Mat3 a_source_rate_gradient(const CoilSpec& c, double t,
                            bool period_averaged = false);

// Lagrangian pullback at a material point: A_s = F^T a_s(X + u),
// dA_s/dt = F^T partial_t a_s with the displacement frozen.
struct CoilLagrangian {
  Vec3 A;
  Vec3 A_dot;
};
CoilLagrangian a_source_lagrangian(const CoilSpec& c, const Vec3& X,
                                   const Vec3& u, const Mat3& F, double t,
                                   bool period_averaged = false);

// Magnetoquasistatic validity report.
struct MqsValidity {
  double skin_depth;   // sqrt(2 / (mu sigma omega)) (m)
  double wavelength;   // c0 / f (m), free-space light speed
  double L_sys;        // characteristic device length (m)
  bool skin_ok;        // delta >= L_sys
  bool wave_ok;        // lambda >= 100 L_sys
};
MqsValidity mqs_validity(const CoilSpec& c, double sigma, double L_sys);

}  // namespace smp

#endif
