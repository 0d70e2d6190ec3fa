#include "smp/coil.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smp {

namespace {
constexpr double kMu0 = 4.0e-7 * std::numbers::pi;
constexpr double kLightSpeed = 2.99792458e8;
}  // namespace

double CoilSpec::mu() const { return kMu0 * mu_r; }
double CoilSpec::omega() const { return 2.0 * std::numbers::pi * frequency; }

void CoilSpec::check() const {
  if (!(turns > 0.0 && length > 0.0 && frequency > 0.0 && mu_r > 0.0))
    throw std::invalid_argument("coil: N, L, f, mu must be positive");
}

double coil_current(const CoilSpec& c, double t) {
  return c.i0(t) * (c.waveform_a + c.waveform_b * std::sin(c.omega() * t));
}

double coil_current_rate(const CoilSpec& c, double t) {
  const double s = c.waveform_a + c.waveform_b * std::sin(c.omega() * t);
  return c.i0.rate(t) * s +
         c.i0(t) * c.waveform_b * c.omega() * std::cos(c.omega() * t);
}

double b_source(const CoilSpec& c, double t) {
  return c.mu() * c.turns / c.length * coil_current(c, t);
}

double b_source_rate(const CoilSpec& c, double t) {
  return c.mu() * c.turns / c.length * coil_current_rate(c, t);
}

double b_source_envelope(const CoilSpec& c, double t) {
  return c.mu() * c.turns / c.length * c.i0(t) * c.waveform_b;
}

double b_source_rate_envelope(const CoilSpec& c, double t) {
  return c.mu() * c.turns / c.length * c.i0(t) * c.waveform_b * c.omega();
}

CoilEval a_source(const CoilSpec& c, double x, double y, double t,
                  bool period_averaged) {
  CoilEval e;
  const double b = period_averaged ? b_source_envelope(c, t) : b_source(c, t);
  e.b_dot = period_averaged ? b_source_rate_envelope(c, t) : b_source_rate(c, t);
  e.a = 0.5 * b * Vec3(-y, x, 0.0);
  e.da_dt = 0.5 * e.b_dot * Vec3(-y, x, 0.0);
  e.b = Vec3(0.0, 0.0, b);
  return e;
}

Mat3 a_source_rate_gradient(const CoilSpec& c, double t, bool period_averaged) {
  const double bd =
      period_averaged ? b_source_rate_envelope(c, t) : b_source_rate(c, t);
  Mat3 g = Mat3::Zero();
  g(0, 1) = -0.5 * bd;
  g(1, 0) = 0.5 * bd;
  return g;
}

CoilLagrangian a_source_lagrangian(const CoilSpec& c, const Vec3& X,
                                   const Vec3& u, const Mat3& F, double t,
                                   bool period_averaged) {
  const CoilEval e =
      a_source(c, X.x() + u.x(), X.y() + u.y(), t, period_averaged);
  CoilLagrangian out;
  out.A = F.transpose() * e.a;
  out.A_dot = F.transpose() * e.da_dt;
  return out;
}

MqsValidity mqs_validity(const CoilSpec& c, double sigma, double L_sys) {
  if (!(sigma > 0.0 && L_sys > 0.0))
    throw std::invalid_argument("mqs_validity: sigma and L_sys must be positive");
  c.check();
  MqsValidity v;
  v.skin_depth = std::sqrt(2.0 / (c.mu() * sigma * c.omega()));
  v.wavelength = kLightSpeed / c.frequency;
  v.L_sys = L_sys;
  v.skin_ok = v.skin_depth >= L_sys;
  v.wave_ok = v.wavelength >= 100.0 * L_sys;
  return v;
}

}  // namespace smp
