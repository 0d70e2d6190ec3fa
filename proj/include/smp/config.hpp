// INI-style scenario configuration. Files hold [section] headers and
// key = value lines with '#'/';' comments. Parsing starts from the selected
// scenario's defaults, applies the file in order and finally any command-line
// overrides; unknown keys and malformed values are hard errors that name the
// offending key and line. Drive programs (grip, imposed/ambient temperature,
// coil amplitude) are rebuilt from the scenario scalars unless the file sets
// them explicitly, so echo_config always emits a fully resolved configuration
// and parse(echo(cfg)) reproduces cfg byte for byte.

#ifndef SMP_CONFIG_HPP
#define SMP_CONFIG_HPP

#include <string>

#include "smp/coil.hpp"
#include "smp/coupled.hpp"
#include "smp/params.hpp"

namespace smp {

struct ScenarioConfig {
  // [scenario]
  std::string name = "sec";      // sec | cvs
  std::string mode = "imposed";  // imposed | coupled
  std::string out_dir = "out";
  bool em_body_force = false;
  bool period_averaged = true;

  // [mesh] cube edge for sec, tube generator for cvs
  double edge = 1.0e-3;       // (m)
  double r_outer = 1.5e-3;    // (m)
  double thickness = 2.5e-4;  // (m)
  double length = 2.0e-2;     // (m)
  int n_circ = 16;
  int n_rad = 1;
  int n_axial = 12;

  // [sec] strain/temperature cycle scalars
  double sec_eps0 = 0.1;
  double sec_theta_hot = 400.0;   // (K)
  double sec_theta_cold = 200.0;  // (K)
  double sec_t_phase = 1.0;       // (s)

  // [cvs] crimp/recovery cycle scalars
  double cvs_crush = 4.5e-4;      // plate travel (m)
  double cvs_theta_hot = 350.0;   // (K)
  double cvs_theta_cold = 325.0;  // (K)
  double cvs_t_load = 5.0e-3;     // (s)
  double cvs_t_cool = 1.0e-2;     // (s)
  double cvs_t_hold = 5.0e-3;     // (s)
  double cvs_t_heat = 1.2e-2;     // (s)
  double cvs_i0 = 1400.0;         // coil amplitude plateau (A)
  double cvs_i0_ramp = 2.0e-3;    // amplitude rise time (s)

  // [mech] / [thermal] / [em] / [coil]
  MechParams mech = MechParams::sec_defaults();
  ThermalParams thermal = ThermalParams::table2();
  EmMaterial em = EmMaterial::table2();
  CoilSpec coil;

  // [solver]
  SolverConfig solver;
  double t_end = 4.0;  // (s)

  // [schedule] resolved drive programs
  PiecewiseLinear theta_program = PiecewiseLinear::constant(400.0);
  PiecewiseLinear grip = PiecewiseLinear::constant(0.0);
  double grip_release = 2.0;  // (s)

  void check() const;
};

// Scenario defaults with the schedule resolved; scenario must be sec or cvs.
ScenarioConfig default_config(const std::string& scenario);

// Command-line overrides applied after the file; empty/non-positive = keep.
struct CliOverrides {
  std::string scenario;
  std::string mode;
  std::string out_dir;
  double dt = 0.0;
};

ScenarioConfig parse_config(const std::string& path,
                            const CliOverrides& cli = {});
// origin labels error messages in place of a file name.
ScenarioConfig parse_config_text(const std::string& text,
                                 const CliOverrides& cli = {},
                                 const std::string& origin = "<config>");

// Fully resolved INI echo of cfg (17 significant digits).
std::string echo_config(const ScenarioConfig& cfg);

}  // namespace smp

#endif
