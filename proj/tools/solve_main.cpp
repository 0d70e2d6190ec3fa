// Command-line driver: parses a scenario configuration, optionally validates
// the modelling assumptions only, and otherwise runs the scenario and writes
// its artefacts.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smp/coil.hpp"
#include "smp/config.hpp"
#include "smp/scenario.hpp"

namespace {

void report_validity(const smp::ScenarioConfig& cfg) {
  using std::printf;
  const bool cvs = cfg.name == "cvs";
  const double L_sys = cvs ? cfg.length : cfg.edge;
  const smp::MqsValidity mq = smp::mqs_validity(cfg.coil, cfg.em.sigma0, L_sys);
  printf("mqs:     skin depth %.4e m, wavelength %.4e m, L = %.4e m -> %s, %s\n",
         mq.skin_depth, mq.wavelength, mq.L_sys,
         mq.skin_ok ? "skin ok" : "SKIN DEPTH COMPARABLE TO DEVICE",
         mq.wave_ok ? "wave ok" : "WAVELENGTH NOT LARGE");

  // Rough peak Joule magnitude for the source/storage ratio: envelope loss
  // 1/2 sigma (1/2 omega b r)^2 at the outer radius and peak amplitude.
  double i0_max = 0.0;
  for (const auto& [t, v] : cfg.coil.i0.points())
    i0_max = std::max(i0_max, std::abs(v));
  const double b_ac = cfg.coil.mu() * cfg.coil.turns / cfg.coil.length *
                      i0_max * std::abs(cfg.coil.waveform_b);
  const double r_ref = cvs ? cfg.r_outer : 0.5 * cfg.edge;
  const double w_ref = 0.5 * cfg.em.sigma0 *
                       std::pow(0.5 * cfg.coil.omega() * b_ac * r_ref, 2);
  const smp::NondimReport nd =
      smp::nondim_report(cfg.thermal, L_sys, w_ref, 1.0e3, cfg.solver.dt);
  printf("thermal: T_c = %.4e s at L_c = %.4e m, source/storage = %.3e, "
         "per-step band %s\n",
         nd.T_c, nd.L_c, nd.source_storage_ratio,
         nd.per_step_band_ok ? "ok" : "EXCEEDED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled electro-thermo-mechanical SMP scenario solver"};
  std::string config_path, out_dir, scenario, mode;
  double dt = 0.0;
  bool validate_only = false;
  app.add_option("config", config_path, "configuration file (INI)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides the config)")
      ->envname("SMP_OUT_DIR");
  app.add_option("--scenario", scenario, "scenario override")
      ->check(CLI::IsMember({"sec", "cvs"}));
  app.add_option("--mode", mode, "temperature mode override")
      ->check(CLI::IsMember({"imposed", "coupled"}));
  app.add_option("--dt", dt, "time step override (s)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--validate-only", validate_only,
               "parse the configuration, report validity numbers and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    const smp::CliOverrides cli{scenario, mode, out_dir, dt};
    const smp::ScenarioConfig cfg = smp::parse_config(config_path, cli);
    std::printf("scenario %s (%s), %d step(s) of %.4e s to t = %.4e s, out '%s'\n",
                cfg.name.c_str(), cfg.mode.c_str(),
                static_cast<int>(cfg.t_end / cfg.solver.dt + 0.5),
                cfg.solver.dt, cfg.t_end, cfg.out_dir.c_str());
    report_validity(cfg);
    if (validate_only) {
      std::printf("validate-only: configuration OK\n");
      return 0;
    }
    const smp::ScenarioResult res = smp::run_scenario(cfg);
    std::printf("completed %d steps to t = %.6e s\n", res.steps, res.final_t);
    for (const std::string& f : res.files) std::printf("wrote %s\n", f.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
