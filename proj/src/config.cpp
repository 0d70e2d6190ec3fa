#include "smp/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace smp {

namespace {

constexpr int kSecSteps = 200;   // default step count over the sec cycle
constexpr int kCvsSteps = 1280;  // default step count over the cvs cycle

std::string fmt17(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string fmt_program(const PiecewiseLinear& p) {
  std::string s;
  for (const auto& [t, v] : p.points()) {
    if (!s.empty()) s += ", ";
    s += fmt17(t) + ":" + fmt17(v);
  }
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

struct KeyCtx {
  const std::string& origin;
  int line;
  std::string key;  // section.name
};

[[noreturn]] void fail(const KeyCtx& c, const std::string& what) {
  throw std::runtime_error(c.origin + ":" + std::to_string(c.line) + ": " +
                           what + " for key '" + c.key + "'");
}

double to_double(const KeyCtx& c, const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    fail(c, "malformed number '" + s + "'");
  return v;
}

int to_int(const KeyCtx& c, const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(c, "malformed integer '" + s + "'");
  return v;
}

bool to_bool(const KeyCtx& c, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail(c, "malformed boolean '" + s + "' (use true/false)");
}

// "t:v, t:v, ..." with strictly increasing t.
PiecewiseLinear to_program(const KeyCtx& c, const std::string& s) {
  std::vector<std::pair<double, double>> pts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(c, "empty program entry");
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      fail(c, "program entry '" + item + "' is not of the form t:value");
    pts.emplace_back(to_double(c, trim(item.substr(0, colon))),
                     to_double(c, trim(item.substr(colon + 1))));
  }
  if (pts.empty()) fail(c, "empty program");
  try {
    return PiecewiseLinear(std::move(pts));
  } catch (const std::invalid_argument& e) {
    fail(c, std::string(e.what()));
  }
}

// Which schedule entries the file pinned down explicitly.
struct ScheduleFlags {
  bool theta = false;
  bool grip = false;
  bool grip_release = false;
  bool ambient = false;
  bool i0 = false;
  bool dt = false;
  bool t_end = false;
};

// Rebuilds the drive programs that were not given explicitly from the
// scenario scalars, so a default configuration is complete and echoable.
void resolve_schedule(ScenarioConfig& c, const ScheduleFlags& given) {
  if (c.name == "sec") {
    const double T = c.sec_t_phase;
    const double hot = c.sec_theta_hot, cold = c.sec_theta_cold;
    if (!given.theta)
      c.theta_program = PiecewiseLinear(
          {{0.0, hot}, {T, hot}, {2 * T, cold}, {3 * T, cold}, {4 * T, hot}});
    if (!given.grip)
      c.grip = PiecewiseLinear({{0.0, 0.0}, {T, c.sec_eps0 * c.edge}});
    if (!given.grip_release) c.grip_release = 2.0 * T;
    if (!given.ambient) c.thermal.theta_B = c.theta_program;
    if (!given.i0) c.coil.i0 = PiecewiseLinear::constant(0.0);
    if (!given.t_end) c.t_end = 4.0 * T;
    if (!given.dt) c.solver.dt = c.t_end / kSecSteps;
  } else if (c.name == "cvs") {
    const double t1 = c.cvs_t_load;
    const double t2 = t1 + c.cvs_t_cool;
    const double t3 = t2 + c.cvs_t_hold;
    const double t4 = t3 + c.cvs_t_heat;
    const double hot = c.cvs_theta_hot, cold = c.cvs_theta_cold;
    if (!given.theta)
      c.theta_program = PiecewiseLinear(
          {{0.0, hot}, {t1, hot}, {t2, cold}, {t3, cold}, {t4, hot}});
    if (!given.grip)
      c.grip = PiecewiseLinear({{0.0, 0.0}, {t1, -c.cvs_crush}});
    if (!given.grip_release) c.grip_release = t2;
    if (!given.ambient)
      c.thermal.theta_B =
          PiecewiseLinear({{0.0, hot}, {t1, hot}, {t1 + 0.5 * (t2 - t1), cold}});
    if (!given.i0)
      c.coil.i0 = PiecewiseLinear(
          {{0.0, 0.0}, {t3, 0.0}, {t3 + c.cvs_i0_ramp, c.cvs_i0}});
    if (!given.t_end) c.t_end = t4;
    if (!given.dt) c.solver.dt = c.t_end / kCvsSteps;
  }
}

// One key from the file. Returns false for keys no section knows about.
bool apply_key(ScenarioConfig& c, ScheduleFlags& fl, const KeyCtx& k,
               const std::string& val) {
  const std::string& key = k.key;
  // [scenario]
  if (key == "scenario.name") {
    if (val != "sec" && val != "cvs")
      fail(k, "unknown scenario '" + val + "' (sec or cvs)");
    c.name = val;
  } else if (key == "scenario.mode") {
    if (val != "imposed" && val != "coupled")
      fail(k, "unknown mode '" + val + "' (imposed or coupled)");
    c.mode = val;
  } else if (key == "scenario.out_dir") {
    c.out_dir = val;
  } else if (key == "scenario.em_body_force") {
    c.em_body_force = to_bool(k, val);
  } else if (key == "scenario.period_averaged") {
    c.period_averaged = to_bool(k, val);
  }
  // [mesh]
  else if (key == "mesh.edge") c.edge = to_double(k, val);
  else if (key == "mesh.r_outer") c.r_outer = to_double(k, val);
  else if (key == "mesh.thickness") c.thickness = to_double(k, val);
  else if (key == "mesh.length") c.length = to_double(k, val);
  else if (key == "mesh.n_circ") c.n_circ = to_int(k, val);
  else if (key == "mesh.n_rad") c.n_rad = to_int(k, val);
  else if (key == "mesh.n_axial") c.n_axial = to_int(k, val);
  // [sec]
  else if (key == "sec.eps0") c.sec_eps0 = to_double(k, val);
  else if (key == "sec.theta_hot") c.sec_theta_hot = to_double(k, val);
  else if (key == "sec.theta_cold") c.sec_theta_cold = to_double(k, val);
  else if (key == "sec.t_phase") c.sec_t_phase = to_double(k, val);
  // [cvs]
  else if (key == "cvs.crush") c.cvs_crush = to_double(k, val);
  else if (key == "cvs.theta_hot") c.cvs_theta_hot = to_double(k, val);
  else if (key == "cvs.theta_cold") c.cvs_theta_cold = to_double(k, val);
  else if (key == "cvs.t_load") c.cvs_t_load = to_double(k, val);
  else if (key == "cvs.t_cool") c.cvs_t_cool = to_double(k, val);
  else if (key == "cvs.t_hold") c.cvs_t_hold = to_double(k, val);
  else if (key == "cvs.t_heat") c.cvs_t_heat = to_double(k, val);
  else if (key == "cvs.i0") c.cvs_i0 = to_double(k, val);
  else if (key == "cvs.i0_ramp") c.cvs_i0_ramp = to_double(k, val);
  // [mech]
  else if (key == "mech.E_r") c.mech.E_r = to_double(k, val);
  else if (key == "mech.E_g") c.mech.E_g = to_double(k, val);
  else if (key == "mech.nu_r") c.mech.nu_r = to_double(k, val);
  else if (key == "mech.nu_g") c.mech.nu_g = to_double(k, val);
  else if (key == "mech.R_pg") c.mech.R_pg = to_double(k, val);
  else if (key == "mech.h") c.mech.h = to_double(k, val);
  else if (key == "mech.delta_theta") c.mech.delta_theta = to_double(k, val);
  else if (key == "mech.theta_t") c.mech.theta_t = to_double(k, val);
  else if (key == "mech.w") c.mech.w = to_double(k, val);
  else if (key == "mech.c") c.mech.c = to_double(k, val);
  else if (key == "mech.c_p_ratio") c.mech.c_p_ratio = to_double(k, val);
  // [thermal]
  else if (key == "thermal.rho0") c.thermal.rho0 = to_double(k, val);
  else if (key == "thermal.cp") c.thermal.cp = to_double(k, val);
  else if (key == "thermal.kappa0") c.thermal.kappa0 = to_double(k, val);
  else if (key == "thermal.kappa_alpha")
    c.thermal.kappa_alpha = to_double(k, val);
  else if (key == "thermal.theta_ref") c.thermal.theta_ref = to_double(k, val);
  else if (key == "thermal.h_E") c.thermal.h_E = to_double(k, val);
  else if (key == "thermal.theta_B") {
    c.thermal.theta_B = to_program(k, val);
    fl.ambient = true;
  } else if (key == "thermal.eps_R") c.thermal.eps_R = to_double(k, val);
  else if (key == "thermal.sigma_R") c.thermal.sigma_R = to_double(k, val);
  else if (key == "thermal.theta_R") c.thermal.theta_R = to_double(k, val);
  // [em]
  else if (key == "em.sigma0") c.em.sigma0 = to_double(k, val);
  else if (key == "em.sigma_alpha") c.em.sigma_alpha = to_double(k, val);
  else if (key == "em.theta_ref") c.em.theta_ref = to_double(k, val);
  else if (key == "em.mu_r") c.em.mu_r = to_double(k, val);
  // [coil]
  else if (key == "coil.turns") c.coil.turns = to_double(k, val);
  else if (key == "coil.length") c.coil.length = to_double(k, val);
  else if (key == "coil.mu_r") c.coil.mu_r = to_double(k, val);
  else if (key == "coil.waveform_a") c.coil.waveform_a = to_double(k, val);
  else if (key == "coil.waveform_b") c.coil.waveform_b = to_double(k, val);
  else if (key == "coil.frequency") c.coil.frequency = to_double(k, val);
  else if (key == "coil.i0") {
    c.coil.i0 = to_program(k, val);
    fl.i0 = true;
  }
  // [solver]
  else if (key == "solver.dt") {
    c.solver.dt = to_double(k, val);
    fl.dt = true;
  } else if (key == "solver.t_end") {
    c.t_end = to_double(k, val);
    fl.t_end = true;
  } else if (key == "solver.newton_tol") c.solver.newton_tol = to_double(k, val);
  else if (key == "solver.newton_abs") c.solver.newton_abs = to_double(k, val);
  else if (key == "solver.newton_max") c.solver.newton_max = to_int(k, val);
  else if (key == "solver.max_cuts") c.solver.max_cuts = to_int(k, val);
  else if (key == "solver.staggered") c.solver.staggered = to_bool(k, val);
  // [schedule]
  else if (key == "schedule.theta") {
    c.theta_program = to_program(k, val);
    fl.theta = true;
  } else if (key == "schedule.grip") {
    c.grip = to_program(k, val);
    fl.grip = true;
  } else if (key == "schedule.grip_release") {
    c.grip_release = to_double(k, val);
    fl.grip_release = true;
  } else {
    return false;
  }
  return true;
}

struct RawLine {
  int line;
  std::string key;  // section.name
  std::string value;
};

std::vector<RawLine> tokenize(const std::string& text,
                              const std::string& origin) {
  std::vector<RawLine> out;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(no) +
                                 ": unterminated section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::runtime_error(origin + ":" + std::to_string(no) +
                                 ": empty section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(no) +
                               ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(no) +
                               ": empty key");
    if (section.empty())
      throw std::runtime_error(origin + ":" + std::to_string(no) + ": key '" +
                               key + "' outside any [section]");
    out.push_back({no, section + "." + key, trim(line.substr(eq + 1))});
  }
  return out;
}

}  // namespace

void ScenarioConfig::check() const {
  if (name != "sec" && name != "cvs")
    throw std::invalid_argument("config: scenario must be sec or cvs");
  if (mode != "imposed" && mode != "coupled")
    throw std::invalid_argument("config: mode must be imposed or coupled");
  if (!(edge > 0.0)) throw std::invalid_argument("config: edge must be > 0");
  if (!(r_outer > thickness && thickness > 0.0 && length > 0.0))
    throw std::invalid_argument("config: bad tube dimensions");
  if (n_circ < 4 || n_circ % 4 != 0)
    throw std::invalid_argument(
        "config: n_circ must be a positive multiple of 4 (plate grips sit on "
        "the y extremes)");
  if (n_rad < 1 || n_axial < 1)
    throw std::invalid_argument("config: tube subdivisions must be >= 1");
  if (!(sec_eps0 > 0.0 && sec_eps0 < 0.5))
    throw std::invalid_argument("config: sec.eps0 must lie in (0, 0.5)");
  if (!(sec_t_phase > 0.0))
    throw std::invalid_argument("config: sec.t_phase must be > 0");
  if (!(cvs_crush > 0.0 && cvs_crush < 2.0 * r_outer))
    throw std::invalid_argument("config: cvs.crush must lie in (0, 2 r_outer)");
  if (!(cvs_t_load > 0.0 && cvs_t_cool > 0.0 && cvs_t_hold > 0.0 &&
        cvs_t_heat > 0.0))
    throw std::invalid_argument("config: cvs phase durations must be > 0");
  if (!(cvs_i0 >= 0.0))
    throw std::invalid_argument("config: cvs.i0 must be >= 0");
  if (!(cvs_i0_ramp > 0.0 && cvs_i0_ramp <= cvs_t_heat))
    throw std::invalid_argument(
        "config: cvs.i0_ramp must lie in (0, cvs.t_heat]");
  mech.check();
  thermal.check();
  coil.check();
  solver.check();
  if (!(t_end > 0.0)) throw std::invalid_argument("config: t_end must be > 0");
  if (theta_program.empty() || grip.empty())
    throw std::invalid_argument("config: schedule programs must be nonempty");
}

ScenarioConfig default_config(const std::string& scenario) {
  ScenarioConfig c;
  if (scenario == "sec") {
    c.name = "sec";
    c.mode = "imposed";
    c.mech = MechParams::sec_defaults();
  } else if (scenario == "cvs") {
    c.name = "cvs";
    c.mode = "coupled";
    c.mech = MechParams::cvs_defaults();
  } else {
    throw std::invalid_argument("default_config: unknown scenario '" +
                                scenario + "'");
  }
  resolve_schedule(c, {});
  return c;
}

ScenarioConfig parse_config_text(const std::string& text,
                                 const CliOverrides& cli,
                                 const std::string& origin) {
  const std::vector<RawLine> lines = tokenize(text, origin);

  // The scenario decides the defaults, so find it before applying anything.
  std::string scenario = cli.scenario;
  if (scenario.empty()) {
    scenario = "sec";
    for (const RawLine& rl : lines)
      if (rl.key == "scenario.name") scenario = rl.value;
    if (scenario != "sec" && scenario != "cvs")
      throw std::runtime_error(origin + ": unknown scenario '" + scenario +
                               "' (sec or cvs)");
  }

  ScenarioConfig c = default_config(scenario);
  ScheduleFlags fl;
  for (const RawLine& rl : lines) {
    const KeyCtx k{origin, rl.line, rl.key};
    if (!apply_key(c, fl, k, rl.value)) fail(k, "unknown key");
  }

  c.name = scenario;  // a file name= is overridden by the CLI choice
  if (!cli.mode.empty()) {
    if (cli.mode != "imposed" && cli.mode != "coupled")
      throw std::runtime_error("cli: unknown mode '" + cli.mode + "'");
    c.mode = cli.mode;
  }
  if (!cli.out_dir.empty()) c.out_dir = cli.out_dir;
  if (cli.dt > 0.0) {
    c.solver.dt = cli.dt;
    fl.dt = true;
  }

  resolve_schedule(c, fl);
  c.check();
  return c;
}

ScenarioConfig parse_config(const std::string& path, const CliOverrides& cli) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), cli, path);
}

std::string echo_config(const ScenarioConfig& c) {
  std::ostringstream o;
  const auto b = [](bool v) { return v ? "true" : "false"; };
  o << "# resolved configuration\n";
  o << "[scenario]\n";
  o << "name = " << c.name << "\n";
  o << "mode = " << c.mode << "\n";
  o << "out_dir = " << c.out_dir << "\n";
  o << "em_body_force = " << b(c.em_body_force) << "\n";
  o << "period_averaged = " << b(c.period_averaged) << "\n\n";
  o << "[mesh]\n";
  o << "edge = " << fmt17(c.edge) << "\n";
  o << "r_outer = " << fmt17(c.r_outer) << "\n";
  o << "thickness = " << fmt17(c.thickness) << "\n";
  o << "length = " << fmt17(c.length) << "\n";
  o << "n_circ = " << c.n_circ << "\n";
  o << "n_rad = " << c.n_rad << "\n";
  o << "n_axial = " << c.n_axial << "\n\n";
  o << "[sec]\n";
  o << "eps0 = " << fmt17(c.sec_eps0) << "\n";
  o << "theta_hot = " << fmt17(c.sec_theta_hot) << "\n";
  o << "theta_cold = " << fmt17(c.sec_theta_cold) << "\n";
  o << "t_phase = " << fmt17(c.sec_t_phase) << "\n\n";
  o << "[cvs]\n";
  o << "crush = " << fmt17(c.cvs_crush) << "\n";
  o << "theta_hot = " << fmt17(c.cvs_theta_hot) << "\n";
  o << "theta_cold = " << fmt17(c.cvs_theta_cold) << "\n";
  o << "t_load = " << fmt17(c.cvs_t_load) << "\n";
  o << "t_cool = " << fmt17(c.cvs_t_cool) << "\n";
  o << "t_hold = " << fmt17(c.cvs_t_hold) << "\n";
  o << "t_heat = " << fmt17(c.cvs_t_heat) << "\n";
  o << "i0 = " << fmt17(c.cvs_i0) << "\n";
  o << "i0_ramp = " << fmt17(c.cvs_i0_ramp) << "\n\n";
  o << "[mech]\n";
  o << "E_r = " << fmt17(c.mech.E_r) << "\n";
  o << "E_g = " << fmt17(c.mech.E_g) << "\n";
  o << "nu_r = " << fmt17(c.mech.nu_r) << "\n";
  o << "nu_g = " << fmt17(c.mech.nu_g) << "\n";
  o << "R_pg = " << fmt17(c.mech.R_pg) << "\n";
  o << "h = " << fmt17(c.mech.h) << "\n";
  o << "delta_theta = " << fmt17(c.mech.delta_theta) << "\n";
  o << "theta_t = " << fmt17(c.mech.theta_t) << "\n";
  o << "w = " << fmt17(c.mech.w) << "\n";
  o << "c = " << fmt17(c.mech.c) << "\n";
  o << "c_p_ratio = " << fmt17(c.mech.c_p_ratio) << "\n\n";
  o << "[thermal]\n";
  o << "rho0 = " << fmt17(c.thermal.rho0) << "\n";
  o << "cp = " << fmt17(c.thermal.cp) << "\n";
  o << "kappa0 = " << fmt17(c.thermal.kappa0) << "\n";
  o << "kappa_alpha = " << fmt17(c.thermal.kappa_alpha) << "\n";
  o << "theta_ref = " << fmt17(c.thermal.theta_ref) << "\n";
  o << "h_E = " << fmt17(c.thermal.h_E) << "\n";
  o << "theta_B = " << fmt_program(c.thermal.theta_B) << "\n";
  o << "eps_R = " << fmt17(c.thermal.eps_R) << "\n";
  o << "sigma_R = " << fmt17(c.thermal.sigma_R) << "\n";
  o << "theta_R = " << fmt17(c.thermal.theta_R) << "\n\n";
  o << "[em]\n";
  o << "sigma0 = " << fmt17(c.em.sigma0) << "\n";
  o << "sigma_alpha = " << fmt17(c.em.sigma_alpha) << "\n";
  o << "theta_ref = " << fmt17(c.em.theta_ref) << "\n";
  o << "mu_r = " << fmt17(c.em.mu_r) << "\n\n";
  o << "[coil]\n";
  o << "turns = " << fmt17(c.coil.turns) << "\n";
  o << "length = " << fmt17(c.coil.length) << "\n";
  o << "mu_r = " << fmt17(c.coil.mu_r) << "\n";
  o << "waveform_a = " << fmt17(c.coil.waveform_a) << "\n";
  o << "waveform_b = " << fmt17(c.coil.waveform_b) << "\n";
  o << "frequency = " << fmt17(c.coil.frequency) << "\n";
  o << "i0 = " << fmt_program(c.coil.i0) << "\n\n";
  o << "[solver]\n";
  o << "dt = " << fmt17(c.solver.dt) << "\n";
  o << "t_end = " << fmt17(c.t_end) << "\n";
  o << "newton_tol = " << fmt17(c.solver.newton_tol) << "\n";
  o << "newton_abs = " << fmt17(c.solver.newton_abs) << "\n";
  o << "newton_max = " << c.solver.newton_max << "\n";
  o << "max_cuts = " << c.solver.max_cuts << "\n";
  o << "staggered = " << b(c.solver.staggered) << "\n\n";
  o << "[schedule]\n";
  o << "theta = " << fmt_program(c.theta_program) << "\n";
  o << "grip = " << fmt_program(c.grip) << "\n";
  o << "grip_release = " << fmt17(c.grip_release) << "\n";
  return o.str();
}

}  // namespace smp
