// Scenario drivers. run_sec exercises the uniaxial programming/recovery cycle
// on a single cube element (stretch hot, cool under grip, release cold,
// reheat free); run_cvs crimps a tube between rigid line grips, sets the
// shape by convective cooling and recovers it with coil heating. Both build a
// CoupledProblem from a resolved ScenarioConfig, march it with the monolithic
// solver and emit a record table, curve CSVs, VTK snapshots, a JSONL step log
// and the resolved configuration into cfg.out_dir.

#ifndef SMP_SCENARIO_HPP
#define SMP_SCENARIO_HPP

#include <memory>
#include <string>
#include <vector>

#include "smp/config.hpp"
#include "smp/coupled.hpp"
#include "smp/output.hpp"

namespace smp {

// t, volume-average / extreme temperatures, probe strain and stresses
// (Cauchy and second Piola-Kirchhoff yy), probe displacement, grip reaction,
// total Joule power and the glassy-branch von Mises magnitude at the probe.
std::vector<std::string> record_header();

// Where the time series is sampled.
struct ProbeSpec {
  int elem = 0;                  // stress probe element / quadrature point
  int qp = 0;
  int u_node = 0;                // displacement probe node
  int comp = 1;                  // probed displacement/force component
  double L_ref = 1.0;            // eps = u / L_ref
  std::vector<int> force_nodes;  // reaction summed over these nodes
};

// One record row at the committed state st.
std::vector<double> probe_row(const CoupledProblem& pb, const CoupledState& st,
                              const ProbeSpec& probes);

// A fully assembled scenario problem; mesh is heap-held so pb.mesh stays
// valid when the struct moves.
struct ScenarioProblem {
  std::unique_ptr<Mesh> mesh;
  CoupledProblem pb;
  double theta0 = 293.0;
  ProbeSpec probes;
  std::vector<double> snapshot_times;  // phase boundaries for VTK emission
};

ScenarioProblem build_sec(const ScenarioConfig& cfg);
ScenarioProblem build_cvs(const ScenarioConfig& cfg);

struct ScenarioResult {
  Table records;                   // one row per committed step, t = 0 first
  std::vector<std::string> files;  // artefacts written, in emission order
  int steps = 0;
  Mesh mesh;
  DofLayout layout;
  VecX final_v;
  double final_t = 0.0;
};

ScenarioResult run_sec(const ScenarioConfig& cfg);
ScenarioResult run_cvs(const ScenarioConfig& cfg);
// Dispatches on cfg.name.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace smp

#endif
