#pragma once

#include <string>
#include <vector>

#include "degenlab/analysis.hpp"

namespace degenlab {

enum class Experiment {
  Collapse,
  Subcritical,
  ThresholdSweep,
  ImplicitDirichlet,
  DynamicBC,
  F3Table,
  HolderEstimate,
  LayerModeCompare,
  ConditionConstants,
};

const char* to_string(Experiment e);

// Raw configuration mirrors (string-keyed, so scenarios serialize, compare,
// and round-trip exactly); the scenario_* builders below turn them into the
// runtime objects.
struct DomainConfig {
  std::string kind = "interval";  // interval | disk | annulus
  double a = 0.0, b = 2.0;
  double radius = 1.0;
  double r_in = 0.5, r_out = 1.0;
  bool operator==(const DomainConfig&) const = default;
};

struct OperatorConfig {
  std::string family = "deg_laplace";  // deg_laplace | deg_drift | isaacs |
                                       // pucci | first_order_hj
  double mu = 2.0;
  double tau = 0.0;
  double drift_scale = 1.0;
  std::string extension = "quarter";  // quarter | half
  double lambda = 1.0, lambda_bar = 1.0;
  double m = 1.0;
  std::vector<std::vector<ControlEntry>> controls;
  std::string source = "zero";  // zero | constant | coord_x
  double source_value = 0.0;
  bool operator==(const OperatorConfig&) const = default;
};

struct SolverConfig {
  double tol = 1e-8;
  long max_iter = 1000000;
  double dt_max = 0.0;  // 0 = no cap
  double T = 2.0;
  std::vector<double> snapshot_times;
  bool operator==(const SolverConfig&) const = default;
};

struct InitConfig {
  std::string kind = "zero";  // zero | sin | constant | linear | closed_form
  double value = 1.0;         // constant value
  double m = 2.0, mu = 1.0;   // closed-form parameters
  bool operator==(const InitConfig&) const = default;
};

struct Scenario {
  Experiment experiment = Experiment::Collapse;
  DomainConfig domain;
  OperatorConfig op;
  std::vector<int> grids{64};
  std::string layer_mode = "drop";  // drop | one_sided | ghost
  double ghost_value = 0.0;
  bool ghost_from_source = false;
  SolverConfig solver;
  InitConfig init;
  long seed = 42;
  std::string output;  // report directory; empty = no files written

  // Experiment-specific knobs (defaults are inert for other kinds).
  std::vector<double> sweep_mus;       // ThresholdSweep
  std::vector<double> gammas, deltas;  // F3Table
  std::string expect;                  // F3Table: supports|refutes;
                                       // LayerModeCompare: agree|differ
  double holder_d_max = 0.1;           // HolderEstimate window
  std::string holder_pairs = "boundary";  // boundary | all
  std::vector<double> anchor;          // [], [x] or [x, y]
  int trace_depth = 2;                 // ImplicitDirichlet
  double window_t0 = 0.5, window_t1 = 2.0;  // DynamicBC fit window
  double sigma_lip = 0.0, sigma_over_d = 0.0;  // ConditionConstants inputs
  double psi_lip = 0.0, psi_over_d = 0.0, L2 = 0.0;

  bool operator==(const Scenario&) const = default;
};

// Parses and validates a config document (sections [domain], [operator],
// [solver], [experiment]; `key = value` lines; # comments).  Defaults:
// tol = 1e-8, max_iter = 1e6, layer_mode = drop, seed = 42.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Canonical text form; load_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

// Runtime objects from the validated scenario.
Domain scenario_domain(const Scenario& s);
OperatorSpec scenario_operator(const Scenario& s);
OperatorSpec scenario_operator_with_mu(const Scenario& s, double mu);  // sweep rows
LayerMode scenario_layer_mode(const Scenario& s);
Field scenario_init(const Scenario& s, const Grid& grid);

}  // namespace degenlab
