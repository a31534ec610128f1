#pragma once

#include <string>
#include <vector>

#include "degenlab/config.hpp"

namespace degenlab {

struct ReportRow {
  int n = 0;  // grid size; 0 for grid-independent rows
  double h = 0.0;
  std::string quantity;
  double value = 0.0;
  bool has_threshold = false;
  double threshold = 0.0;
  std::string cmp;  // "<=" or ">=" (direction of the declared threshold)
  bool pass = true;
};

enum class ReportVerdict { Pass, Fail, Informational };
const char* to_string(ReportVerdict v);

struct FieldDump {
  int n = 0;
  Grid grid;
  Field u;
};

struct Report {
  Scenario scenario;
  std::vector<ReportRow> rows;
  ReportVerdict verdict = ReportVerdict::Informational;
  double wall_time = 0.0;  // seconds
  std::string error;       // nonempty when the run failed exceptionally
  std::vector<FieldDump> fields;  // final field per grid, for plotting
};

// Executes the scenario's per-grid pipeline and applies the experiment's
// declared thresholds.  Solver and analysis errors become a Fail report with
// an error row attached; this never throws for a failed run.
Report run_experiment(const Scenario& s);

// Emits report.csv, fields/<n>.csv and meta.txt under `path` (created if
// missing), 17 significant digits throughout.  Throws IoError.
void write_report(const Report& r, const std::string& path);

}  // namespace degenlab
