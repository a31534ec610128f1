#include "degenlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace degenlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double sup_abs(const Field& u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

ReportRow info_row(int n, double h, std::string quantity, double value) {
  ReportRow r;
  r.n = n;
  r.h = h;
  r.quantity = std::move(quantity);
  r.value = value;
  return r;
}

ReportRow th_row(int n, double h, std::string quantity, double value, double threshold,
                 const char* cmp) {
  ReportRow r = info_row(n, h, std::move(quantity), value);
  r.has_threshold = true;
  r.threshold = threshold;
  r.cmp = cmp;
  if (r.cmp == "<=")
    r.pass = value <= threshold;
  else if (r.cmp == ">=")
    r.pass = value >= threshold;
  else if (r.cmp == "<")
    r.pass = value < threshold;
  else  // "abs1<=": |value - 1| <= threshold
    r.pass = std::abs(value - 1.0) <= threshold;
  return r;
}

struct Runner {
  const Scenario& s;
  Report& rep;
  Domain dom;
  OperatorSpec op;
  LayerMode mode;

  Runner(const Scenario& sc, Report& r)
      : s(sc), rep(r), dom(scenario_domain(sc)), op(scenario_operator(sc)),
        mode(scenario_layer_mode(sc)) {}

  SolveResult solve_on(const OperatorSpec& spec, const Grid& grid) const {
    const Field init = scenario_init(s, grid);
    return solve_elliptic(spec, grid, init, mode, s.solver.tol, s.solver.max_iter,
                          s.solver.dt_max);
  }

  void dump(int n, const Grid& grid, const Field& u) const {
    rep.fields.push_back({n, grid, u});
  }
};

void run_collapse(Runner& r) {
  for (int n : r.s.grids) {
    const Grid grid = build_grid(r.dom, n);
    const SolveResult res = r.solve_on(r.op, grid);
    r.rep.rows.push_back(th_row(n, grid.h, "converged", res.converged ? 1.0 : 0.0, 1.0, ">="));
    r.rep.rows.push_back(th_row(n, grid.h, "sup_u", sup_abs(res.field), 1e-6, "<="));
    r.rep.rows.push_back(info_row(n, grid.h, "iterations", double(res.iterations)));
    r.dump(n, grid, res.field);
  }
}

void run_subcritical(Runner& r) {
  const ClosedFormHJ cf = make_closed_form(r.s.op.m, r.s.op.mu);
  for (int n : r.s.grids) {
    const Grid grid = build_grid(r.dom, n);
    const SolveResult res = r.solve_on(r.op, grid);
    const Field ustar = sample_closed_form(cf, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid.d[i] >= 0.2) err = std::max(err, std::abs(res.field[i] - ustar[i]));
    r.rep.rows.push_back(th_row(n, grid.h, "converged", res.converged ? 1.0 : 0.0, 1.0, ">="));
    r.rep.rows.push_back(th_row(n, grid.h, "err_interior", err, 0.05, "<="));
    r.rep.rows.push_back(th_row(n, grid.h, "sup_u", sup_abs(res.field), 0.5, ">="));
    r.rep.rows.push_back(info_row(n, grid.h, "iterations", double(res.iterations)));
    r.dump(n, grid, res.field);
  }
}

void run_threshold_sweep(Runner& r) {
  std::vector<double> mus = r.s.sweep_mus;
  if (mus.empty()) mus = {1.0, 1.5, 2.0, 3.0};
  for (int n : r.s.grids) {
    const Grid grid = build_grid(r.dom, n);
    for (double mu : mus) {
      const OperatorSpec spec = scenario_operator_with_mu(r.s, mu);
      const SolveResult res = r.solve_on(spec, grid);
      const double sup = sup_abs(res.field);
      const std::string tag = "(mu=" + fmt_short(mu) + ")";
      r.rep.rows.push_back(
          th_row(n, grid.h, "converged" + tag, res.converged ? 1.0 : 0.0, 1.0, ">="));
      if (mu < r.s.op.m)
        r.rep.rows.push_back(th_row(n, grid.h, "sup_u" + tag, sup, 0.3, ">="));
      else
        r.rep.rows.push_back(th_row(n, grid.h, "sup_u" + tag, sup, 0.02, "<="));
      r.dump(n, grid, res.field);
    }
  }
}

void run_implicit_dirichlet(Runner& r) {
  double prev_rel = 0.0;
  bool have_prev = false;
  for (int n : r.s.grids) {
    const Grid grid = build_grid(r.dom, n);
    const SolveResult res = r.solve_on(r.op, grid);
    const TraceResult tr = boundary_trace(res.field, grid, r.s.trace_depth, &r.op.source);
    const double band = double(r.s.trace_depth) * grid.h * (1.0 + 1e-12);
    double fmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid.d[i] <= band)
        fmax = std::max(fmax, std::abs(source_value(r.op.source, grid.point(int(i)))));
    const double rel = fmax > 0.0 ? tr.max_abs / fmax : tr.max_abs;
    r.rep.rows.push_back(th_row(n, grid.h, "converged", res.converged ? 1.0 : 0.0, 1.0, ">="));
    r.rep.rows.push_back(th_row(n, grid.h, "trace_rel", rel, 0.05, "<="));
    if (have_prev)
      r.rep.rows.push_back(th_row(n, grid.h, "trace_rel_decreasing", rel, prev_rel, "<"));
    prev_rel = rel;
    have_prev = true;
    r.rep.rows.push_back(info_row(n, grid.h, "iterations", double(res.iterations)));
    r.dump(n, grid, res.field);
  }
}

void run_dynamic_bc(Runner& r) {
  for (int n : r.s.grids) {
    const Grid grid = build_grid(r.dom, n);
    const Field init = scenario_init(r.s, grid);
    const Trajectory traj = evolve_parabolic(r.op, grid, init, r.mode, r.s.solver.T,
                                             r.s.solver.snapshot_times, r.s.solver.dt_max);
    if (r.s.init.kind == "constant") {
      // For constant init c and f = 0 the exact evolution is c * exp(-t)
      // (the Laplacian of a constant-in-x profile vanishes identically).
      double dev = 0.0;
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double ref = r.s.init.value * std::exp(-traj.times[k]);
        for (double v : traj.snapshots[k]) dev = std::max(dev, std::abs(v - ref));
      }
      r.rep.rows.push_back(th_row(n, grid.h, "max_dev_exp", dev, 1e-6, "<="));
    }
    const FitResult fit = decay_rate_fit(traj, r.s.window_t0, r.s.window_t1);
    r.rep.rows.push_back(th_row(n, grid.h, "decay_rate", fit.exponent_or_rate, 0.05, "abs1<="));
    r.rep.rows.push_back(info_row(n, grid.h, "fit_r2", fit.r_squared));
    if (!traj.snapshots.empty()) r.dump(n, grid, traj.snapshots.back());
  }
}

void run_f3_table(Runner& r) {
  std::vector<double> gammas = r.s.gammas.empty() ? std::vector<double>{0.5, 1.0} : r.s.gammas;
  std::vector<double> deltas =
      r.s.deltas.empty() ? std::vector<double>{0.4, 0.2, 0.1, 0.05} : r.s.deltas;
  const ConditionReport cr = check_f3(r.op, r.dom, gammas, deltas);
  for (const ConditionRow& row : cr.table)
    r.rep.rows.push_back(info_row(0, 0.0,
                                  "supF(gamma=" + fmt_short(row.gamma) +
                                      ";delta=" + fmt_short(row.delta) + ")",
                                  row.value));
  const double verdict_num = cr.verdict == Verdict::Supports  ? 1.0
                             : cr.verdict == Verdict::Refutes ? -1.0
                                                              : 0.0;
  if (r.s.expect == "supports")
    r.rep.rows.push_back(th_row(0, 0.0, "verdict", verdict_num, 1.0, ">="));
  else if (r.s.expect == "refutes")
    r.rep.rows.push_back(th_row(0, 0.0, "verdict", verdict_num, -1.0, "<="));
  else
    r.rep.rows.push_back(info_row(0, 0.0, "verdict", verdict_num));

  if (!cr.witness.empty()) {
    // Largest per-halving growth factor along a witness gamma-column.
    std::map<double, std::vector<ConditionRow>> by_gamma;
    for (const ConditionRow& row : cr.witness) by_gamma[row.gamma].push_back(row);
    double growth = 0.0;
    for (auto& [g, rows] : by_gamma) {
      std::sort(rows.begin(), rows.end(),
                [](const ConditionRow& a, const ConditionRow& b) { return a.delta > b.delta; });
      for (std::size_t k = 1; k < rows.size(); ++k)
        if (rows[k - 1].value > 0.0 &&
            std::abs(rows[k].delta - 0.5 * rows[k - 1].delta) < 1e-9 * rows[k - 1].delta)
          growth = std::max(growth, rows[k].value / rows[k - 1].value);
    }
    if (r.s.expect == "refutes")
      r.rep.rows.push_back(th_row(0, 0.0, "witness_growth", growth, 1.3, ">="));
    else
      r.rep.rows.push_back(info_row(0, 0.0, "witness_growth", growth));
  }
}

void run_holder_estimate(Runner& r) {
  for (int n : r.s.grids) {
    const Grid grid = build_grid(r.dom, n);
    const Field field = scenario_init(r.s, grid);
    PairPolicy policy;
    if (r.s.holder_pairs == "boundary") {
      std::optional<Point2> anchor;
      if (r.s.anchor.size() == 1) anchor = Point2{r.s.anchor[0], 0.0};
      if (r.s.anchor.size() == 2) anchor = Point2{r.s.anchor[0], r.s.anchor[1]};
      policy = boundary_pairs(r.s.holder_d_max, anchor);
    }
    policy.seed = static_cast<unsigned long long>(r.s.seed);
    const FitResult fit = holder_exponent(field, grid, policy);
    // Declared targets: the analytic boundary exponent of the sampled field.
    bool have_target = false;
    double target = 0.0, tol = 0.0;
    if (r.s.init.kind == "linear") {
      have_target = true;
      target = 1.0;
      tol = 0.01;
    } else if (r.s.init.kind == "closed_form") {
      have_target = true;
      tol = 0.1;
      const double m = r.s.init.m, mu = r.s.init.mu;
      const double mid = 0.5 * (r.s.domain.a + r.s.domain.b);
      const bool left = !r.s.anchor.empty() && r.s.anchor[0] <= mid;
      if (left && m > 1.0)
        target = std::min((m - mu) / (m - 1.0), 1.0);
      else
        target = (m - mu) / m;
    }
    if (have_target)
      r.rep.rows.push_back(
          th_row(n, grid.h, "holder_dev(target=" + fmt_short(target) + ")",
                 std::abs(fit.exponent_or_rate - target), tol, "<="));
    r.rep.rows.push_back(info_row(n, grid.h, "holder_exponent", fit.exponent_or_rate));
    r.rep.rows.push_back(info_row(n, grid.h, "holder_r2", fit.r_squared));
    r.rep.rows.push_back(info_row(n, grid.h, "holder_pairs", double(fit.sample_count)));
    r.dump(n, grid, field);
  }
}

void run_layer_mode_compare(Runner& r) {
  for (int n : r.s.grids) {
    const Grid grid = build_grid(r.dom, n);
    const Field init = scenario_init(r.s, grid);
    const SolveResult a = solve_elliptic(r.op, grid, init, drop_mode(), r.s.solver.tol,
                                         r.s.solver.max_iter, r.s.solver.dt_max);
    const SolveResult b = solve_elliptic(r.op, grid, init, ghost_mode(r.s.ghost_value),
                                         r.s.solver.tol, r.s.solver.max_iter, r.s.solver.dt_max);
    double gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      gap = std::max(gap, std::abs(a.field[i] - b.field[i]));
    r.rep.rows.push_back(
        th_row(n, grid.h, "converged_drop", a.converged ? 1.0 : 0.0, 1.0, ">="));
    r.rep.rows.push_back(
        th_row(n, grid.h, "converged_ghost", b.converged ? 1.0 : 0.0, 1.0, ">="));
    if (r.s.expect == "agree")
      r.rep.rows.push_back(th_row(n, grid.h, "mode_gap", gap, 2.0 * r.s.solver.tol, "<="));
    else if (r.s.expect == "differ")
      r.rep.rows.push_back(th_row(n, grid.h, "mode_gap", gap, 0.1, ">="));
    else
      r.rep.rows.push_back(info_row(n, grid.h, "mode_gap", gap));
    r.dump(n, grid, a.field);
  }
}

void run_condition_constants(Runner& r) {
  const double D = r.dom.max_distance();
  const ConditionReport cr =
      lemma_f5_constants(r.s.sigma_lip, r.s.sigma_over_d, r.s.psi_lip, r.s.psi_over_d, r.s.L2, D);
  const ConditionConstants& c = *cr.constants;
  r.rep.rows.push_back(info_row(0, 0.0, "L1", c.L1));
  r.rep.rows.push_back(info_row(0, 0.0, "L2", c.L2));
  r.rep.rows.push_back(info_row(0, 0.0, "alpha", c.alpha));
  r.rep.rows.push_back(info_row(0, 0.0, "beta", c.beta));
  r.rep.rows.push_back(info_row(0, 0.0, "L", c.L));
  r.rep.rows.push_back(info_row(0, 0.0, "b_F", c.b_F));
  r.rep.rows.push_back(info_row(0, 0.0, "ell", c.ell));
}

}  // namespace

const char* to_string(ReportVerdict v) {
  switch (v) {
    case ReportVerdict::Pass: return "Pass";
    case ReportVerdict::Fail: return "Fail";
    default: return "Informational";
  }
}

Report run_experiment(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.scenario = s;
  try {
    Runner r(s, rep);
    switch (s.experiment) {
      case Experiment::Collapse: run_collapse(r); break;
      case Experiment::Subcritical: run_subcritical(r); break;
      case Experiment::ThresholdSweep: run_threshold_sweep(r); break;
      case Experiment::ImplicitDirichlet: run_implicit_dirichlet(r); break;
      case Experiment::DynamicBC: run_dynamic_bc(r); break;
      case Experiment::F3Table: run_f3_table(r); break;
      case Experiment::HolderEstimate: run_holder_estimate(r); break;
      case Experiment::LayerModeCompare: run_layer_mode_compare(r); break;
      case Experiment::ConditionConstants: run_condition_constants(r); break;
    }
  } catch (const Error& e) {
    rep.error = e.what();
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!rep.error.empty()) {
    ReportRow row = info_row(0, 0.0, "error", 0.0);
    row.pass = false;
    rep.rows.push_back(row);
    rep.verdict = ReportVerdict::Fail;
    return rep;
  }
  bool any_threshold = false, all_pass = true;
  for (const ReportRow& row : rep.rows) {
    if (!row.has_threshold) continue;
    any_threshold = true;
    all_pass = all_pass && row.pass;
  }
  rep.verdict = !any_threshold        ? ReportVerdict::Informational
                : all_pass            ? ReportVerdict::Pass
                                      : ReportVerdict::Fail;
  return rep;
}

void write_report(const Report& r, const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty()) throw IoError("report path is empty");
  const fs::path root(path);
  std::error_code ec;
  fs::create_directories(root / "fields", ec);
  if (ec)
    throw IoError("cannot create report directory '" + path + "': " + ec.message());

  {
    const fs::path file = root / "report.csv";
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write '" + file.string() + "'");
    out << "experiment,n,h,quantity,value,threshold,pass\n";
    for (const ReportRow& row : r.rows) {
      out << to_string(r.scenario.experiment) << ',' << row.n << ',' << fmt(row.h) << ','
          << row.quantity << ',' << fmt(row.value) << ','
          << (row.has_threshold ? fmt(row.threshold) : std::string()) << ','
          << (row.pass ? "true" : "false") << '\n';
    }
    if (!out) throw IoError("write failed for '" + file.string() + "'");
  }

  for (const FieldDump& fd : r.fields) {
    const fs::path file = root / "fields" / (std::to_string(fd.n) + ".csv");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write '" + file.string() + "'");
    if (fd.grid.dim == 1)
      out << "node_id,x,d,u\n";
    else
      out << "node_id,x,y,d,u\n";
    for (std::size_t i = 0; i < fd.grid.size(); ++i) {
      out << i << ',' << fmt(fd.grid.x[i]) << ',';
      if (fd.grid.dim == 2) out << fmt(fd.grid.y[i]) << ',';
      out << fmt(fd.grid.d[i]) << ',' << fmt(fd.u[i]) << '\n';
    }
    if (!out) throw IoError("write failed for '" + file.string() + "'");
  }

  {
    const fs::path file = root / "meta.txt";
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write '" + file.string() + "'");
    out << serialize_scenario(r.scenario);
    out << "\n# verdict = " << to_string(r.verdict) << "\n";
    if (!out) throw IoError("write failed for '" + file.string() + "'");
  }
}

}  // namespace degenlab
