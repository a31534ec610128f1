#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "degenlab/experiments.hpp"

namespace {

using namespace degenlab;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// An unreadable config is a config error (exit 2), unlike report-writing
// failures which stay runtime errors (exit 3).
Scenario load_cfg(const std::string& path) {
  try {
    return load_scenario_file(path);
  } catch (const IoError& e) {
    throw ValidationError(e.what());
  }
}

int run_scenario(const std::string& config_path) {
  const Scenario s = load_cfg(config_path);
  const Report rep = run_experiment(s);
  std::printf("experiment: %s\n", to_string(s.experiment));
  for (const ReportRow& row : rep.rows) {
    std::printf("  n=%-5d %-34s %-24s", row.n, row.quantity.c_str(), fmt(row.value).c_str());
    if (row.has_threshold)
      std::printf(" %s %-12s %s", row.cmp.c_str(), fmt(row.threshold).c_str(),
                  row.pass ? "pass" : "FAIL");
    std::printf("\n");
  }
  if (!rep.error.empty()) std::printf("error: %s\n", rep.error.c_str());
  std::printf("verdict: %s  (wall %.2f s)\n", to_string(rep.verdict), rep.wall_time);
  if (!s.output.empty()) {
    write_report(rep, s.output);
    std::printf("report written to %s\n", s.output.c_str());
  }
  return rep.verdict == ReportVerdict::Fail ? 1 : 0;
}

void print_condition_report(const ConditionReport& cr) {
  std::printf("condition: %s\n", cr.condition.c_str());
  for (const ConditionRow& row : cr.table) {
    if (row.gamma > 0.0)
      std::printf("  gamma=%-8g delta=%-10g supF=%s\n", row.gamma, row.delta,
                  fmt(row.value).c_str());
    else
      std::printf("  r=%-10g supF=%s\n", row.delta, fmt(row.value).c_str());
  }
  if (cr.constants) {
    const ConditionConstants& c = *cr.constants;
    std::printf("  L1=%s L2=%s alpha=%s beta=%s L=%s b_F=%s ell=%s\n", fmt(c.L1).c_str(),
                fmt(c.L2).c_str(), fmt(c.alpha).c_str(), fmt(c.beta).c_str(), fmt(c.L).c_str(),
                fmt(c.b_F).c_str(), fmt(c.ell).c_str());
  }
  if (!cr.witness.empty()) {
    std::printf("  witness rows:\n");
    for (const ConditionRow& row : cr.witness)
      std::printf("    gamma=%-8g delta=%-10g supF=%s\n", row.gamma, row.delta,
                  fmt(row.value).c_str());
  }
  std::printf("verdict: %s\n", to_string(cr.verdict));
  if (!cr.note.empty()) std::printf("note: %s\n", cr.note.c_str());
}

int run_check(const std::string& which, const std::string& config_path) {
  const Scenario s = load_cfg(config_path);
  const Domain dom = scenario_domain(s);
  const OperatorSpec op = scenario_operator(s);
  if (which == "f3") {
    const std::vector<double> gammas = s.gammas.empty() ? std::vector<double>{0.5, 1.0} : s.gammas;
    const std::vector<double> deltas =
        s.deltas.empty() ? std::vector<double>{0.4, 0.2, 0.1, 0.05} : s.deltas;
    print_condition_report(check_f3(op, dom, gammas, deltas));
    return 0;
  }
  if (which == "f4") {
    const std::vector<double> radii =
        s.deltas.empty() ? std::vector<double>{1.0, 0.1, 0.01} : s.deltas;
    print_condition_report(check_f4(op, dom, 100, radii));
    return 0;
  }
  print_condition_report(
      lemma_f5_constants(s.sigma_lip, s.sigma_over_d, s.psi_lip, s.psi_over_d, s.L2,
                         dom.max_distance()));
  return 0;
}

int run_oracle(double m, double mu, int n) {
  const ClosedFormHJ cf = make_closed_form(m, mu);
  const Grid grid = build_grid(make_interval(0.0, 2.0), n);
  std::printf("node_id,x,d,u,analytic_residual\n");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x[i];
    const double u = closed_form_hj1d(cf, x);
    const double du = closed_form_hj1d_deriv(cf, x);
    const double res = u + std::pow(grid.d[i], mu) * std::pow(std::abs(du), m);
    std::printf("%zu,%s,%s,%s,%s\n", i, fmt(x).c_str(), fmt(grid.d[i]).c_str(), fmt(u).c_str(),
                fmt(res).c_str());
  }
  return 0;
}

int run_grid_dump(const std::string& config_path) {
  const Scenario s = load_cfg(config_path);
  const Domain dom = scenario_domain(s);
  for (int n : s.grids) {
    const Grid grid = build_grid(dom, n);
    std::printf("# n=%d h=%s nodes=%zu\n", n, fmt(grid.h).c_str(), grid.size());
    if (grid.dim == 1)
      std::printf("node_id,x,d,is_layer\n");
    else
      std::printf("node_id,x,y,d,is_layer\n");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::printf("%zu,%s,", i, fmt(grid.x[i]).c_str());
      if (grid.dim == 2) std::printf("%s,", fmt(grid.y[i]).c_str());
      std::printf("%s,%d\n", fmt(grid.d[i]).c_str(), int(grid.is_layer[i]));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenlab: monotone schemes for boundary-degenerate elliptic problems"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "run an experiment scenario");
  run->add_option("config", run_config, "scenario config file")->required();

  std::string check_which, check_config;
  CLI::App* check = app.add_subcommand("check", "structural-condition checkers");
  check->add_option("which", check_which, "f3 | f4 | constants")
      ->required()
      ->check(CLI::IsMember({"f3", "f4", "constants"}));
  check->add_option("config", check_config, "scenario config file")->required();

  double oracle_m = 2.0, oracle_mu = 1.0;
  int oracle_n = 256;
  CLI::App* oracle = app.add_subcommand("oracle", "reference-solution oracles");
  CLI::App* closed = oracle->add_subcommand("closed-form", "sampled closed form + residual");
  closed->add_option("--m", oracle_m, "gradient power m")->required();
  closed->add_option("--mu", oracle_mu, "degeneracy exponent mu")->required();
  closed->add_option("--n", oracle_n, "grid size")->required();
  oracle->require_subcommand(1);

  std::string grid_config;
  CLI::App* gridcmd = app.add_subcommand("grid", "geometry dump");
  gridcmd->add_option("config", grid_config, "scenario config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_scenario(run_config);
    if (*check) return run_check(check_which, check_config);
    if (*closed) return run_oracle(oracle_m, oracle_mu, oracle_n);
    if (*gridcmd) return run_grid_dump(grid_config);
  } catch (const degenlab::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const degenlab::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const degenlab::InvalidDomainParams& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const degenlab::InvalidOperatorParams& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const degenlab::SupercriticalParams& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const degenlab::GridTooCoarse& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const degenlab::Error& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  }
  return 0;
}
