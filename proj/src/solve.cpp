#include "degenlab/solve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace degenlab {

namespace {

double sup_abs(const Field& u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

bool all_finite(const Field& u) {
  for (double v : u)
    if (!std::isfinite(v)) return false;
  return true;
}

// Step-size driver.  For families with gradient-independent stiffness the CFL
// step is a constant; for FirstOrderHJ it must track the current gradient
// bound, so the base denominator (weight-independent part is just 1 there)
// is combined with the slope term per iteration using the cached weights —
// the arithmetic matches cfl_timestep term for term.
struct StepControl {
  const OperatorSpec& spec;
  const Grid& grid;
  double dt_max;
  bool gradient_dependent;
  double dt_fixed = 0.0;   // for gradient-independent families
  double weight_max = 0.0; // max d^mu (FirstOrderHJ denominators)

  StepControl(const OperatorSpec& s, const Grid& g, const ResidualCache& cache, double cap)
      : spec(s), grid(g), dt_max(cap),
        gradient_dependent(s.family == Family::FirstOrderHJ) {
    if (gradient_dependent) {
      for (double w : cache.weight) weight_max = std::max(weight_max, w);
    } else {
      dt_fixed = apply_cap(cfl_timestep(spec, grid));
    }
  }

  double apply_cap(double dt) const { return dt_max > 0.0 ? std::min(dt, dt_max) : dt; }

  double step(double grad_axis_max) const {
    if (!gradient_dependent) return dt_fixed;
    // Conservative norm bound from the per-axis maximum (exact in 1d).
    const double g_eff = static_cast<double>(grid.dim) * grad_axis_max;
    const double s = hamiltonian_slope(spec, g_eff);
    const double den = 1.0 + weight_max * s / grid.h;
    return apply_cap(0.9 / den);
  }
};

void check_alive(const Field& u, double sup0, const char* where) {
  const double bound = 1e6 * (1.0 + sup0);
  if (!all_finite(u) || sup_abs(u) > bound)
    throw NonFiniteValue(std::string(where) +
                         ": iteration diverged (sup|u| exceeded 1e6 * (1 + sup|init|) = " +
                         std::to_string(bound) + "); monotone contraction cannot do this, "
                         "check the scheme/config");
}

}  // namespace

SolveResult solve_elliptic(const OperatorSpec& spec, const Grid& grid, const Field& init,
                           const LayerMode& mode, double tol, long max_iter, double dt_max) {
  if (!(tol > 0.0)) throw ValidationError("solve_elliptic requires tol > 0");
  if (max_iter < 1) throw ValidationError("solve_elliptic requires max_iter >= 1");
  if (init.size() != grid.size())
    throw ValidationError("init field size does not match grid");
  if (!all_finite(init)) throw NonFiniteValue("solve_elliptic: init contains non-finite values");

  const ResidualCache cache = make_residual_cache(spec, grid);
  const StepControl ctl(spec, grid, cache, dt_max);
  const double sup0 = sup_abs(init);

  SolveResult res;
  res.field = init;
  res.residual_history.reserve(1024);
  Field r(grid.size());

  for (long k = 1; k <= max_iter; ++k) {
    double grad = 0.0;
    discrete_residual_into(spec, grid, cache, res.field, mode, r,
                           ctl.gradient_dependent ? &grad : nullptr);
    const double rs = sup_abs(r);
    res.residual_history.push_back(rs);
    res.iterations = k;
    res.final_residual_sup = rs;
    if (!std::isfinite(rs))
      throw NonFiniteValue("solve_elliptic: residual became non-finite");
    if (rs <= tol) {
      res.converged = true;
      return res;
    }
    const double dt = ctl.step(grad);
    for (std::size_t i = 0; i < res.field.size(); ++i) res.field[i] -= dt * r[i];
    check_alive(res.field, sup0, "solve_elliptic");
  }
  res.converged = false;
  return res;
}

Trajectory evolve_parabolic(const OperatorSpec& spec, const Grid& grid, const Field& init,
                            const LayerMode& mode, double T,
                            const std::vector<double>& snapshot_times, double dt_max) {
  if (!(T > 0.0)) throw ValidationError("evolve_parabolic requires T > 0");
  if (init.size() != grid.size())
    throw ValidationError("init field size does not match grid");
  if (!all_finite(init)) throw NonFiniteValue("evolve_parabolic: init contains non-finite values");

  std::vector<double> events{0.0};
  for (double t : snapshot_times) {
    if (t < 0.0 || t > T)
      throw ValidationError("snapshot time " + std::to_string(t) + " outside [0, T]");
    events.push_back(t);
  }
  events.push_back(T);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               events.end());

  const ResidualCache cache = make_residual_cache(spec, grid);
  const StepControl ctl(spec, grid, cache, dt_max);
  const double sup0 = sup_abs(init);

  Trajectory traj;
  Field u = init;
  Field r(grid.size());

  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
    traj.sup_norms.push_back(sup_abs(u));
    double trace = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid.is_layer[i] != 0) trace = std::max(trace, std::abs(u[i]));
    traj.boundary_traces.push_back(trace);
  };

  double t = 0.0;
  record(0.0);
  for (std::size_t e = 1; e < events.size(); ++e) {
    const double t_next = events[e];
    while (t < t_next) {
      double grad = 0.0;
      discrete_residual_into(spec, grid, cache, u, mode, r,
                             ctl.gradient_dependent ? &grad : nullptr);
      double dt = ctl.step(grad);
      if (t + dt >= t_next) {
        dt = t_next - t;  // clip the last step to hit the event exactly
        t = t_next;
      } else {
        t += dt;
      }
      for (std::size_t i = 0; i < u.size(); ++i) u[i] -= dt * r[i];
      check_alive(u, sup0, "evolve_parabolic");
    }
    record(t_next);
  }
  return traj;
}

}  // namespace degenlab
