#pragma once

#include <vector>

#include "degenlab/scheme.hpp"

namespace degenlab {

struct SolveResult {
  Field field;
  long iterations = 0;
  double final_residual_sup = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // sup|r| per iteration, nonempty
};

struct Trajectory {
  std::vector<double> times;  // increasing, times[0] = 0
  std::vector<Field> snapshots;
  std::vector<double> sup_norms;         // sup |u| at each snapshot
  std::vector<double> boundary_traces;   // max |u| over layer nodes
};

// Damped explicit fixed-point iteration u <- u - dt * r(u) with dt from
// cfl_timestep, Jacobi-style (all nodes updated from the frozen previous
// iterate).  Stops when sup|r| <= tol (converged) or after max_iter
// (converged=false, best iterate returned).  dt_max > 0 caps the step.
// Throws NonFiniteValue if the iteration diverges (sup|u| beyond
// 1e6 * (1 + sup|init|) or non-finite values), which a monotone scheme
// cannot do — it flags a scheme/config bug.
SolveResult solve_elliptic(const OperatorSpec& spec, const Grid& grid, const Field& init,
                           const LayerMode& mode, double tol, long max_iter,
                           double dt_max = 0.0);

// Forward-Euler evolution of u_t + u + F = f from init, with steps of size
// cfl_timestep (capped by dt_max when > 0) clipped to hit T and every
// snapshot time exactly.  Snapshots are recorded at t = 0, at each requested
// time, and at T.
Trajectory evolve_parabolic(const OperatorSpec& spec, const Grid& grid, const Field& init,
                            const LayerMode& mode, double T,
                            const std::vector<double>& snapshot_times, double dt_max = 0.0);

}  // namespace degenlab
