#pragma once

#include <optional>

#include "degenlab/solve.hpp"

namespace degenlab {

// Closed-form reference solution of u + d(x)^mu |u'|^m = 0 on (0, 2), with
// d(x) = min(x, 2-x).  Exists exactly in the subcritical regime mu < m; three
// branch families depending on m vs 1.
struct ClosedFormHJ {
  double m = 2.0;
  double mu = 1.0;
};

ClosedFormHJ make_closed_form(double m, double mu);  // SupercriticalParams if mu >= m

double closed_form_hj1d(const ClosedFormHJ& cf, double x);        // OutOfDomain off (0,2)
double closed_form_hj1d_deriv(const ClosedFormHJ& cf, double x);  // du/dx, same branches

// Nodal samples of the closed form (1d grids on (0,2)).
Field sample_closed_form(const ClosedFormHJ& cf, const Grid& grid);

struct ResidualStats {
  double max_res = 0.0;
  double mean_res = 0.0;
  long node_count = 0;
};

// Residual statistics (absolute values) restricted to nodes with d >= d_min.
ResidualStats residual_of_field(const OperatorSpec& spec, const Grid& grid, const Field& field,
                                const LayerMode& mode, double d_min);

// Pair selection for the Hoelder-exponent fit.
//   AllPairs       every node pair, capped at `cap` seeded random draws.
//   BoundaryPairs  nodes with d <= d_max; pairs restricted to dyadic distance
//                  ratios (d_j within 0.25 h of 2 d_i) so both pair members
//                  see the same boundary approach, which is what the exponent
//                  describes.  An optional anchor keeps all nodes within
//                  2 d_max of one boundary point (single-sided window).
struct PairPolicy {
  enum class Kind { AllPairs, BoundaryPairs };
  Kind kind = Kind::AllPairs;
  double d_max = 0.1;
  std::optional<Point2> anchor;
  unsigned long long seed = 42;
  std::size_t cap = 100000;
};

inline PairPolicy all_pairs() { return {}; }
inline PairPolicy boundary_pairs(double d_max, std::optional<Point2> anchor = {}) {
  PairPolicy p;
  p.kind = PairPolicy::Kind::BoundaryPairs;
  p.d_max = d_max;
  p.anchor = anchor;
  return p;
}

struct FitResult {
  double exponent_or_rate = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  long sample_count = 0;
};

// Least-squares fit of log|u(x)-u(y)| against log|x-y| over the policy's
// pairs, excluding |u(x)-u(y)| <= 1e-12.  DegenerateField when every pair is
// excluded (the zero field is Hoelder for every exponent); EmptyFilter when
// the policy yields fewer than 3 usable pairs.
FitResult holder_exponent(const Field& field, const Grid& grid, const PairPolicy& policy);

struct TraceResult {
  double max_abs = 0.0;
  int argmax_node = -1;
};

// max |u - g| over nodes within depth*h of the boundary; g = 0 by default or
// the source f for inhomogeneous runs.
TraceResult boundary_trace(const Field& field, const Grid& grid, int depth,
                           const SourceSpec* g = nullptr);

// Least-squares slope of log(boundary_trace) vs t over snapshots in
// [t0, t1]; exponent_or_rate = -slope.  NonPositiveTrace if a trace in the
// window is not positive; ValidationError if fewer than 3 snapshots.
FitResult decay_rate_fit(const Trajectory& traj, double t0, double t1);

}  // namespace degenlab
