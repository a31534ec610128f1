#pragma once

#include <vector>

#include "degenlab/geometry.hpp"
#include "degenlab/operators.hpp"

namespace degenlab {

// Nodal values of a discrete u, one per grid node.
using Field = std::vector<double>;

// Policy for stencil arms that would exit the domain.  No boundary condition
// is posed by the problem, so the choice at layer nodes is a numerical
// decision, not data:
//   Drop (default)  omit the missing second-difference arm; the weight
//                   d^mu = O(h^mu) suppresses the omitted term for mu >= 2
//                   and monotonicity is preserved.
//   OneSided        shifted interior formula; consistent but possibly
//                   nonmonotone.  Diagnostic only; excluded from acceptance.
//   Ghost           impose a ghost value g on the boundary (constant, or the
//                   source f evaluated at the clipped boundary point); used as
//                   a cross-check of the implicitly generated boundary data.
struct LayerMode {
  enum class Kind { Drop, OneSided, Ghost };
  Kind kind = Kind::Drop;
  double ghost_value = 0.0;
  bool ghost_from_source = false;
  bool operator==(const LayerMode&) const = default;
};

inline LayerMode drop_mode() { return {}; }
inline LayerMode one_sided_mode() { return {LayerMode::Kind::OneSided, 0.0, false}; }
inline LayerMode ghost_mode(double g) { return {LayerMode::Kind::Ghost, g, false}; }
inline LayerMode ghost_source_mode() { return {LayerMode::Kind::Ghost, 0.0, true}; }

struct AxisGradient {
  double d_minus = 0.0, d_plus = 0.0;  // backward/forward differences
  bool has_minus = false, has_plus = false;
  double godunov = 0.0;  // max(pos(d_minus), neg(d_plus)) over available arms
};

struct GradientResult {
  AxisGradient axis[2];
  double godunov_norm = 0.0;  // Euclidean norm of the per-axis magnitudes
};

// One-sided differences plus the Godunov magnitude per axis.  Under Drop and
// OneSided a missing arm simply leaves its branch out (first-order terms
// always keep an interior-pointing arm); under Ghost the missing value is the
// ghost datum at the boundary-clipped point.  `ghost_source` supplies f when
// the mode requests ghost-from-source.
GradientResult upwind_gradient(const Field& u, const Grid& grid, int node,
                               const LayerMode& mode = {},
                               const SourceSpec* ghost_source = nullptr);

// Per-axis second differences (u_{i-1} - 2u_i + u_{i+1}) / h^2 with the layer
// policy applied to missing arms.
Diag2 second_difference(const Field& u, const Grid& grid, int node, const LayerMode& mode,
                        const SourceSpec* ghost_source = nullptr);

// Per-node data that depends only on (spec, grid): the weight d^mu, the
// source f(x), and the drift/boundary-direction fields.  The solvers build
// this once and reuse it across millions of residual evaluations.
struct ResidualCache {
  std::vector<double> weight;            // d(x_i)^mu
  std::vector<double> source;            // f(x_i)
  std::vector<double> bx, by;            // DegDrift vector field b(x_i)
  std::vector<double> ex, ey;            // Isaacs boundary direction e(x_i)
};
ResidualCache make_residual_cache(const OperatorSpec& spec, const Grid& grid);

// Nodal residuals r_i = u_i + F_h(x_i, u) - f(x_i) of the monotone scheme.
Field discrete_residual(const OperatorSpec& spec, const Grid& grid, const Field& u,
                        const LayerMode& mode);

// Same, writing into a preallocated field; optionally reports the largest
// one-sided difference magnitude seen (the gradient bound fed back into the
// CFL estimate).  Runs data-parallel over nodes when DEGENLAB_THREADS > 1.
void discrete_residual_into(const OperatorSpec& spec, const Grid& grid, const Field& u,
                            const LayerMode& mode, Field& out,
                            double* max_axis_gradient = nullptr);

// Cache-reusing variant for hot solver loops; identical results.
void discrete_residual_into(const OperatorSpec& spec, const Grid& grid,
                            const ResidualCache& cache, const Field& u, const LayerMode& mode,
                            Field& out, double* max_axis_gradient = nullptr);

// Explicit-stability step: 0.9 * min over nodes of
//   1 / (1 + 2*dim*coef/h^2 + dim*|drift|/h + slope/h),
// coef = d^mu * diffusion scale, slope = d^mu * (Hamiltonian p-Lipschitz bound
// at `gradient_bound`).  Throws DegenerateTimestep on underflow.
double cfl_timestep(const OperatorSpec& spec, const Grid& grid, double gradient_bound = 1.0);

}  // namespace degenlab
