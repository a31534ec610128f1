#include "degenlab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "degenlab/parallel.hpp"

namespace degenlab {

int thread_count() {
  static const int cached = [] {
    if (const char* env = std::getenv("DEGENLAB_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return cached;
}

namespace {

constexpr int kAxisNbr[2][2] = {{0, 1}, {2, 3}};  // [axis][0]=minus, [axis][1]=plus

// Boundary point where the stepped arm leaves the domain, found by bisection
// on the signed distance along the step (exact enough for ghost data).
Point2 clip_to_boundary(const Grid& g, int node, int axis, int dir) {
  Point2 p0 = g.point(node);
  Point2 step{axis == 0 ? dir * g.h : 0.0, axis == 1 ? dir * g.h : 0.0};
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Point2 pm{p0.x + mid * step.x, p0.y + mid * step.y};
    if (signed_distance(g.domain, pm) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return {p0.x + hi * step.x, p0.y + hi * step.y};
}

double ghost_datum(const Grid& g, int node, int axis, int dir, const LayerMode& mode,
                   const SourceSpec* ghost_source) {
  if (!mode.ghost_from_source) return mode.ghost_value;
  if (ghost_source == nullptr) return 0.0;
  return source_value(*ghost_source, clip_to_boundary(g, node, axis, dir));
}

struct AxisData {
  double dm = 0.0, dp = 0.0;
  bool has_m = false, has_p = false;
  double god = 0.0;    // Godunov magnitude from the available branches
  double sd = 0.0;     // second difference under the layer policy
  int id_m = -1, id_p = -1;
};

AxisData axis_data(const Field& u, const Grid& g, int node, int axis, const LayerMode& mode,
                   const SourceSpec* ghost_source) {
  AxisData a;
  const double ui = u[static_cast<std::size_t>(node)];
  const double h = g.h;
  a.id_m = g.nbr[static_cast<std::size_t>(node)][static_cast<std::size_t>(kAxisNbr[axis][0])];
  a.id_p = g.nbr[static_cast<std::size_t>(node)][static_cast<std::size_t>(kAxisNbr[axis][1])];
  const bool ghost = mode.kind == LayerMode::Kind::Ghost;

  double um = 0.0, up = 0.0;
  if (a.id_m >= 0) {
    um = u[static_cast<std::size_t>(a.id_m)];
    a.dm = (ui - um) / h;
    a.has_m = true;
  } else if (ghost) {
    um = ghost_datum(g, node, axis, -1, mode, ghost_source);
    a.dm = (ui - um) / h;
    a.has_m = true;
  }
  if (a.id_p >= 0) {
    up = u[static_cast<std::size_t>(a.id_p)];
    a.dp = (up - ui) / h;
    a.has_p = true;
  } else if (ghost) {
    up = ghost_datum(g, node, axis, +1, mode, ghost_source);
    a.dp = (up - ui) / h;
    a.has_p = true;
  }

  const double bm = a.has_m ? std::max(a.dm, 0.0) : 0.0;
  const double bp = a.has_p ? std::max(-a.dp, 0.0) : 0.0;
  a.god = std::max(bm, bp);

  if (a.has_m && a.has_p) {
    a.sd = (um - 2.0 * ui + up) / (h * h);
  } else if (mode.kind == LayerMode::Kind::OneSided && (a.has_m || a.has_p)) {
    // Shifted three-point formula using the second interior neighbor; falls
    // back to 0 when the stencil cannot be completed.
    if (a.has_m) {
      const int jmm =
          g.nbr[static_cast<std::size_t>(a.id_m)][static_cast<std::size_t>(kAxisNbr[axis][0])];
      if (jmm >= 0)
        a.sd = (u[static_cast<std::size_t>(jmm)] - 2.0 * um + ui) / (h * h);
    } else {
      const int jpp =
          g.nbr[static_cast<std::size_t>(a.id_p)][static_cast<std::size_t>(kAxisNbr[axis][1])];
      if (jpp >= 0)
        a.sd = (ui - 2.0 * up + u[static_cast<std::size_t>(jpp)]) / (h * h);
    }
  }
  return a;
}

// Upwind pick for a first-order term written inside a positively oriented
// expression with gradient coefficient beta: beta > 0 wants the forward arm,
// beta < 0 the backward arm, so the residual stays nonincreasing in neighbor
// values.  Under Drop a missing required arm mutes the term on that axis;
// under OneSided the available arm is used (diagnostic; may break
// monotonicity); under Ghost both arms always exist.
double upwind_term(const AxisData& a, double beta, LayerMode::Kind kind) {
  if (beta == 0.0) return 0.0;
  if (beta > 0.0) {
    if (a.has_p) return beta * a.dp;
    if (kind == LayerMode::Kind::OneSided && a.has_m) return beta * a.dm;
    return 0.0;
  }
  if (a.has_m) return beta * a.dm;
  if (kind == LayerMode::Kind::OneSided && a.has_p) return beta * a.dp;
  return 0.0;
}

double node_residual(const OperatorSpec& spec, const Grid& g, const ResidualCache& c,
                     const Field& u, const LayerMode& mode, int node, double* grad_max) {
  const std::size_t i = static_cast<std::size_t>(node);
  const double ui = u[i];
  const double w = c.weight[i];
  const int axes = g.dim;

  AxisData ax[2];
  for (int a = 0; a < axes; ++a) {
    ax[a] = axis_data(u, g, node, a, mode, &spec.source);
    if (grad_max != nullptr) {
      if (ax[a].has_m) *grad_max = std::max(*grad_max, std::abs(ax[a].dm));
      if (ax[a].has_p) *grad_max = std::max(*grad_max, std::abs(ax[a].dp));
    }
  }
  const double tr = ax[0].sd + (axes > 1 ? ax[1].sd : 0.0);

  double F = 0.0;
  switch (spec.family) {
    case Family::DegLaplace:
      F = -w * tr;
      break;
    case Family::DegDrift: {
      double adv = upwind_term(ax[0], w * c.bx[i], mode.kind);
      if (axes > 1) adv += upwind_term(ax[1], w * c.by[i], mode.kind);
      F = -w * tr - adv;
      break;
    }
    case Family::Isaacs: {
      double inf = std::numeric_limits<double>::infinity();
      for (const auto& row : spec.controls) {
        double sup = -std::numeric_limits<double>::infinity();
        for (const auto& e : row) {
          double leg = w * e.sigma_scale * e.sigma_scale * tr;
          leg += upwind_term(ax[0], w * e.drift * c.ex[i], mode.kind);
          if (axes > 1) leg += upwind_term(ax[1], w * e.drift * c.ey[i], mode.kind);
          sup = std::max(sup, leg);
        }
        inf = std::min(inf, sup);
      }
      F = -inf;
      break;
    }
    case Family::Pucci: {
      double s = 0.0;
      for (int a = 0; a < axes; ++a)
        s += spec.lambda_bar * std::max(ax[a].sd, 0.0) - spec.lambda * std::max(-ax[a].sd, 0.0);
      F = -w * s;
      break;
    }
    default: {
      double sq = 0.0;
      for (int a = 0; a < axes; ++a) sq += ax[a].god * ax[a].god;
      F = w * (spec.m == 2.0 ? sq : std::pow(std::sqrt(sq), spec.m));
      break;
    }
  }

  double r = ui + F - c.source[i];

  // Boundary-layer closure for the shallow-degeneracy first-order regime
  // (mu < m) under Drop.  With the dropped arm alone, the collocation residual
  // at a layer node admits only the trivial profile: at a negative minimum the
  // monotone residual is bounded above by the minimum itself, so every
  // nontrivial decreasing profile is destroyed from the layer inward.  We
  // therefore close the stencil by extrapolating the profile from the interior
  // neighbor v with its local characteristic slope (|v| / d_v^mu)^(1/m):
  //     r_closure = u_i - v + h * (max(-v, 0) / d_v^mu)^(1/m).
  // Taking max(r, r_closure) keeps the scheme monotone (pointwise max of
  // monotone residuals, with unit diagonal in the closure branch) and leaves
  // the zero field an exact solution, so the deep-degeneracy collapse results
  // are untouched.
  if (spec.family == Family::FirstOrderHJ && mode.kind == LayerMode::Kind::Drop &&
      spec.mu < spec.m && g.is_layer[i] != 0) {
    for (int a = 0; a < axes; ++a) {
      const bool miss_m = ax[a].id_m < 0, miss_p = ax[a].id_p < 0;
      if (miss_m == miss_p) continue;  // need exactly one interior arm
      const int v_id = miss_p ? ax[a].id_m : ax[a].id_p;
      const double v = u[static_cast<std::size_t>(v_id)];
      const double wv = c.weight[static_cast<std::size_t>(v_id)];
      const double slope = std::pow(std::max(-v, 0.0) / wv, 1.0 / spec.m);
      r = std::max(r, ui - v + g.h * slope);
    }
  }
  return r;
}

}  // namespace

GradientResult upwind_gradient(const Field& u, const Grid& grid, int node, const LayerMode& mode,
                               const SourceSpec* ghost_source) {
  GradientResult res;
  double sq = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    const AxisData ad = axis_data(u, grid, node, a, mode, ghost_source);
    res.axis[a].d_minus = ad.dm;
    res.axis[a].d_plus = ad.dp;
    res.axis[a].has_minus = ad.has_m;
    res.axis[a].has_plus = ad.has_p;
    res.axis[a].godunov = ad.god;
    sq += ad.god * ad.god;
  }
  res.godunov_norm = std::sqrt(sq);
  return res;
}

Diag2 second_difference(const Field& u, const Grid& grid, int node, const LayerMode& mode,
                        const SourceSpec* ghost_source) {
  Diag2 out;
  out.xx = axis_data(u, grid, node, 0, mode, ghost_source).sd;
  if (grid.dim > 1) out.yy = axis_data(u, grid, node, 1, mode, ghost_source).sd;
  return out;
}

ResidualCache make_residual_cache(const OperatorSpec& spec, const Grid& grid) {
  ResidualCache c;
  const std::size_t n = grid.size();
  c.weight.resize(n);
  c.source.resize(n);
  if (spec.family == Family::DegDrift) {
    c.bx.resize(n);
    c.by.resize(n);
  }
  if (spec.family == Family::Isaacs) {
    c.ex.resize(n);
    c.ey.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 xi = grid.point(static_cast<int>(i));
    c.weight[i] = std::pow(grid.d[i], spec.mu);
    c.source[i] = source_value(spec.source, xi);
    if (spec.family == Family::DegDrift) {
      const Vec2 b = drift_vector(spec, xi, grid.d[i]);
      c.bx[i] = b.x;
      c.by[i] = b.y;
    }
    if (spec.family == Family::Isaacs) {
      const Vec2 e = unit_boundary_dir(spec.geo.domain, xi);
      c.ex[i] = e.x;
      c.ey[i] = e.y;
    }
  }
  return c;
}

void discrete_residual_into(const OperatorSpec& spec, const Grid& grid,
                            const ResidualCache& cache, const Field& u, const LayerMode& mode,
                            Field& out, double* max_axis_gradient) {
  const std::size_t n = grid.size();
  out.resize(n);
  const int workers = thread_count();
  if (max_axis_gradient == nullptr) {
    parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        out[i] = node_residual(spec, grid, cache, u, mode, static_cast<int>(i), nullptr);
    });
    return;
  }
  // Gradient-bound reduction: per-chunk maxima merged in chunk order (max is
  // exact, so the result is identical for any worker count).
  if (workers <= 1 || n < 2048) {
    double gm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      out[i] = node_residual(spec, grid, cache, u, mode, static_cast<int>(i), &gm);
    *max_axis_gradient = gm;
    return;
  }
  const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<double> chunk_max(parts, 0.0);
  std::vector<std::thread> pool;
  pool.reserve(parts);
  const std::size_t base = n / parts, extra = n % parts;
  std::size_t lo = 0;
  for (std::size_t k = 0; k < parts; ++k) {
    const std::size_t hi = lo + base + (k < extra ? 1 : 0);
    pool.emplace_back([&, lo, hi, k] {
      double gm = 0.0;
      for (std::size_t i = lo; i < hi; ++i)
        out[i] = node_residual(spec, grid, cache, u, mode, static_cast<int>(i), &gm);
      chunk_max[k] = gm;
    });
    lo = hi;
  }
  for (auto& t : pool) t.join();
  double gm = 0.0;
  for (double v : chunk_max) gm = std::max(gm, v);
  *max_axis_gradient = gm;
}

void discrete_residual_into(const OperatorSpec& spec, const Grid& grid, const Field& u,
                            const LayerMode& mode, Field& out, double* max_axis_gradient) {
  const ResidualCache cache = make_residual_cache(spec, grid);
  discrete_residual_into(spec, grid, cache, u, mode, out, max_axis_gradient);
}

Field discrete_residual(const OperatorSpec& spec, const Grid& grid, const Field& u,
                        const LayerMode& mode) {
  Field out;
  discrete_residual_into(spec, grid, u, mode, out, nullptr);
  return out;
}

double cfl_timestep(const OperatorSpec& spec, const Grid& grid, double gradient_bound) {
  const double dim = static_cast<double>(grid.dim);
  const double h = grid.h;
  const double diff = diffusion_scale(spec);
  const double slope_unit = hamiltonian_slope(spec, gradient_bound);
  double den_max = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = std::pow(grid.d[i], spec.mu);
    const double den = 1.0 + 2.0 * dim * w * diff / (h * h) +
                       dim * w * drift_amplitude(spec, grid.d[i]) / h + w * slope_unit / h;
    den_max = std::max(den_max, den);
  }
  const double dt = 0.9 / den_max;
  if (!std::isfinite(dt) || dt < 1e-300)
    throw DegenerateTimestep("CFL timestep underflow (denominator " + std::to_string(den_max) +
                             ")");
  return dt;
}

}  // namespace degenlab
