#include "degenlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace degenlab {

namespace {

struct Branch {
  double d = 0.0;     // distance to the nearer endpoint
  bool left = false;  // true on (0,1] where d = x
};

Branch branch_of(double x) {
  if (!(x > 0.0 && x < 2.0))
    throw OutOfDomain("closed form defined on (0,2), got x = " + std::to_string(x));
  if (x <= 1.0) return {x, true};
  return {2.0 - x, false};
}

}  // namespace

ClosedFormHJ make_closed_form(double m, double mu) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw InvalidOperatorParams("closed form requires m > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw InvalidOperatorParams("closed form requires mu >= 0");
  if (mu >= m)
    throw SupercriticalParams("closed form requires mu < m (got m = " + std::to_string(m) +
                              ", mu = " + std::to_string(mu) + ")");
  return {m, mu};
}

double closed_form_hj1d(const ClosedFormHJ& cf, double x) {
  const Branch br = branch_of(x);
  const double m = cf.m, mu = cf.mu, d = br.d;
  if (m > 1.0) {
    const double q = m / (m - 1.0);                       // outer power
    const double C = std::pow((m - 1.0) / (m - mu), q);   // branch constant
    const double gamma = (m - mu) / (m - 1.0);
    const double s = (m - mu) / m;
    if (br.left) return -C * std::pow(d, gamma);
    return -C * std::pow(2.0 - std::pow(d, s), q);
  }
  if (m == 1.0) {
    const double e = 1.0 - mu;  // mu < m = 1 so e > 0
    if (br.left) return -std::exp(std::pow(d, e) / e);
    return -std::exp((2.0 - std::pow(d, e)) / e);
  }
  // m < 1
  const double e = m / (1.0 - m);
  const double K = std::pow((m - mu) / (1.0 - m), e);
  const double s = (m - mu) / m;
  if (br.left) return -K * std::pow(3.0 - std::pow(d, s), -e);
  return -K * std::pow(1.0 + std::pow(d, s), -e);
}

double closed_form_hj1d_deriv(const ClosedFormHJ& cf, double x) {
  const Branch br = branch_of(x);
  const double m = cf.m, mu = cf.mu, d = br.d;
  const double sgn = br.left ? 1.0 : -1.0;  // dd/dx
  if (m > 1.0) {
    const double q = m / (m - 1.0);
    const double C = std::pow((m - 1.0) / (m - mu), q);
    const double gamma = (m - mu) / (m - 1.0);
    const double s = (m - mu) / m;
    if (br.left) return -C * gamma * std::pow(d, gamma - 1.0);
    const double dd = C * q * s * std::pow(d, s - 1.0) *
                      std::pow(2.0 - std::pow(d, s), q - 1.0);
    return sgn * dd;
  }
  if (m == 1.0) {
    const double e = 1.0 - mu;
    if (br.left) return -std::exp(std::pow(d, e) / e) * std::pow(d, -mu);
    return std::exp((2.0 - std::pow(d, e)) / e) * std::pow(d, -mu) * sgn;
  }
  const double e = m / (1.0 - m);
  const double K = std::pow((m - mu) / (1.0 - m), e);
  const double s = (m - mu) / m;
  if (br.left)
    return -K * e * s * std::pow(d, s - 1.0) * std::pow(3.0 - std::pow(d, s), -e - 1.0);
  return sgn * K * e * s * std::pow(d, s - 1.0) * std::pow(1.0 + std::pow(d, s), -e - 1.0);
}

Field sample_closed_form(const ClosedFormHJ& cf, const Grid& grid) {
  if (grid.dim != 1)
    throw ValidationError("closed form is one-dimensional; expected an interval grid");
  Field u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) u[i] = closed_form_hj1d(cf, grid.x[i]);
  return u;
}

ResidualStats residual_of_field(const OperatorSpec& spec, const Grid& grid, const Field& field,
                                const LayerMode& mode, double d_min) {
  if (d_min < 0.0) throw ValidationError("residual_of_field requires d_min >= 0");
  const Field r = discrete_residual(spec, grid, field, mode);
  ResidualStats st;
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.d[i] < d_min) continue;
    const double a = std::abs(r[i]);
    st.max_res = std::max(st.max_res, a);
    sum += a;
    ++st.node_count;
  }
  if (st.node_count == 0)
    throw EmptyFilter("no node has d >= " + std::to_string(d_min));
  st.mean_res = sum / static_cast<double>(st.node_count);
  return st;
}

namespace {

FitResult log_log_fit(const std::vector<double>& lx, const std::vector<double>& ly) {
  const std::size_t n = lx.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += lx[k];
    sy += ly[k];
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = lx[k] - mx, dy = ly[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw EmptyFilter("all pair separations identical; fit is degenerate");
  FitResult fit;
  fit.exponent_or_rate = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent_or_rate * mx);
  fit.r_squared = (syy <= 0.0) ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  fit.sample_count = static_cast<long>(n);
  return fit;
}

}  // namespace

FitResult holder_exponent(const Field& field, const Grid& grid, const PairPolicy& policy) {
  std::vector<std::pair<int, int>> pairs;
  const int n = static_cast<int>(grid.size());

  if (policy.kind == PairPolicy::Kind::BoundaryPairs) {
    std::vector<int> window;
    for (int i = 0; i < n; ++i) {
      if (grid.d[static_cast<std::size_t>(i)] > policy.d_max) continue;
      if (policy.anchor) {
        const Point2 p = grid.point(i);
        const double dx = p.x - policy.anchor->x, dy = p.y - policy.anchor->y;
        if (std::hypot(dx, dy) > 2.0 * policy.d_max) continue;
      }
      window.push_back(i);
    }
    // Dyadic pairs: d_j ~ 2 d_i, so the log-log abscissae spread over octaves
    // of the boundary distance instead of bunching at the window edge.
    for (int i : window)
      for (int j : window) {
        if (i == j) continue;
        const double di = grid.d[static_cast<std::size_t>(i)];
        const double dj = grid.d[static_cast<std::size_t>(j)];
        if (std::abs(dj - 2.0 * di) <= 0.25 * grid.h) pairs.emplace_back(i, j);
      }
  } else {
    const std::size_t total =
        static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
    if (total <= policy.cap) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    } else {
      std::mt19937_64 rng(policy.seed);
      std::uniform_int_distribution<int> pick(0, n - 1);
      pairs.reserve(policy.cap);
      while (pairs.size() < policy.cap) {
        const int i = pick(rng), j = pick(rng);
        if (i != j) pairs.emplace_back(i, j);
      }
    }
  }

  if (pairs.size() < 3)
    throw EmptyFilter("pair policy yields " + std::to_string(pairs.size()) +
                      " pairs; need at least 3");

  std::vector<double> lx, ly;
  lx.reserve(pairs.size());
  ly.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    const double du = std::abs(field[static_cast<std::size_t>(i)] -
                               field[static_cast<std::size_t>(j)]);
    if (du <= 1e-12) continue;  // below threshold: floating-point noise
    const Point2 pi = grid.point(i), pj = grid.point(j);
    const double dist = std::hypot(pi.x - pj.x, pi.y - pj.y);
    lx.push_back(std::log(dist));
    ly.push_back(std::log(du));
  }
  if (ly.empty())
    throw DegenerateField(
        "all pair differences at or below 1e-12; exponent undefined "
        "(a flat field is Hoelder for every exponent)");
  if (ly.size() < 3)
    throw EmptyFilter("fewer than 3 pairs above the 1e-12 difference threshold");
  return log_log_fit(lx, ly);
}

TraceResult boundary_trace(const Field& field, const Grid& grid, int depth,
                           const SourceSpec* g) {
  if (depth < 1) throw ValidationError("boundary_trace requires depth >= 1");
  const double band = static_cast<double>(depth) * grid.h * (1.0 + 1e-12);
  TraceResult tr;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.d[i] > band) continue;
    const double gi = g ? source_value(*g, grid.point(static_cast<int>(i))) : 0.0;
    const double a = std::abs(field[i] - gi);
    if (a > tr.max_abs || tr.argmax_node < 0) {
      tr.max_abs = a;
      tr.argmax_node = static_cast<int>(i);
    }
  }
  return tr;
}

FitResult decay_rate_fit(const Trajectory& traj, double t0, double t1) {
  std::vector<double> ts, ls;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
    const double trace = traj.boundary_traces[k];
    if (!(trace > 0.0))
      throw NonPositiveTrace("boundary trace at t = " + std::to_string(t) +
                             " is not positive; log fit undefined");
    ts.push_back(t);
    ls.push_back(std::log(trace));
  }
  if (ts.size() < 3)
    throw ValidationError("decay_rate_fit needs at least 3 snapshots in the window");
  FitResult fit = log_log_fit(ts, ls);  // here abscissa is t, not log t
  fit.exponent_or_rate = -fit.exponent_or_rate;
  return fit;
}

}  // namespace degenlab
