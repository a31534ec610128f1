#include "degenlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace degenlab {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw InvalidOperatorParams(std::string(name) + " must be finite");
}

DriftGeometry make_drift_geometry(const Domain& dom, double tau, DriftExtension ext) {
  DriftGeometry geo;
  geo.active = true;
  geo.domain = dom;
  geo.D = dom.max_distance();
  geo.d0 = (ext == DriftExtension::Quarter) ? 0.25 * geo.D : 0.5 * geo.D;
  geo.A0 = std::pow(geo.d0, -tau);
  geo.A0p = (tau == 0.0) ? 0.0 : -tau * std::pow(geo.d0, -tau - 1.0);
  return geo;
}

// Amplitude profile A(d) with A(d) = d^-tau for d <= d0 and a C1 cubic
// Hermite continuation that vanishes (with zero slope) at the distance ridge
// d = D, so b = A(d) e(x) stays C1 across the ridge and the disk center.
double amplitude_raw(const DriftGeometry& geo, double tau, double d) {
  if (d <= geo.d0) return std::pow(d, -tau);
  const double L = geo.D - geo.d0;
  if (L <= 0.0) return 0.0;
  const double t = std::min((d - geo.d0) / L, 1.0);
  const double h00 = (2.0 * t - 3.0) * t * t + 1.0;
  const double h10 = ((t - 2.0) * t + 1.0) * t;
  return h00 * geo.A0 + h10 * L * geo.A0p;
}

double max_abs_drift_entry(const OperatorSpec& spec) {
  double w = 0.0;
  for (const auto& row : spec.controls)
    for (const auto& e : row) w = std::max(w, std::abs(e.drift));
  return w;
}

}  // namespace

double source_value(const SourceSpec& s, Point2 p) {
  switch (s.kind) {
    case SourceKind::Zero: return 0.0;
    case SourceKind::Constant: return s.value;
    default: return s.value * p.x;
  }
}

OperatorSpec make_deg_laplace(double mu, SourceSpec source) {
  require_finite(mu, "mu");
  if (mu < 0.0) throw InvalidOperatorParams("mu must be >= 0, got " + std::to_string(mu));
  OperatorSpec s;
  s.family = Family::DegLaplace;
  s.mu = mu;
  s.source = source;
  return s;
}

OperatorSpec make_deg_drift(double mu, double tau, double drift_scale, const Domain& dom,
                            DriftExtension extension, SourceSpec source) {
  require_finite(mu, "mu");
  require_finite(tau, "tau");
  require_finite(drift_scale, "drift_scale");
  if (mu < 0.0) throw InvalidOperatorParams("mu must be >= 0, got " + std::to_string(mu));
  if (tau < 0.0) throw InvalidOperatorParams("tau must be >= 0, got " + std::to_string(tau));
  if (tau > mu - 1.0 + 1e-12)
    throw InvalidOperatorParams("deg_drift requires tau <= mu - 1 (got tau=" +
                                std::to_string(tau) + ", mu=" + std::to_string(mu) + ")");
  OperatorSpec s;
  s.family = Family::DegDrift;
  s.mu = mu;
  s.tau = tau;
  s.drift_scale = drift_scale;
  s.extension = extension;
  s.source = source;
  s.geo = make_drift_geometry(dom, tau, extension);
  return s;
}

OperatorSpec make_isaacs(double mu, std::vector<std::vector<ControlEntry>> controls,
                         const Domain& dom, SourceSpec source) {
  require_finite(mu, "mu");
  if (mu < 0.0) throw InvalidOperatorParams("mu must be >= 0, got " + std::to_string(mu));
  if (controls.empty()) throw InvalidOperatorParams("isaacs control table must be nonempty");
  const std::size_t cols = controls.front().size();
  for (const auto& row : controls) {
    if (row.empty() || row.size() != cols)
      throw InvalidOperatorParams("isaacs control table must be rectangular and nonempty");
    for (const auto& e : row) {
      require_finite(e.sigma_scale, "sigma_scale");
      require_finite(e.drift, "drift");
      if (e.sigma_scale < 0.0)
        throw InvalidOperatorParams("sigma_scale must be >= 0");
    }
  }
  OperatorSpec s;
  s.family = Family::Isaacs;
  s.mu = mu;
  s.controls = std::move(controls);
  s.source = source;
  s.geo = make_drift_geometry(dom, 0.0, DriftExtension::Quarter);
  return s;
}

OperatorSpec make_pucci(double mu, double lambda, double lambda_bar, SourceSpec source) {
  require_finite(mu, "mu");
  require_finite(lambda, "lambda");
  require_finite(lambda_bar, "lambda_bar");
  if (mu < 0.0) throw InvalidOperatorParams("mu must be >= 0, got " + std::to_string(mu));
  if (!(0.0 < lambda && lambda <= lambda_bar))
    throw InvalidOperatorParams("pucci requires 0 < lambda <= lambda_bar, got lambda=" +
                                std::to_string(lambda) + ", lambda_bar=" +
                                std::to_string(lambda_bar));
  OperatorSpec s;
  s.family = Family::Pucci;
  s.mu = mu;
  s.lambda = lambda;
  s.lambda_bar = lambda_bar;
  s.source = source;
  return s;
}

OperatorSpec make_first_order_hj(double mu, double m, SourceSpec source) {
  require_finite(mu, "mu");
  require_finite(m, "m");
  if (mu < 0.0) throw InvalidOperatorParams("mu must be >= 0, got " + std::to_string(mu));
  if (m <= 0.0) throw InvalidOperatorParams("m must be > 0, got " + std::to_string(m));
  OperatorSpec s;
  s.family = Family::FirstOrderHJ;
  s.mu = mu;
  s.m = m;
  s.source = source;
  return s;
}

Vec2 unit_boundary_dir(const Domain& dom, Point2 p) {
  switch (dom.kind) {
    case DomainKind::Interval1D:
      return {p.x < dom.center().x ? -1.0 : 1.0, 0.0};
    case DomainKind::Disk2D: {
      const double r = std::hypot(p.x, p.y);
      if (r == 0.0) return {0.0, 0.0};
      return {p.x / r, p.y / r};
    }
    default: {
      const double r = std::hypot(p.x, p.y);
      if (r == 0.0) return {0.0, 0.0};
      const double s = (r < 0.5 * (dom.r_in + dom.r_out)) ? -1.0 : 1.0;
      return {s * p.x / r, s * p.y / r};
    }
  }
}

double drift_amplitude(const OperatorSpec& spec, double d) {
  switch (spec.family) {
    case Family::DegDrift:
      return std::abs(spec.drift_scale) * amplitude_raw(spec.geo, spec.tau, d);
    case Family::Isaacs:
      return max_abs_drift_entry(spec);
    default:
      return 0.0;
  }
}

Vec2 drift_vector(const OperatorSpec& spec, Point2 p, double d) {
  if (spec.family != Family::DegDrift) return {0.0, 0.0};
  const double a = spec.drift_scale * amplitude_raw(spec.geo, spec.tau, d);
  const Vec2 e = unit_boundary_dir(spec.geo.domain, p);
  return {a * e.x, a * e.y};
}

double diffusion_scale(const OperatorSpec& spec) {
  switch (spec.family) {
    case Family::DegLaplace:
    case Family::DegDrift:
      return 1.0;
    case Family::Isaacs: {
      double s = 0.0;
      for (const auto& row : spec.controls)
        for (const auto& e : row) s = std::max(s, e.sigma_scale * e.sigma_scale);
      return s;
    }
    case Family::Pucci:
      return spec.lambda_bar;
    default:
      return 0.0;
  }
}

double hamiltonian_slope(const OperatorSpec& spec, double gradient_bound) {
  if (spec.family != Family::FirstOrderHJ) return 0.0;
  const double g = std::max(gradient_bound, 1e-30);
  return spec.m * std::pow(g, spec.m - 1.0);
}

double eval_operator(const OperatorSpec& spec, Point2 x, double d, Vec2 p, Diag2 X) {
  const double w = std::pow(d, spec.mu);
  const double tr = X.xx + X.yy;
  switch (spec.family) {
    case Family::DegLaplace:
      return -w * tr;
    case Family::DegDrift: {
      const Vec2 b = drift_vector(spec, x, d);
      return -w * tr - w * (b.x * p.x + b.y * p.y);
    }
    case Family::Isaacs: {
      const Vec2 e = unit_boundary_dir(spec.geo.domain, x);
      const double pe = e.x * p.x + e.y * p.y;
      double inf = std::numeric_limits<double>::infinity();
      for (const auto& row : spec.controls) {
        double sup = -std::numeric_limits<double>::infinity();
        for (const auto& c : row)
          sup = std::max(sup, w * c.sigma_scale * c.sigma_scale * tr + w * c.drift * pe);
        inf = std::min(inf, sup);
      }
      return -inf;
    }
    case Family::Pucci: {
      double s = 0.0;
      for (double xk : {X.xx, X.yy})
        s += spec.lambda_bar * std::max(xk, 0.0) - spec.lambda * std::max(-xk, 0.0);
      return -w * s;
    }
    default:
      return w * std::pow(std::hypot(p.x, p.y), spec.m);
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Supports: return "Supports";
    case Verdict::Refutes: return "Refutes";
    default: return "Inconclusive";
  }
}

namespace {

// Deterministic structured sweep shared by the F3/F4 samplers: points are
// realized on d-level sets (both boundary sides where applicable), gradients
// and Hessians at extremal magnitudes aligned per axis and diagonal.
std::vector<Point2> d_level_points(const Domain& dom, double d_target) {
  switch (dom.kind) {
    case DomainKind::Interval1D:
      return {{dom.a + d_target, 0.0}, {dom.b - d_target, 0.0}};
    case DomainKind::Disk2D:
      return {{dom.radius - d_target, 0.0}};
    default:
      return {{dom.r_in + d_target, 0.0}, {dom.r_out - d_target, 0.0}};
  }
}

std::vector<Vec2> gradient_candidates(double r, int dim) {
  if (dim == 1) return {{0.0, 0.0}, {r, 0.0}, {-r, 0.0}};
  const double q = r / std::sqrt(2.0);
  return {{0.0, 0.0}, {r, 0.0},  {-r, 0.0}, {0.0, r}, {0.0, -r},
          {q, q},     {q, -q},   {-q, q},   {-q, -q}};
}

std::vector<Diag2> hessian_candidates(double r, int dim) {
  if (dim == 1) return {{0.0, 0.0}, {r, 0.0}, {-r, 0.0}};
  return {{0.0, 0.0}, {r, 0.0},  {-r, 0.0}, {0.0, r}, {0.0, -r},
          {r, r},     {r, -r},   {-r, r},   {-r, -r}};
}

double sampled_sup(const OperatorSpec& spec, const Domain& dom, double d_cap, double rp,
                   double rX, int levels) {
  const double d_max = std::min(d_cap, dom.max_distance());
  const auto ps = gradient_candidates(rp, dom.dim());
  const auto Xs = hessian_candidates(rX, dom.dim());
  double sup = 0.0;
  for (int j = 1; j <= levels; ++j) {
    const double dj = d_max * static_cast<double>(j) / static_cast<double>(levels);
    for (const Point2& pt : d_level_points(dom, dj)) {
      const double d = distance(dom, pt);
      for (const Vec2& p : ps)
        for (const Diag2& X : Xs)
          sup = std::max(sup, std::abs(eval_operator(spec, pt, d, p, X)));
    }
  }
  return sup;
}

bool column_supports(const std::vector<double>& col, double tol) {
  for (std::size_t i = 1; i < col.size(); ++i)
    if (col[i] > col[i - 1] * (1.0 + 1e-9) + 1e-300) return false;
  // Decayed: either below the absolute floor or to at most half the first value.
  return col.back() <= std::max(tol, 0.5 * col.front());
}

bool column_refutes(const std::vector<double>& col, double tol) {
  return col.back() > tol && col.back() >= 0.95 * col.front();
}

}  // namespace

ConditionReport check_f3(const OperatorSpec& spec, const Domain& dom,
                         const std::vector<double>& gammas, const std::vector<double>& deltas,
                         double tol) {
  if (gammas.empty()) throw InvalidOperatorParams("check_f3 requires a nonempty gamma list");
  for (double g : gammas)
    if (!(g > 0.0 && g <= 1.0))
      throw InvalidOperatorParams("check_f3 gammas must lie in (0, 1]");
  if (deltas.size() < 2) throw InvalidOperatorParams("check_f3 requires at least 2 deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] < dom.char_length()))
      throw InvalidOperatorParams("check_f3 deltas must lie in (0, characteristic length)");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw InvalidOperatorParams("check_f3 deltas must be strictly decreasing");
  }

  constexpr int kLevels = 32;
  ConditionReport rep;
  rep.condition = "F3";
  rep.note =
      "witness family omega_gamma(delta) = delta^gamma; a finite sampler cannot certify "
      "the universal quantifier over all moduli of continuity";

  bool all_support = true;
  bool any_refute = false;
  for (double gamma : gammas) {
    std::vector<double> col;
    col.reserve(deltas.size());
    for (double delta : deltas) {
      const double rp = std::pow(delta, gamma - 1.0);
      const double rX = std::pow(delta, gamma - 2.0);
      const double v = sampled_sup(spec, dom, delta, rp, rX, kLevels);
      col.push_back(v);
      rep.table.push_back({gamma, delta, v});
    }
    if (!column_supports(col, tol)) all_support = false;
    if (column_refutes(col, tol)) {
      any_refute = true;
      for (std::size_t i = 0; i < deltas.size(); ++i)
        rep.witness.push_back({gamma, deltas[i], col[i]});
    }
  }
  rep.verdict = any_refute ? Verdict::Refutes
                           : (all_support ? Verdict::Supports : Verdict::Inconclusive);
  return rep;
}

ConditionReport check_f4(const OperatorSpec& spec, const Domain& dom, long samples,
                         const std::vector<double>& radii, double tol) {
  if (samples < 100) throw InvalidOperatorParams("check_f4 requires samples >= 100");
  if (radii.size() < 2) throw InvalidOperatorParams("check_f4 requires at least 2 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0.0) throw InvalidOperatorParams("check_f4 radii must be >= 0");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw InvalidOperatorParams("check_f4 radii must be strictly decreasing");
  }

  const int levels = static_cast<int>(samples);
  ConditionReport rep;
  rep.condition = "F4";
  std::vector<double> col;
  col.reserve(radii.size());
  for (double r : radii) {
    const double v =
        (r == 0.0) ? 0.0 : sampled_sup(spec, dom, dom.max_distance(), r, r, levels);
    col.push_back(v);
    rep.table.push_back({0.0, r, v});
  }
  if (col.back() <= tol) {
    rep.verdict = Verdict::Supports;
  } else if (column_refutes(col, tol)) {
    rep.verdict = Verdict::Refutes;
    for (std::size_t i = 0; i < radii.size(); ++i) rep.witness.push_back({0.0, radii[i], col[i]});
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

ConditionReport lemma_f5_constants(double sigma_lip, double sigma_over_d, double psi_lip,
                                   double psi_over_d, double L2, double D) {
  for (double v : {sigma_lip, sigma_over_d, psi_lip, psi_over_d})
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidOperatorParams("structural bounds must be finite and >= 0");
  if (!std::isfinite(L2) || L2 <= 0.0) throw InvalidOperatorParams("L2 must be > 0");
  if (!std::isfinite(D) || D <= 0.0) throw InvalidOperatorParams("D must be > 0");

  const double L1 = std::max(std::max(sigma_lip, sigma_over_d), std::max(psi_lip, psi_over_d));

  // Ladder {0.5, 0.25, 0.1} x 10^-k; the largest admissible step wins.
  double alpha = 0.0, beta = 0.0;
  bool found = false;
  for (int k = 0; k < 16 && !found; ++k) {
    const double scale = std::pow(10.0, -k);
    for (double base : {0.5, 0.25, 0.1}) {
      const double a = base * scale;
      const double b = a * (1.0 + L1) * L1 * L2;
      if (b <= 0.9) {
        alpha = a;
        beta = b;
        found = true;
        break;
      }
    }
  }
  if (!found) throw NoValidAlpha("no ladder value alpha gives beta < 1");

  const double L = 2.0 * L1 * L2 * (1.0 + L1 * (1.0 + D * D));

  ConditionReport rep;
  rep.condition = "F5Constants";
  rep.verdict = Verdict::Supports;
  rep.note = "sufficient-condition constants; not a proof of necessity";
  ConditionConstants c;
  c.L1 = L1;
  c.L2 = L2;
  c.alpha = alpha;
  c.beta = beta;
  c.L = L;
  const auto [bF, ell] = f6_constants(L1, L2, D);
  c.b_F = bF;
  c.ell = ell;
  rep.constants = c;
  return rep;
}

std::pair<double, double> f6_constants(double L1, double L2, double D) {
  for (double v : {L1, L2, D})
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidOperatorParams("f6_constants inputs must be finite and >= 0");
  const double b_F = (1.0 + L1) * L1 * L2;
  const double ell = 2.0 * L1 * L2 * (1.0 + L1 * (1.0 + D * D));
  return {b_F, ell};
}

}  // namespace degenlab
