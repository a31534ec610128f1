#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degenlab/geometry.hpp"

namespace degenlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Per-axis second-derivative values.  All families act on diagonal Hessians
// only (axis-aligned stencils keep every second-order family monotone; wide
// stencils are out of scope).
struct Diag2 {
  double xx = 0.0;
  double yy = 0.0;
};

enum class Family { DegLaplace, DegDrift, Isaacs, Pucci, FirstOrderHJ };

// Right-hand side f of the equation u + F(x, grad u, D2 u) = f.  Kept as a
// small tagged value (not a callback) so scenarios serialize and compare.
enum class SourceKind { Zero, Constant, CoordX };
struct SourceSpec {
  SourceKind kind = SourceKind::Zero;
  double value = 0.0;  // Constant: the constant; CoordX: multiplier of x
  bool operator==(const SourceSpec&) const = default;
};
double source_value(const SourceSpec& s, Point2 p);

struct ControlEntry {
  double sigma_scale = 1.0;  // diffusion scale; the operator uses sigma^2
  double drift = 0.0;        // drift amplitude along the boundary direction
  bool operator==(const ControlEntry&) const = default;
};

// Interior continuation profile of the drift amplitude (see make_deg_drift):
// the exact d^-tau law holds for d <= D/4 (Quarter) or d <= D/2 (Half); inside
// it is continued by the C1 cubic Hermite that dies at the distance ridge.
// Results must be insensitive to this choice; the harness compares both.
enum class DriftExtension { Quarter, Half };

struct DriftGeometry {
  bool active = false;  // set when the family evaluates a drift field
  Domain domain;
  double D = 0.0;   // max interior distance
  double d0 = 0.0;  // junction distance of the amplitude profile
  double A0 = 0.0, A0p = 0.0;  // amplitude value/slope at the junction
};

// One of the operator families F(x, p, X); sign convention: the equation is
// u + F(x, grad u, D2 u) = f(x).
struct OperatorSpec {
  Family family = Family::DegLaplace;
  double mu = 2.0;     // degeneracy exponent of the weight d(x)^mu
  double tau = 0.0;    // DegDrift: drift blow-up exponent (0 <= tau <= mu-1)
  double drift_scale = 1.0;               // DegDrift amplitude
  DriftExtension extension = DriftExtension::Quarter;
  double lambda = 1.0, lambda_bar = 1.0;  // Pucci ellipticity bounds
  double m = 1.0;      // FirstOrderHJ gradient power
  std::vector<std::vector<ControlEntry>> controls;  // Isaacs: rows inf, cols sup
  SourceSpec source;
  DriftGeometry geo;
};

OperatorSpec make_deg_laplace(double mu, SourceSpec source = {});
// Drift field b(x) = drift_scale * d(x)^-tau * e(x) near the boundary, where
// e(x) is the unit direction toward the nearest boundary point; the interior
// continuation (C1, bounded) is selected by `extension`.
OperatorSpec make_deg_drift(double mu, double tau, double drift_scale, const Domain& dom,
                            DriftExtension extension = DriftExtension::Quarter,
                            SourceSpec source = {});
OperatorSpec make_isaacs(double mu, std::vector<std::vector<ControlEntry>> controls,
                         const Domain& dom, SourceSpec source = {});
OperatorSpec make_pucci(double mu, double lambda, double lambda_bar, SourceSpec source = {});
OperatorSpec make_first_order_hj(double mu, double m, SourceSpec source = {});

// Unit vector from p toward the nearest boundary (zero at the disk center,
// where the drift amplitude vanishes anyway).
Vec2 unit_boundary_dir(const Domain& dom, Point2 p);

// |b(x)| at boundary distance d for the spec's drift field (0 for families
// without drift).  Used by the CFL bound and the structural checkers.
double drift_amplitude(const OperatorSpec& spec, double d);

// The drift vector b(x) itself (zero vector for families without drift).
Vec2 drift_vector(const OperatorSpec& spec, Point2 p, double d);

// Largest diffusion multiplier of tr X (before the d^mu weight): 1 for the
// Laplacian families, max sigma^2 for Isaacs, lambda_bar for Pucci, 0 for
// first-order.
double diffusion_scale(const OperatorSpec& spec);

// Local Lipschitz bound of the Hamiltonian in p at gradient magnitude G
// (before the d^mu weight): m * G^(m-1) for FirstOrderHJ, 0 otherwise.
double hamiltonian_slope(const OperatorSpec& spec, double gradient_bound);

// Pointwise family formula.  d must equal distance(domain, x) for families
// with drift; ellipticity: nonincreasing in each entry of X.
double eval_operator(const OperatorSpec& spec, Point2 x, double d, Vec2 p, Diag2 X);

// ---------------------------------------------------------------------------
// Structural-condition checkers
// ---------------------------------------------------------------------------

enum class Verdict { Supports, Refutes, Inconclusive };
const char* to_string(Verdict v);

struct ConditionRow {
  double gamma = 0.0;  // modulus exponent (F3); 0 for F4 rows
  double delta = 0.0;  // boundary-layer width (F3) or sample radius (F4)
  double value = 0.0;  // sampled supremum of |F|
};

struct ConditionConstants {
  double L1 = 0.0, L2 = 0.0, alpha = 0.0, beta = 0.0, L = 0.0;
  double b_F = 0.0, ell = 0.0;
};

struct ConditionReport {
  std::string condition;  // "F3" | "F4" | "F5Constants" | "F6Constants"
  std::vector<ConditionRow> table;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<ConditionRow> witness;  // rows backing a Refutes verdict
  std::optional<ConditionConstants> constants;
  std::string note;
};

// Samples sup |F| over x with d(x) <= delta, |p| <= omega(delta)/delta,
// |X| <= omega(delta)/delta^2 for the witness moduli omega_gamma(delta) =
// delta^gamma.  Deterministic structured sweep (d-levels times extremal p, X).
ConditionReport check_f3(const OperatorSpec& spec, const Domain& dom,
                         const std::vector<double>& gammas, const std::vector<double>& deltas,
                         double tol = 0.05);

// Samples sup |F| over x in the whole domain, |p| <= r, |X| <= r per radius.
ConditionReport check_f4(const OperatorSpec& spec, const Domain& dom, long samples,
                         const std::vector<double>& radii, double tol = 0.05);

// Sufficient-condition constants: L1 = max of the four structural bounds;
// alpha = largest ladder value {0.5, 0.25, 0.1, ...} with
// beta = alpha*(1+L1)*L1*L2 <= 0.9; L = 2*L1*L2*(1 + L1*(1 + D^2)).
ConditionReport lemma_f5_constants(double sigma_lip, double sigma_over_d, double psi_lip,
                                   double psi_over_d, double L2, double D);

// Parabolic constants b_F = (1+L1)*L1*L2 and ell = 2*L1*L2*(1 + L1*(1 + D^2)).
std::pair<double, double> f6_constants(double L1, double L2, double D);

}  // namespace degenlab
