#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "degenlab/operators.hpp"

using namespace degenlab;

namespace {

const Domain kInterval = make_interval(0.0, 2.0);
const Domain kDisk = make_disk(1.0);

std::vector<OperatorSpec> sample_specs() {
  return {
      make_deg_laplace(2.0),
      make_deg_laplace(1.0),
      make_deg_drift(2.0, 1.0, 1.5, kInterval, DriftExtension::Quarter),
      make_deg_drift(2.0, 0.5, -0.7, kDisk, DriftExtension::Half),
      make_isaacs(2.0, {{{1.0, 0.0}, {1.2, 0.5}}, {{0.8, -0.3}, {1.5, 0.2}}}, kDisk),
      make_pucci(2.0, 1.0, 2.0),
      make_first_order_hj(1.0, 2.0),
      make_first_order_hj(0.5, 1.0),
  };
}

}  // namespace

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(make_deg_laplace(-1.0), InvalidOperatorParams);
  CHECK_THROWS_AS(make_deg_drift(2.0, -0.5, 1.0, kInterval), InvalidOperatorParams);
  // tau may not exceed mu - 1 (drift would dominate the weight).
  CHECK_THROWS_AS(make_deg_drift(2.0, 1.5, 1.0, kInterval), InvalidOperatorParams);
  CHECK_NOTHROW(make_deg_drift(2.0, 1.0, 1.0, kInterval));
  CHECK_THROWS_AS(make_pucci(2.0, 0.0, 1.0), InvalidOperatorParams);
  CHECK_THROWS_AS(make_pucci(2.0, 2.0, 1.0), InvalidOperatorParams);
  CHECK_NOTHROW(make_pucci(2.0, 1.0, 1.0));
  CHECK_THROWS_AS(make_first_order_hj(1.0, 0.0), InvalidOperatorParams);
  CHECK_THROWS_AS(make_first_order_hj(1.0, -2.0), InvalidOperatorParams);
  CHECK_THROWS_AS(make_isaacs(2.0, {}, kDisk), InvalidOperatorParams);
  CHECK_THROWS_AS(make_isaacs(2.0, {{}}, kDisk), InvalidOperatorParams);
  // Ragged control tables are rejected.
  CHECK_THROWS_AS(make_isaacs(2.0, {{{1.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}}}, kDisk),
                  InvalidOperatorParams);
  CHECK_THROWS_AS(make_isaacs(2.0, {{{-1.0, 0.0}}}, kDisk), InvalidOperatorParams);
}

TEST_CASE("pointwise evaluation oracles") {
  // DegLaplace mu=2, d=0.5, X.xx=4: F = -d^mu tr X = -0.25*4 = -1.
  CHECK(eval_operator(make_deg_laplace(2.0), {0.5, 0.0}, 0.5, {0.0, 0.0}, {4.0, 0.0}) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  // Every family vanishes at p=0, X=0 (zero must solve the homogeneous equation).
  for (const auto& spec : sample_specs()) {
    const Domain& dom = spec.geo.active ? spec.geo.domain : kInterval;
    const Point2 x = dom.kind == DomainKind::Interval1D ? Point2{0.5, 0.0} : Point2{0.25, 0.25};
    const double d = distance(dom, x);
    CHECK(eval_operator(spec, x, d, {0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(0.0));
  }
  // FirstOrderHJ mu=1, m=2, d=0.5, p=(-1,0): F = d |p|^2 = 0.5.
  CHECK(eval_operator(make_first_order_hj(1.0, 2.0), {0.5, 0.0}, 0.5, {-1.0, 0.0},
                      {0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
  // DegDrift hand value: d=0.25 <= d0, so b = 1*d^-1*e = -4 on the left half;
  // F = -d^2 tr X - d^2 <b, p> with X=0, p=(2,0): F = -0.0625*(-8) = 0.5.
  OperatorSpec dr = make_deg_drift(2.0, 1.0, 1.0, kInterval, DriftExtension::Quarter);
  CHECK(eval_operator(dr, {0.25, 0.0}, 0.25, {2.0, 0.0}, {0.0, 0.0}) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate ellipticity: F nonincreasing in each Hessian entry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (const auto& spec : sample_specs()) {
    const Domain& dom = spec.geo.active ? spec.geo.domain : kInterval;
    for (int rep = 0; rep < 200; ++rep) {
      Point2 x;
      if (dom.kind == DomainKind::Interval1D) {
        x = {0.1 + 1.8 * (unif(rng) + 2.0) / 4.0, 0.0};
      } else {
        do {
          x = {unif(rng) / 2.5, unif(rng) / 2.5};
        } while (!contains(dom, x));
      }
      const double d = distance(dom, x);
      const Vec2 p{unif(rng), unif(rng)};
      const Diag2 X{unif(rng), unif(rng)};
      const double base = eval_operator(spec, x, d, p, X);
      const double bump = 0.5;
      CHECK(eval_operator(spec, x, d, p, {X.xx + bump, X.yy}) <= base + 1e-12);
      CHECK(eval_operator(spec, x, d, p, {X.xx, X.yy + bump}) <= base + 1e-12);
    }
  }
}

TEST_CASE("single-entry Isaacs reduces to DegLaplace") {
  OperatorSpec is = make_isaacs(2.0, {{{1.0, 0.0}}}, kDisk);
  OperatorSpec la = make_deg_laplace(2.0);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int rep = 0; rep < 100; ++rep) {
    Point2 x;
    do {
      x = {unif(rng) / 2.5, unif(rng) / 2.5};
    } while (!contains(kDisk, x));
    const double d = distance(kDisk, x);
    const Diag2 X{unif(rng), unif(rng)};
    const Vec2 p{unif(rng), unif(rng)};
    CHECK(eval_operator(is, x, d, p, X) ==
          doctest::Approx(eval_operator(la, x, d, p, X)).epsilon(1e-14));
  }
}

TEST_CASE("Pucci with lambda = lambda_bar is a scaled Laplacian") {
  OperatorSpec pu = make_pucci(2.0, 1.5, 1.5);
  OperatorSpec la = make_deg_laplace(2.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double d = 0.1 + 0.4 * (unif(rng) + 2.0) / 4.0;
    const Point2 x{d, 0.0};
    const Diag2 X{unif(rng), unif(rng)};
    CHECK(eval_operator(pu, x, d, {0, 0}, X) ==
          doctest::Approx(1.5 * eval_operator(la, x, d, {0, 0}, X)).epsilon(1e-13));
  }
}

TEST_CASE("Pucci sandwich on sign-definite Hessians") {
  // For X with both diagonal entries of one sign the extremal operator lies
  // between the lambda- and lambda_bar-scaled Laplacians.
  OperatorSpec pu = make_pucci(2.0, 1.0, 2.0);
  OperatorSpec la = make_deg_laplace(2.0);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double d = unif(rng) / 4.0;
    const Point2 x{d, 0.0};
    const double sign = rep % 2 == 0 ? 1.0 : -1.0;
    const Diag2 X{sign * unif(rng), sign * unif(rng)};
    const double f1 = eval_operator(la, x, d, {0, 0}, X);       // lambda = 1 end
    const double f2 = 2.0 * eval_operator(la, x, d, {0, 0}, X); // lambda = 2 end
    const double fp = eval_operator(pu, x, d, {0, 0}, X);
    CHECK(fp >= std::min(f1, f2) - 1e-13);
    CHECK(fp <= std::max(f1, f2) + 1e-13);
  }
}

TEST_CASE("check_f3 columns match the analytic exponent delta^(mu-2+gamma)") {
  const std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  for (double mu : {1.0, 2.0, 3.0}) {
    for (double gamma : {0.5, 1.0}) {
      auto rep = check_f3(make_deg_laplace(mu), kInterval, {gamma}, deltas);
      REQUIRE(rep.table.size() == deltas.size());
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double expect = std::pow(deltas[i], mu - 2.0 + gamma);
        CHECK(rep.table[i].value == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("check_f3 verdicts discriminate mu") {
  const std::vector<double> gammas{0.5, 1.0};
  const std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  auto sup = check_f3(make_deg_laplace(2.0), kInterval, gammas, deltas);
  CHECK(sup.verdict == Verdict::Supports);
  CHECK(sup.witness.empty());

  auto ref = check_f3(make_deg_laplace(1.0), kInterval, gammas, deltas);
  CHECK(ref.verdict == Verdict::Refutes);
  REQUIRE_FALSE(ref.witness.empty());
  // The gamma = 0.5 column is the analytic witness: growth factor sqrt(2)
  // per delta-halving.
  bool has_half = false;
  for (const auto& row : ref.witness) has_half = has_half || row.gamma == 0.5;
  CHECK(has_half);

  // Slow decay that neither clearly decays nor clearly grows.
  auto inc = check_f3(make_deg_laplace(1.7), kInterval, {0.6}, deltas);
  CHECK(inc.verdict == Verdict::Inconclusive);

  // The report admits the sampler cannot certify the universal quantifier.
  CHECK(sup.note.find("cannot certify") != std::string::npos);

  // Drift contribution stays bounded for tau <= mu - 1 (first-order part
  // scales like delta^(mu-tau-1) * omega(delta)/delta * delta = decaying).
  auto dr = check_f3(make_deg_drift(2.0, 1.0, 1.0, kInterval), kInterval, {1.0}, deltas);
  CHECK(dr.verdict == Verdict::Supports);
}

TEST_CASE("check_f3 input validation") {
  CHECK_THROWS_AS(check_f3(make_deg_laplace(2.0), kInterval, {}, {0.4, 0.2}),
                  InvalidOperatorParams);
  CHECK_THROWS_AS(check_f3(make_deg_laplace(2.0), kInterval, {1.5}, {0.4, 0.2}),
                  InvalidOperatorParams);
  CHECK_THROWS_AS(check_f3(make_deg_laplace(2.0), kInterval, {0.5}, {0.4}),
                  InvalidOperatorParams);
  CHECK_THROWS_AS(check_f3(make_deg_laplace(2.0), kInterval, {0.5}, {0.2, 0.4}),
                  InvalidOperatorParams);
  CHECK_THROWS_AS(check_f3(make_deg_laplace(2.0), kInterval, {0.5}, {2.5, 0.4}),
                  InvalidOperatorParams);
}

TEST_CASE("check_f4 columns and verdict") {
  // DegLaplace mu=2 on (0,2): sup over the domain of d^2 * r = D^2 * r = r.
  auto rep = check_f4(make_deg_laplace(2.0), kInterval, 100, {1.0, 0.1, 0.01});
  REQUIRE(rep.table.size() == 3);
  CHECK(rep.table[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.table[1].value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rep.table[2].value == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(rep.verdict == Verdict::Supports);

  // r = 0 gives |F| = 0 exactly.
  auto rep0 = check_f4(make_deg_laplace(2.0), kInterval, 100, {0.5, 0.0});
  CHECK(rep0.table.back().value == 0.0);

  // FirstOrderHJ mu=1, m=2: sup = D * r^2 = r^2.
  auto hj = check_f4(make_first_order_hj(1.0, 2.0), kInterval, 100, {1.0, 0.1, 0.01});
  CHECK(hj.table[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hj.table[2].value == doctest::Approx(1e-4).epsilon(1e-10));
  CHECK(hj.verdict == Verdict::Supports);

  CHECK_THROWS_AS(check_f4(make_deg_laplace(2.0), kInterval, 50, {1.0, 0.1}),
                  InvalidOperatorParams);
  CHECK_THROWS_AS(check_f4(make_deg_laplace(2.0), kInterval, 100, {0.1, 1.0}),
                  InvalidOperatorParams);
}

TEST_CASE("lemma_f5_constants follows the alpha ladder") {
  // sigma = d on (0,2): L1 = 1; alpha = 0.5 gives beta = 1.0 (too big), so
  // the ladder settles at alpha = 0.25, beta = 0.5; L = 2*1*1*(1+1*(1+1)) = 6.
  auto rep = lemma_f5_constants(1.0, 1.0, 0.0, 0.0, 1.0, 1.0);
  REQUIRE(rep.constants.has_value());
  CHECK(rep.constants->L1 == doctest::Approx(1.0));
  CHECK(rep.constants->alpha == doctest::Approx(0.25));
  CHECK(rep.constants->beta == doctest::Approx(0.5));
  CHECK(rep.constants->L == doctest::Approx(6.0));
  CHECK(rep.verdict == Verdict::Supports);

  // All-zero coefficients: L1 = 0, beta = 0, the largest ladder alpha works.
  auto zero = lemma_f5_constants(0.0, 0.0, 0.0, 0.0, 1.0, 1.0);
  REQUIRE(zero.constants.has_value());
  CHECK(zero.constants->L1 == doctest::Approx(0.0));
  CHECK(zero.constants->alpha == doctest::Approx(0.5));
  CHECK(zero.constants->beta == doctest::Approx(0.0));

  CHECK_THROWS_AS(lemma_f5_constants(-1.0, 0.0, 0.0, 0.0, 1.0, 1.0), InvalidOperatorParams);
  CHECK_THROWS_AS(lemma_f5_constants(1.0, 1.0, 0.0, 0.0, 0.0, 1.0), InvalidOperatorParams);
  CHECK_THROWS_AS(lemma_f5_constants(1.0, 1.0, 0.0, 0.0, 1.0, 0.0), InvalidOperatorParams);
}

TEST_CASE("f6_constants hand values") {
  auto [bf1, ell1] = f6_constants(1.0, 1.0, 1.0);
  CHECK(bf1 == doctest::Approx(2.0));
  CHECK(ell1 == doctest::Approx(6.0));
  auto [bf2, ell2] = f6_constants(2.0, 1.0, 1.0);
  CHECK(bf2 == doctest::Approx(6.0));
  CHECK(ell2 == doctest::Approx(20.0));
}

TEST_CASE("drift amplitude: exact power law near the boundary, C1 handoff") {
  for (auto ext : {DriftExtension::Quarter, DriftExtension::Half}) {
    OperatorSpec spec = make_deg_drift(2.0, 1.0, 1.5, kInterval, ext);
    const double D = kInterval.max_distance();
    const double d0 = ext == DriftExtension::Quarter ? D / 4.0 : D / 2.0;
    // Exact d^-tau law in the boundary layer.
    for (double d : {0.2 * d0, 0.6 * d0, d0}) {
      CHECK(drift_amplitude(spec, d) == doctest::Approx(1.5 * std::pow(d, -1.0)).epsilon(1e-13));
    }
    // C1 at the junction: one-sided slopes agree to O(eps).
    const double eps = 1e-6;
    const double left = (drift_amplitude(spec, d0) - drift_amplitude(spec, d0 - eps)) / eps;
    const double right = (drift_amplitude(spec, d0 + eps) - drift_amplitude(spec, d0)) / eps;
    CHECK(std::abs(left - right) < 1e-3 * std::abs(left));
    // Vanishes at the distance ridge.
    CHECK(drift_amplitude(spec, D) == doctest::Approx(0.0));
    // Bounded interior continuation.
    for (double d = d0; d <= D; d += D / 64.0)
      CHECK(std::abs(drift_amplitude(spec, d)) <= 1.5 * std::pow(d0, -1.0) * 1.0001);
  }
}

TEST_CASE("unit boundary direction points toward the nearest boundary") {
  CHECK(unit_boundary_dir(kInterval, {0.3, 0.0}).x == doctest::Approx(-1.0));
  CHECK(unit_boundary_dir(kInterval, {1.7, 0.0}).x == doctest::Approx(1.0));
  auto dd = unit_boundary_dir(kDisk, {0.5, 0.0});
  CHECK(dd.x == doctest::Approx(1.0));
  CHECK(dd.y == doctest::Approx(0.0));
  // Disk center: no preferred direction; the amplitude vanishes there anyway.
  auto dc = unit_boundary_dir(kDisk, {0.0, 0.0});
  CHECK(std::hypot(dc.x, dc.y) == doctest::Approx(0.0));
  Domain ann = make_annulus(0.5, 1.5);
  CHECK(unit_boundary_dir(ann, {0.7, 0.0}).x == doctest::Approx(-1.0));  // inner wall nearer
  CHECK(unit_boundary_dir(ann, {1.3, 0.0}).x == doctest::Approx(1.0));   // outer wall nearer
}

TEST_CASE("family scales used by the CFL bound") {
  CHECK(diffusion_scale(make_deg_laplace(2.0)) == doctest::Approx(1.0));
  CHECK(diffusion_scale(make_pucci(2.0, 1.0, 2.0)) == doctest::Approx(2.0));
  CHECK(diffusion_scale(make_isaacs(2.0, {{{1.0, 0.0}, {1.5, 0.0}}}, kDisk)) ==
        doctest::Approx(2.25));
  CHECK(diffusion_scale(make_first_order_hj(1.0, 2.0)) == doctest::Approx(0.0));

  CHECK(hamiltonian_slope(make_first_order_hj(1.0, 2.0), 3.0) == doctest::Approx(6.0));
  CHECK(hamiltonian_slope(make_first_order_hj(1.0, 1.0), 3.0) == doctest::Approx(1.0));
  CHECK(hamiltonian_slope(make_deg_laplace(2.0), 3.0) == doctest::Approx(0.0));

  CHECK(drift_amplitude(make_deg_laplace(2.0), 0.5) == doctest::Approx(0.0));
}

TEST_CASE("verdict names") {
  CHECK(std::string(to_string(Verdict::Supports)) == "Supports");
  CHECK(std::string(to_string(Verdict::Refutes)) == "Refutes");
  CHECK(std::string(to_string(Verdict::Inconclusive)) == "Inconclusive");
}
