#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "degenlab/geometry.hpp"

using namespace degenlab;

TEST_CASE("domain factories validate their parameters") {
  CHECK_NOTHROW(make_interval(0.0, 2.0));
  CHECK_NOTHROW(make_disk(1.0));
  CHECK_NOTHROW(make_annulus(0.5, 1.5));
  CHECK_THROWS_AS(make_interval(1.0, 1.0), InvalidDomainParams);
  CHECK_THROWS_AS(make_interval(2.0, 0.0), InvalidDomainParams);
  CHECK_THROWS_AS(make_disk(0.0), InvalidDomainParams);
  CHECK_THROWS_AS(make_disk(-1.0), InvalidDomainParams);
  CHECK_THROWS_AS(make_annulus(1.5, 0.5), InvalidDomainParams);
  CHECK_THROWS_AS(make_annulus(0.0, 1.0), InvalidDomainParams);
}

TEST_CASE("distance matches the hand values") {
  CHECK(distance(make_interval(0.0, 2.0), {0.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(distance(make_disk(1.0), {0.6, 0.0}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(distance(make_annulus(0.5, 1.5), {1.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));

  // Interior maxima and boundary zeros.
  CHECK(distance(make_interval(0.0, 2.0), {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(distance(make_interval(0.0, 2.0), {2.0, 0.0}) == doctest::Approx(0.0));
  CHECK(distance(make_disk(1.0), {0.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("distance throws outside the closure") {
  CHECK_THROWS_AS(distance(make_interval(0.0, 2.0), {2.5, 0.0}), PointOutsideDomain);
  CHECK_THROWS_AS(distance(make_disk(1.0), {1.1, 0.0}), PointOutsideDomain);
  CHECK_THROWS_AS(distance(make_annulus(0.5, 1.5), {0.1, 0.0}), PointOutsideDomain);
}

TEST_CASE("signed_distance is defined everywhere and signs correctly") {
  Domain dom = make_disk(1.0);
  CHECK(signed_distance(dom, {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(signed_distance(dom, {2.0, 0.0}) == doctest::Approx(-1.0));
  CHECK(signed_distance(dom, {1.0, 0.0}) == doctest::Approx(0.0));
  CHECK(contains(dom, {0.9, 0.0}));
  CHECK_FALSE(contains(dom, {1.0, 0.0}));  // boundary is not interior
}

TEST_CASE("interval grid n=4 enumerates exactly") {
  Grid g = build_grid(make_interval(0.0, 2.0), 4);
  CHECK(g.h == doctest::Approx(0.5).epsilon(1e-15));
  REQUIRE(g.size() == 3);
  CHECK(g.x[0] == doctest::Approx(0.5));
  CHECK(g.x[1] == doctest::Approx(1.0));
  CHECK(g.x[2] == doctest::Approx(1.5));
  CHECK(g.is_layer[0] == 1);
  CHECK(g.is_layer[1] == 0);
  CHECK(g.is_layer[2] == 1);
  // Missing arms are the ones that step onto/through the boundary.
  CHECK(g.nbr[0][0] == -1);
  CHECK(g.nbr[0][1] == 1);
  CHECK(g.nbr[2][1] == -1);
  CHECK(g.d[0] == doctest::Approx(0.5));
  CHECK(g.d[1] == doctest::Approx(1.0));
}

TEST_CASE("too-coarse grids are rejected") {
  CHECK_THROWS_AS(build_grid(make_interval(0.0, 2.0), 2), GridTooCoarse);
  CHECK_THROWS_AS(build_grid(make_interval(0.0, 2.0), 1), GridTooCoarse);
  CHECK_THROWS_AS(build_grid(make_interval(0.0, 2.0), 0), GridTooCoarse);
  CHECK_NOTHROW(build_grid(make_interval(0.0, 2.0), 4));
}

TEST_CASE("disk grid n=4: nine interior lattice points, center not layer") {
  Grid g = build_grid(make_disk(1.0), 4);
  CHECK(g.h == doctest::Approx(0.5));
  REQUIRE(g.size() == 9);
  int layer_count = 0, center = -1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_layer[i]) ++layer_count;
    if (std::abs(g.x[i]) < 1e-14 && std::abs(g.y[i]) < 1e-14) center = static_cast<int>(i);
  }
  // The eight ring points have an exiting arm; the center's four neighbors
  // all lie strictly inside.
  CHECK(layer_count == 8);
  REQUIRE(center >= 0);
  CHECK(g.is_layer[static_cast<std::size_t>(center)] == 0);
  for (int a = 0; a < 4; ++a) CHECK(g.nbr[static_cast<std::size_t>(center)][a] >= 0);
}

TEST_CASE("stored d matches analytic distance to 1e-14 relative") {
  for (const Domain& dom : {make_interval(0.0, 2.0), make_disk(1.0), make_annulus(0.5, 1.5)}) {
    Grid g = build_grid(dom, 24);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double ref = distance(dom, g.point(static_cast<int>(i)));
      CHECK(g.d[i] > 0.0);
      CHECK(std::abs(g.d[i] - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("layer flag is true iff some axis step exits the domain") {
  for (const Domain& dom : {make_interval(0.0, 2.0), make_disk(1.0), make_annulus(0.5, 1.5)}) {
    Grid g = build_grid(dom, 20);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point2 p = g.point(static_cast<int>(i));
      const Point2 steps[4] = {{p.x - g.h, p.y}, {p.x + g.h, p.y},
                               {p.x, p.y - g.h}, {p.x, p.y + g.h}};
      bool exits = false;
      bool marginal = false;
      for (int a = 0; a < 2 * g.dim; ++a) {
        const bool inside = contains(dom, steps[a]);
        exits = exits || !inside;
        // Rebuilding p +- h here rounds differently from the grid's own
        // lattice arithmetic, so skip arms that land within an ulp-scale
        // band of the boundary; the invariant is only meaningful for
        // decisively inside/outside steps.
        if (std::abs(signed_distance(dom, steps[a])) <= 1e-12) {
          marginal = true;
          continue;
        }
        // Neighbor link present iff the stepped point is interior.
        CHECK((g.nbr[i][static_cast<std::size_t>(a)] >= 0) == inside);
      }
      if (!marginal) CHECK((g.is_layer[i] == 1) == exits);
    }
  }
}

TEST_CASE("neighbor links are reciprocal and geometrically consistent") {
  Grid g = build_grid(make_annulus(0.5, 1.5), 30);
  const int rev[4] = {1, 0, 3, 2};
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int a = 0; a < 4; ++a) {
      const int j = g.nbr[i][static_cast<std::size_t>(a)];
      if (j < 0) continue;
      CHECK(g.nbr[static_cast<std::size_t>(j)][static_cast<std::size_t>(rev[a])] ==
            static_cast<int>(i));
      const double dx = g.x[static_cast<std::size_t>(j)] - g.x[i];
      const double dy = g.y[static_cast<std::size_t>(j)] - g.y[i];
      const double expect_dx = (a == 0 ? -g.h : a == 1 ? g.h : 0.0);
      const double expect_dy = (a == 2 ? -g.h : a == 3 ? g.h : 0.0);
      CHECK(std::abs(dx - expect_dx) < 1e-12);
      CHECK(std::abs(dy - expect_dy) < 1e-12);
    }
  }
}

TEST_CASE("node ordering is lexicographic by (x, y)") {
  for (const Domain& dom : {make_disk(1.0), make_annulus(0.5, 1.5)}) {
    Grid g = build_grid(dom, 16);
    for (std::size_t i = 1; i < g.size(); ++i) {
      const bool ordered =
          g.x[i - 1] < g.x[i] - 1e-15 ||
          (std::abs(g.x[i - 1] - g.x[i]) <= 1e-15 && g.y[i - 1] < g.y[i]);
      CHECK(ordered);
    }
  }
}

TEST_CASE("refinement nesting: nodes of grid n appear in grid 2n") {
  for (const Domain& dom : {make_interval(0.0, 2.0), make_disk(1.0)}) {
    Grid coarse = build_grid(dom, 8);
    Grid fine = build_grid(dom, 16);
    std::set<std::pair<long long, long long>> fine_keys;
    for (std::size_t i = 0; i < fine.size(); ++i)
      fine_keys.insert({std::llround(fine.x[i] / fine.h * 2), std::llround(fine.y[i] / fine.h * 2)});
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const bool found = fine_keys.count(
          {std::llround(coarse.x[i] / fine.h * 2), std::llround(coarse.y[i] / fine.h * 2)});
      CHECK(found);
    }
  }
}

TEST_CASE("annulus grid excludes the hole") {
  Grid g = build_grid(make_annulus(0.5, 1.5), 24);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::hypot(g.x[i], g.y[i]);
    CHECK(r > 0.5);
    CHECK(r < 1.5);
  }
}

TEST_CASE("grid h follows the characteristic length") {
  CHECK(build_grid(make_interval(0.0, 2.0), 64).h == doctest::Approx(2.0 / 64));
  CHECK(build_grid(make_disk(1.0), 64).h == doctest::Approx(2.0 / 64));
  CHECK(build_grid(make_annulus(0.5, 1.5), 64).h == doctest::Approx(3.0 / 64));
}
