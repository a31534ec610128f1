#include "degenlab/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

namespace degenlab {

Domain make_interval(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b))
    throw InvalidDomainParams("interval requires finite a < b, got a=" + std::to_string(a) +
                              ", b=" + std::to_string(b));
  Domain d;
  d.kind = DomainKind::Interval1D;
  d.a = a;
  d.b = b;
  return d;
}

Domain make_disk(double radius) {
  if (!(std::isfinite(radius) && radius > 0.0))
    throw InvalidDomainParams("disk requires radius > 0, got " + std::to_string(radius));
  Domain d;
  d.kind = DomainKind::Disk2D;
  d.radius = radius;
  return d;
}

Domain make_annulus(double r_in, double r_out) {
  if (!(std::isfinite(r_in) && std::isfinite(r_out)) || !(0.0 < r_in && r_in < r_out))
    throw InvalidDomainParams("annulus requires 0 < r_in < r_out, got r_in=" +
                              std::to_string(r_in) + ", r_out=" + std::to_string(r_out));
  Domain d;
  d.kind = DomainKind::Annulus2D;
  d.r_in = r_in;
  d.r_out = r_out;
  return d;
}

double signed_distance(const Domain& dom, Point2 p) {
  switch (dom.kind) {
    case DomainKind::Interval1D:
      return std::min(p.x - dom.a, dom.b - p.x);
    case DomainKind::Disk2D:
      return dom.radius - std::hypot(p.x, p.y);
    default: {
      const double r = std::hypot(p.x, p.y);
      return std::min(r - dom.r_in, dom.r_out - r);
    }
  }
}

bool contains(const Domain& dom, Point2 p) { return signed_distance(dom, p) > 0.0; }

double distance(const Domain& dom, Point2 p) {
  const double s = signed_distance(dom, p);
  if (s < 0.0)
    throw PointOutsideDomain("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                             ") lies outside the domain closure");
  return s;
}

Grid build_grid(const Domain& dom, int n) {
  if (n < 1) throw GridTooCoarse("grid subdivision count must be >= 1, got " + std::to_string(n));

  Grid g;
  g.domain = dom;
  g.n = n;
  g.dim = dom.dim();
  g.h = dom.char_length() / static_cast<double>(n);

  // Integer lattice indices per node, used to wire neighbor links exactly.
  std::vector<std::pair<int, int>> lattice;

  if (dom.kind == DomainKind::Interval1D) {
    for (int k = 1; k < n; ++k) {
      const double xk = dom.a + static_cast<double>(k) * g.h;
      if (!contains(dom, {xk, 0.0})) continue;  // guards fp edge cases
      lattice.emplace_back(k, 0);
      g.x.push_back(xk);
      g.y.push_back(0.0);
    }
  } else {
    // Lexicographic by (x, y): x-index outer ascending, y-index inner.
    for (int i = -n; i <= n; ++i) {
      for (int j = -n; j <= n; ++j) {
        const Point2 p{static_cast<double>(i) * g.h, static_cast<double>(j) * g.h};
        if (!contains(dom, p)) continue;
        lattice.emplace_back(i, j);
        g.x.push_back(p.x);
        g.y.push_back(p.y);
      }
    }
  }

  const std::size_t count = g.x.size();
  if (count < 3)
    throw GridTooCoarse("only " + std::to_string(count) +
                        " interior nodes at n=" + std::to_string(n) + "; need at least 3");

  std::map<std::pair<int, int>, int> id_of;
  for (std::size_t k = 0; k < count; ++k) id_of[lattice[k]] = static_cast<int>(k);

  g.d.resize(count);
  g.is_layer.assign(count, 0);
  g.nbr.assign(count, {-1, -1, -1, -1});

  for (std::size_t k = 0; k < count; ++k) {
    g.d[k] = distance(dom, {g.x[k], g.y[k]});
    const auto [i, j] = lattice[k];
    const std::pair<int, int> steps[4] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
    const int axes = (g.dim == 1) ? 2 : 4;
    for (int s = 0; s < axes; ++s) {
      auto it = id_of.find(steps[s]);
      if (it != id_of.end()) {
        g.nbr[k][static_cast<std::size_t>(s)] = it->second;
      } else {
        // The node set is exactly the interior lattice, so a missing id means
        // the stepped point exits the domain.
        g.is_layer[k] = 1;
      }
    }
  }
  return g;
}

}  // namespace degenlab
