#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "degenlab/errors.hpp"

namespace degenlab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class DomainKind { Interval1D, Disk2D, Annulus2D };

// Bounded domain with a closed-form distance-to-boundary function.  The
// degeneracy weight d(x)^mu must be exact, not a numerical artifact, so only
// shapes with analytic d are supported.  Disk and annulus are centered at the
// origin.
struct Domain {
  DomainKind kind = DomainKind::Interval1D;
  double a = 0.0, b = 0.0;        // interval endpoints (a < b)
  double radius = 0.0;            // disk
  double r_in = 0.0, r_out = 0.0; // annulus (0 < r_in < r_out)

  int dim() const { return kind == DomainKind::Interval1D ? 1 : 2; }
  // Length scale used for grid spacing h = char_length / n.
  double char_length() const {
    switch (kind) {
      case DomainKind::Interval1D: return b - a;
      case DomainKind::Disk2D: return 2.0 * radius;
      default: return 2.0 * r_out;
    }
  }
  // Maximum of d over the closure (the "D" constant of the structural checks).
  double max_distance() const {
    switch (kind) {
      case DomainKind::Interval1D: return 0.5 * (b - a);
      case DomainKind::Disk2D: return radius;
      default: return 0.5 * (r_out - r_in);
    }
  }
  Point2 center() const {
    if (kind == DomainKind::Interval1D) return {0.5 * (a + b), 0.0};
    return {0.0, 0.0};
  }
};

Domain make_interval(double a, double b);
Domain make_disk(double radius);
Domain make_annulus(double r_in, double r_out);

// True iff p lies in the open interior.
bool contains(const Domain& dom, Point2 p);

// Exact Euclidean distance from p to the boundary; 0 iff p is on the
// boundary.  Throws PointOutsideDomain when p is outside the closure.
double distance(const Domain& dom, Point2 p);

// Signed variant used internally for boundary clipping: positive inside,
// negative outside, zero on the boundary.  Defined for every p.
double signed_distance(const Domain& dom, Point2 p);

// Uniform interior lattice.  Nodes carry exact distances, per-axis neighbor
// links (-1 when the stepped point leaves the domain) and a layer flag that is
// set iff at least one +-h step exits the domain.  No boundary nodes exist:
// the equation is solved without boundary data.
struct Grid {
  Domain domain;
  int n = 0;       // subdivisions of the characteristic length
  double h = 0.0;  // spacing
  int dim = 1;

  std::vector<double> x, y;            // coordinates (y all zero in 1D)
  std::vector<double> d;               // analytic boundary distance per node
  std::vector<std::uint8_t> is_layer;  // 1 iff some axis arm exits the domain
  // neighbor ids per node: [0]=-x, [1]=+x, [2]=-y, [3]=+y; -1 when absent
  std::vector<std::array<int, 4>> nbr;

  std::size_t size() const { return x.size(); }
  Point2 point(int i) const { return {x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]}; }
};

// Builds the lattice of points strictly inside the domain with spacing
// h = char_length / n, ordered lexicographically by (x, y).  Throws
// GridTooCoarse when fewer than 3 interior nodes result.
Grid build_grid(const Domain& dom, int n);

}  // namespace degenlab
