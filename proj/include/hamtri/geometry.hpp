#pragma once

// Geometry of the period annulus: the cubic level ovals of
//   H(x, y) = x (y^2 - (x - 3)^2)
// for h in (-4, 0), and the affine chart change linking this form to the
// unit-triangle form xy(1 - x - y) whose levels are scaled by -1/108.

#include <cmath>
#include <stdexcept>
#include <string>

namespace hamtri {

struct Vec2 {
  double x;
  double y;
};

// Level function in the cubic chart.  The center sits at (1, 0) with value -4;
// the level h = 0 is the invariant-line triangle bounding the annulus.
inline double hamiltonian(double x, double y) {
  const double d = x - 3.0;
  return x * (y * y - d * d);
}

// Level function in the unit-triangle chart.  Center (1/3, 1/3), value 1/27.
inline double triangle_level(double x, double y) { return x * y * (1.0 - x - y); }

inline void require_interior_level(double h, const char* who) {
  if (!(h > -4.0 && h < 0.0)) {
    throw std::domain_error(std::string(who) + ": level h=" + std::to_string(h) +
                            " outside the open annulus range (-4, 0)");
  }
}

// On y = 0 the level condition reads x (x - 3)^2 = -h, a cubic with three
// positive roots for h in (-4, 0): x1 in (0,1), x2 in (1,3) bounding the oval,
// and a spare root x3 > 3 on the far branch.  All three are returned since the
// factorization x(x-3)^2 + h = (x - x1)(x - x2)(x - x3) feeds the quadratures.
struct OvalExtent {
  double x1;
  double x2;
  double x3;
};

namespace detail {

// Bracketed Newton for x(x-3)^2 - q on [lo, hi]; falls back to bisection
// whenever a Newton step leaves the bracket.  The sign of g at lo must be
// negative iff rising is true.
inline double cubic_root(double q, double lo, double hi) {
  auto g = [q](double x) { return x * (x - 3.0) * (x - 3.0) - q; };
  auto dg = [](double x) { return (x - 3.0) * (3.0 * x - 3.0); };
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx < 0.0) == (glo < 0.0)) {
      lo = x;
    } else {
      hi = x;
    }
    double d = dg(x);
    double step = (d != 0.0) ? gx / d : 0.0;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 1e-17 * (1.0 + std::abs(x))) return xn;
    x = xn;
  }
  return x;
}

}  // namespace detail

inline OvalExtent oval_extent(double h) {
  require_interior_level(h, "oval_extent");
  const double q = -h;  // in (0, 4)
  OvalExtent e;
  e.x1 = detail::cubic_root(q, 0.0, 1.0);
  e.x2 = detail::cubic_root(q, 1.0, 3.0);
  // g(3) = -q < 0 and g grows cubically; x = 6 gives 54 - q > 0.
  e.x3 = detail::cubic_root(q, 3.0, 6.0);
  return e;
}

// Upper branch of the oval: y(x) = sqrt((x-3)^2 + h/x) for x in [x1, x2].
// Rounding can push the radicand a hair below zero at the turning points.
inline double oval_height(double h, double x) {
  require_interior_level(h, "oval_height");
  if (!(x > 0.0)) throw std::domain_error("oval_height: x must be positive");
  const double d = x - 3.0;
  double r = d * d + h / x;
  if (r < 0.0) {
    if (r < -1e-10 * (1.0 + std::abs(h))) {
      throw std::domain_error("oval_height: x outside the oval span");
    }
    r = 0.0;
  }
  return std::sqrt(r);
}

// Affine pair between the charts.  Cubic-chart (1, 0) maps to triangle-chart
// (1/3, 1/3); the cubic corner (3, 0) lands on the triangle corner (0, 0).
// Levels transform linearly: h = -108 * (triangle level).
inline Vec2 from_h_chart(Vec2 p) {
  return {(3.0 - p.x + p.y) / 6.0, (3.0 - p.x - p.y) / 6.0};
}

inline Vec2 to_h_chart(Vec2 t) {
  return {3.0 * (1.0 - t.x - t.y), 3.0 * (t.x - t.y)};
}

inline double h_from_triangle_level(double level) { return -108.0 * level; }

inline double triangle_level_from_h(double h) { return h / -108.0; }

}  // namespace hamtri
