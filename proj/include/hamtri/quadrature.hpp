#pragma once

// Quadrature layer: the complete abelian integrals
//   I_i(h)     = oint x^i y dx           (oval of x(y^2 - (x-3)^2) = h)
//   I*(h)      = oint y (x-1) ln x dx
//   I_i'(h)    = -int x^{i-1} / y dx
// together with the unit-triangle integrals J_1..J_4 computed independently
// in the triangle chart, and the linear combinations tying the two families
// together.  Engine: tanh-sinh for the x-integrals (handles the square-root
// and inverse-square-root turning points), a periodic polar parameterization
// with trapezoid/Gauss product rules for the triangle-chart integrals.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hamtri/geometry.hpp"

namespace hamtri {

struct AbelianFrame {
  double I0;
  double I2;
  double Istar;
  double dI0;
  double dI2;
  double dIstar;
};

namespace detail {

inline boost::math::quadrature::tanh_sinh<double>& ts_engine() {
  static thread_local boost::math::quadrature::tanh_sinh<double> eng(15);
  return eng;
}

// The oval factorization x(x-3)^2 + h = (x - x1)(x - x2)(x - x3) gives
// y^2 = (x - x1)(x2 - x)(x3 - x)/x on [x1, x2].  The tanh-sinh engine hands
// us the distance to the nearest endpoint, which replaces the cancelling
// factor so the radicand stays accurate into the turning points.
struct OvalGeom {
  double x1, x2, x3, mid;
  explicit OvalGeom(double h) {
    auto e = oval_extent(h);
    x1 = e.x1;
    x2 = e.x2;
    x3 = e.x3;
    mid = 0.5 * (x1 + x2);
  }
  double radicand(double x, double xc) const {
    double f1 = (x < mid) ? xc : x - x1;
    double f2 = (x < mid) ? x2 - x : xc;
    double r = f1 * f2 * (x3 - x) / x;
    return r > 0.0 ? r : 0.0;
  }
  double y(double x, double xc) const { return std::sqrt(radicand(x, xc)); }
};

template <typename F>
double oval_integral(double h, F&& f, double tol) {
  OvalGeom g(h);
  double error = 0.0;
  double v = ts_engine().integrate([&](double x, double xc) { return f(g, x, std::abs(xc)); },
                                   g.x1, g.x2, tol, &error);
  return v;
}

// Bracketed Newton with bisection fallback for a scalar equation with a sign
// change across [lo, hi].
template <typename F, typename DF>
double solve_bracketed(F&& f, DF&& df, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 120; ++it) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
    } else {
      hi = x;
    }
    double d = df(x);
    double xn = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 1e-16 * (1.0 + std::abs(x))) return xn;
    x = xn;
  }
  return x;
}

}  // namespace detail

// oint x^i y dx = -2 int_{x1}^{x2} x^i y dx, for i in [-1, 6].
inline double abelian_I(int i, double h, double tol = 1e-13) {
  require_interior_level(h, "abelian_I");
  if (i < -1 || i > 6) throw std::domain_error("abelian_I: power out of range [-1, 6]");
  return -2.0 * detail::oval_integral(
                    h, [i](const detail::OvalGeom& g, double x, double xc) {
                      return std::pow(x, i) * g.y(x, xc);
                    },
                    tol);
}

// d/dh oint x^i y dx = -int x^{i-1} / y dx.
inline double abelian_dI(int i, double h, double tol = 1e-13) {
  require_interior_level(h, "abelian_dI");
  if (i < -1 || i > 6) throw std::domain_error("abelian_dI: power out of range [-1, 6]");
  return -detail::oval_integral(
      h, [i](const detail::OvalGeom& g, double x, double xc) {
        return std::pow(x, i - 1) / g.y(x, xc);
      },
      tol);
}

// oint y (x-1) ln x dx.
inline double abelian_Istar(double h, double tol = 1e-13) {
  require_interior_level(h, "abelian_Istar");
  return -2.0 * detail::oval_integral(
                    h, [](const detail::OvalGeom& g, double x, double xc) {
                      return (x - 1.0) * std::log(x) * g.y(x, xc);
                    },
                    tol);
}

inline double abelian_dIstar(double h, double tol = 1e-13) {
  require_interior_level(h, "abelian_dIstar");
  return -detail::oval_integral(
      h, [](const detail::OvalGeom& g, double x, double xc) {
        return (x - 1.0) * std::log(x) / (x * g.y(x, xc));
      },
      tol);
}

// oint x^i y^j dx.  Vanishes for even j by the y -> -y symmetry of the oval.
inline double moment_I(int i, int j, double h, double tol = 1e-13) {
  require_interior_level(h, "moment_I");
  if (j < 0) throw std::domain_error("moment_I: negative power of y");
  if (j % 2 == 0) return 0.0;
  return -2.0 * detail::oval_integral(
                    h, [i, j](const detail::OvalGeom& g, double x, double xc) {
                      return std::pow(x, i) * std::pow(g.y(x, xc), j);
                    },
                    tol);
}

inline AbelianFrame quadrature_frame(double h, double tol = 1e-13) {
  return {abelian_I(0, h, tol),  abelian_I(2, h, tol),  abelian_Istar(h, tol),
          abelian_dI(0, h, tol), abelian_dI(2, h, tol), abelian_dIstar(h, tol)};
}

// Residual of the three-term contraction lowering powers on the oval,
//   (2k+6) I_{k+1} = 6(2k+3) I_k - 18k I_{k-1} - (2k-3) h I_{k-2},  k >= 1,
// normalized by the largest participating magnitude.
inline double power_recursion_residual(int k, double h, double tol = 1e-13) {
  if (k < 1) throw std::domain_error("power_recursion_residual: k must be >= 1");
  double a = abelian_I(k + 1, h, tol);
  double b = abelian_I(k, h, tol);
  double c = abelian_I(k - 1, h, tol);
  double d = abelian_I(k - 2, h, tol);
  double lhs = (2.0 * k + 6.0) * a;
  double rhs = 6.0 * (2.0 * k + 3.0) * b - 18.0 * k * c - (2.0 * k - 3.0) * h * d;
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
  return std::abs(lhs - rhs) / scale;
}

// Residual of the y-power reduction at (i, j) = (0, 3):
//   (1/3) oint y^3 dx = 9 I_0 - 12 I_1 + 3 I_2.
inline double cubic_moment_residual(double h, double tol = 1e-13) {
  double lhs = moment_I(0, 3, h, tol) / 3.0;
  double rhs = 9.0 * moment_I(0, 1, h, tol) - 12.0 * moment_I(1, 1, h, tol) +
               3.0 * moment_I(2, 1, h, tol);
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
  return std::abs(lhs - rhs) / scale;
}

// ---------------------------------------------------------------------------
// Triangle-chart integrals.  The oval of xy(1-x-y) = level is star-shaped
// about the center (1/3, 1/3); rays give a radius function r(phi) and the
// integrals reduce to periodic one-dimensional quadratures.

namespace detail {

struct TriangleOval {
  double level;
  explicit TriangleOval(double level_) : level(level_) {
    if (!(level > 0.0 && level < 1.0 / 27.0)) {
      throw std::domain_error("TriangleOval: level outside (0, 1/27)");
    }
  }

  static double Tx(double x, double y) { return y * (1.0 - 2.0 * x - y); }
  static double Ty(double x, double y) { return x * (1.0 - x - 2.0 * y); }

  double ray_limit(double c, double s) const {
    double r = std::numeric_limits<double>::infinity();
    if (c < 0.0) r = std::min(r, -(1.0 / 3.0) / c);
    if (s < 0.0) r = std::min(r, -(1.0 / 3.0) / s);
    if (c + s > 0.0) r = std::min(r, (1.0 / 3.0) / (c + s));
    return r;
  }

  // radius of the oval along direction (cos phi, sin phi)
  double radius(double c, double s) const {
    double hi = ray_limit(c, s) * (1.0 - 1e-14);
    auto f = [&](double r) {
      return triangle_level(1.0 / 3.0 + r * c, 1.0 / 3.0 + r * s) - level;
    };
    auto df = [&](double r) {
      double x = 1.0 / 3.0 + r * c, y = 1.0 / 3.0 + r * s;
      return c * Tx(x, y) + s * Ty(x, y);
    };
    return solve_bracketed(f, df, 0.0, hi);
  }

  // dr/dphi from implicit differentiation of the level condition
  double radius_slope(double r, double c, double s) const {
    double x = 1.0 / 3.0 + r * c, y = 1.0 / 3.0 + r * s;
    double gx = Tx(x, y), gy = Ty(x, y);
    return -r * (-s * gx + c * gy) / (c * gx + s * gy);
  }
};

// Periodic trapezoid with node offset (avoids the diagonal crossings) and
// doubling until two consecutive refinements agree.
template <typename F>
double periodic_integral(F&& f, double tol) {
  const double two_pi = 2.0 * M_PI;
  int n = 256;
  auto eval = [&](int m) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
      double phi = two_pi * (k + 0.5) / m;
      acc += f(phi);
    }
    return acc * two_pi / m;
  };
  double prev = eval(n);
  for (n = 512; n <= 16384; n *= 2) {
    double cur = eval(n);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

template <typename F>
double area_integral(const TriangleOval& oval, F&& f, double tol) {
  using gauss = boost::math::quadrature::gauss<double, 32>;
  return periodic_integral(
      [&](double phi) {
        double c = std::cos(phi), s = std::sin(phi);
        double R = oval.radius(c, s);
        // int_0^R f(x(rho), y(rho)) rho drho by fixed Gauss on [0, R]
        double acc = 0.0;
        for (unsigned k = 0; k < gauss::abscissa().size(); ++k) {
          double a = gauss::abscissa()[k], w = gauss::weights()[k];
          for (double sign : {1.0, -1.0}) {
            if (k == 0 && sign < 0.0 && gauss::abscissa()[0] == 0.0) continue;
            double rho = 0.5 * R * (1.0 + sign * a);
            double x = 1.0 / 3.0 + rho * c, y = 1.0 / 3.0 + rho * s;
            acc += w * f(x, y) * rho;
          }
        }
        return acc * 0.5 * R;
      },
      tol);
}

template <typename F>
double line_integral(const TriangleOval& oval, F&& f, double tol) {
  return periodic_integral(
      [&](double phi) {
        double c = std::cos(phi), s = std::sin(phi);
        double r = oval.radius(c, s);
        double rp = oval.radius_slope(r, c, s);
        double x = 1.0 / 3.0 + r * c, y = 1.0 / 3.0 + r * s;
        double dx = rp * c - r * s, dy = rp * s + r * c;
        return f(x, y, dx, dy);
      },
      tol);
}

}  // namespace detail

// J_1..J_4 on the triangle-chart oval at the level corresponding to h,
// computed directly in that chart (no use of the abelian frame):
//   J_1 = oint y^2 dx - x^2 dy
//   J_2 = int int (x^3 + y^3)/(xy)
//   J_3 = int int [(x-y)(x+y)^2 ln(x/y) + (x+y)(x^2+xy+y^2)]/(xy)
//   J_4 = (1/3 level) oint x^3 y^3 (dx + dy)/(y - x)
// Area integrals run over the region enclosed by the oval.  The J_4 line
// integrand has removable singularities where the oval meets the diagonal
// (the crossing is orthogonal, so dx + dy vanishes with y - x); the offset
// node grid never lands on them.
inline double original_J(int k, double h, double tol = 1e-11) {
  require_interior_level(h, "original_J");
  detail::TriangleOval oval(triangle_level_from_h(h));
  switch (k) {
    case 1:
      return detail::line_integral(
          oval, [](double x, double y, double dx, double dy) { return y * y * dx - x * x * dy; },
          tol);
    case 2:
      return detail::area_integral(
          oval, [](double x, double y) { return (x * x * x + y * y * y) / (x * y); }, tol);
    case 3:
      return detail::area_integral(
          oval,
          [](double x, double y) {
            double p = (x - y) * (x + y) * (x + y) * std::log(x / y);
            double q = (x + y) * (x * x + x * y + y * y);
            return (p + q) / (x * y);
          },
          tol);
    case 4:
      return detail::line_integral(
                 oval,
                 [](double x, double y, double dx, double dy) {
                   return x * x * x * y * y * y * (dx + dy) / (y - x);
                 },
                 tol) /
             (3.0 * oval.level);
    default:
      throw std::domain_error("original_J: k must be 1..4");
  }
}

// Area form of J_1 (Green's theorem cross-check): -2 int int (x + y).
inline double original_J1_area(double h, double tol = 1e-11) {
  require_interior_level(h, "original_J1_area");
  detail::TriangleOval oval(triangle_level_from_h(h));
  return -2.0 * detail::area_integral(oval, [](double x, double y) { return x + y; }, tol);
}

// ---------------------------------------------------------------------------
// Linear relations expressing J_1..J_4 through the abelian frame at the same
// level h.  These are the bridge the acceptance battery checks against the
// direct triangle-chart values above.

inline double j_combination(int k, double h, const AbelianFrame& F) {
  switch (k) {
    case 1:
      return 2.0 / 27.0 * F.I0;
    case 2:
      return 2.0 * ((h + 18.0) * F.I0 - 12.0 * F.I2) / (27.0 * h);
    case 3:
      return ((h - 12.0) * F.I0 + 24.0 * F.I2 - 36.0 * F.Istar) / (18.0 * h);
    case 4:
      return ((19.0 * h + 702.0) * F.I0 - 324.0 * F.I2) / (10368.0 * h) +
             ((-3888.0 - 324.0 * h + 7.0 * h * h) * F.dI0 + 216.0 * (6.0 + h) * F.dI2) /
                 (20736.0 * h);
    default:
      throw std::domain_error("j_combination: k must be 1..4");
  }
}

// Equivalent compact form of the J_4 combination (denominator h+4 instead of
// the derivative terms); used as an internal consistency check only.
inline double j4_compact(double h, const AbelianFrame& F) {
  return ((h + 24.0) * F.I0 - 8.0 * F.I2) / (486.0 * (h + 4.0));
}

// The pure-log component J_31 = J_3 - 3 J_2, in its two published guises.
inline double j31_combination(double h, const AbelianFrame& F) {
  return (-(28.0 + h) * F.I0 + 24.0 * F.I2 - 12.0 * F.Istar) / (6.0 * h);
}

inline double j31_direct(double h, const AbelianFrame& F, double tol = 1e-13) {
  double Im1 = abelian_I(-1, h, tol);
  return Im1 / 2.0 + (4.0 / (3.0 * h) - 1.0 / 6.0) * F.I0 - 2.0 * F.Istar / h;
}

}  // namespace hamtri
