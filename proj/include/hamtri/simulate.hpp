#pragma once

// Ground-truth dynamics for the perturbed system: the polynomial vector
// field, Poincare return map on the diagonal section through the center,
// displacement measurement in conserved-quantity units, cycle counting over
// the section, and inversion from target mu directions to concrete
// perturbation vectors under documented gauges.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamtri/cyclicity.hpp"
#include "hamtri/geometry.hpp"
#include "hamtri/ode.hpp"

namespace hamtri {

struct EpsVector {
  double e0 = 0, e1 = 0, e2 = 0, e3 = 0, e4 = 0;
  std::string gauge;  // which inversion branch produced it; empty if direct

  double alpha() const { return 1.0 + e3; }
  double beta() const { return 1.0 + e4; }
  double norm() const {
    return std::sqrt(e0 * e0 + e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4);
  }
};

// induced first-order coefficients of the displacement expansion
inline MuParams mu_of_eps(const EpsVector& e) {
  MuParams m;
  m.mu1 = -e.e0;
  m.mu2 = -(e.e1 * e.e3 + e.e2 * e.e4) / 2.0;
  m.mu3 = (e.e1 * e.e3 - e.e2 * e.e4) * (e.e3 - e.e4) / 2.0;
  m.mu4 = (e.e1 * e.e3 - e.e2 * e.e4) * (e.e1 + e.e2) / 6.0;
  return m;
}

inline void vector_field(double x, double y, const EpsVector& e, double& dx, double& dy) {
  const double a = e.alpha(), b = e.beta();
  dx = x * (b - b * x - (b + 1.0) * y) + e.e0 * x * x + e.e1 * y * y;
  dy = y * (-a + (a + 1.0) * x + a * y) + e.e0 * y * y + e.e2 * x * x;
}

namespace detail {

inline long double conserved_level(long double x, long double y) {
  return x * y * (1.0L - x - y);
}

}  // namespace detail

// --- Poincare return ---------------------------------------------------------

struct ReturnResult {
  double t_start;            // section parameter, point (t, t)
  double x_return, y_return; // section crossing after one revolution
  double period;
  double displacement;       // conserved level at return minus at start
};

// One revolution from (t, t) on the diagonal section below the center.
// The section is crossed once per turn with the diagonal gap g = y - x
// passing from positive to negative; a blind lead-in skips the start point.
inline ReturnResult poincare_return(double t, const EpsVector& eps, double rtol = 1e-12) {
  if (!(t > 0.0 && t < 1.0 / 3.0)) {
    throw std::domain_error("poincare_return: section parameter must lie in (0, 1/3)");
  }
  using Ode = Dopri5<2>;
  Ode::Rhs rhs = [&eps](double, const Ode::State& y, Ode::State& dydt) {
    vector_field(y[0], y[1], eps, dydt[0], dydt[1]);
  };
  auto section_gap = [](double, const Ode::State& y) { return y[1] - y[0]; };
  Ode::Options opt;
  opt.rtol = rtol;
  opt.atol = rtol * 1e-2;
  Ode::State y0 = {t, t};
  Ode::EventResult ev;
  try {
    ev = Ode::integrate_event(rhs, 0.0, 250.0, y0, section_gap, -1, 2.0, opt);
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "poincare_return: orbit integration failed; the perturbation is too large or the "
        "start point is too close to the invariant triangle");
  }
  if (!ev.found) {
    throw std::runtime_error(
        "poincare_return: orbit escaped the section (no return crossing found)");
  }
  const double xr = ev.y[0], yr = ev.y[1];
  if (!(xr > 0.0 && yr > 0.0 && xr + yr < 1.0)) {
    throw std::runtime_error("poincare_return: orbit escaped the invariant triangle");
  }
  ReturnResult r;
  r.t_start = t;
  r.x_return = xr;
  r.y_return = yr;
  r.period = ev.t;
  const long double before = detail::conserved_level(t, t);
  const long double after = detail::conserved_level(xr, yr);
  r.displacement = static_cast<double>(after - before);
  return r;
}

inline double displacement(double t, const EpsVector& eps, double rtol = 1e-12) {
  return poincare_return(t, eps, rtol).displacement;
}

// --- cycle counting ----------------------------------------------------------

struct CycleReport {
  int count = 0;
  std::vector<double> h_levels;   // refined sign changes, mapped to the cubic chart
  std::vector<double> t_params;   // the same crossings in section parameter
  std::vector<double> grid_t;     // section grid
  std::vector<double> grid_displacement;
};

inline CycleReport count_cycles(const EpsVector& eps, int resolution = 48, double rtol = 1e-12) {
  if (resolution < 4) throw std::invalid_argument("count_cycles: resolution too small");
  CycleReport rep;
  // keep clear of the center and the separatrix triangle: drop a combined 5%
  // of the section at its two ends
  const double t_hi = (1.0 / 3.0) * (1.0 - 0.025);
  const double t_lo = (1.0 / 3.0) * 0.025;
  rep.grid_t.resize(resolution);
  rep.grid_displacement.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (resolution - 1.0);
    rep.grid_t[i] = t;
    rep.grid_displacement[i] = displacement(t, eps, rtol);
  }
  auto sgn = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  for (int i = 0; i + 1 < resolution; ++i) {
    const int s0 = sgn(rep.grid_displacement[i]);
    const int s1 = sgn(rep.grid_displacement[i + 1]);
    if (s0 == 0 || s1 == 0 || s0 == s1) continue;
    double lo = rep.grid_t[i], hi = rep.grid_t[i + 1];
    double dlo = rep.grid_displacement[i];
    for (int it = 0; it < 60 && (hi - lo) > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double dm = displacement(mid, eps, rtol);
      if (dm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (sgn(dm) == sgn(dlo)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    const double t_cross = 0.5 * (lo + hi);
    rep.t_params.push_back(t_cross);
    rep.h_levels.push_back(h_from_triangle_level(triangle_level(t_cross, t_cross)));
  }
  rep.count = static_cast<int>(rep.t_params.size());
  return rep;
}

// orbit trace for external plotting
struct OrbitTrace {
  std::vector<double> t, x, y, level;
};

inline OrbitTrace orbit_trace(double t0, const EpsVector& eps, double duration = 12.0,
                              int samples = 600, double rtol = 1e-12) {
  if (!(t0 > 0.0 && t0 < 1.0 / 3.0)) {
    throw std::domain_error("orbit_trace: section parameter must lie in (0, 1/3)");
  }
  if (samples < 2 || duration <= 0) throw std::invalid_argument("orbit_trace: bad sampling");
  using Ode = Dopri5<2>;
  Ode::Rhs rhs = [&eps](double, const Ode::State& y, Ode::State& dydt) {
    vector_field(y[0], y[1], eps, dydt[0], dydt[1]);
  };
  Ode::Options opt;
  opt.rtol = rtol;
  opt.atol = rtol * 1e-2;
  const auto sol = Ode::integrate(rhs, 0.0, duration, {t0, t0}, opt, true);
  OrbitTrace tr;
  for (int i = 0; i < samples; ++i) {
    const double tt = duration * i / (samples - 1.0);
    const auto y = sol(tt);
    tr.t.push_back(tt);
    tr.x.push_back(y[0]);
    tr.y.push_back(y[1]);
    tr.level.push_back(static_cast<double>(detail::conserved_level(y[0], y[1])));
  }
  return tr;
}

// --- inversion from mu targets -----------------------------------------------

// Builds a perturbation whose induced mu vector is exactly t_scale * m for
// some t_scale > 0.  Gauge selection follows the sign structure of the
// target: the split gauge e3 = tau, e4 = -tau can produce mu3, while the
// equal gauge e3 = e4 = tau keeps mu3 = 0 identically.
inline EpsVector eps_from_mu(const MuParams& m, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("eps_from_mu: scale must be positive");
  EpsVector e;
  const bool z1 = m.mu1 == 0.0, z2 = m.mu2 == 0.0, z3 = m.mu3 == 0.0, z4 = m.mu4 == 0.0;
  if (z1 && z2 && z3 && z4) {
    e.gauge = "zero";
    return e;
  }
  if (!z3) {
    // split gauge; the shared factor ties mu4 = tau u^2 / 6 to mu3 = tau^2 u,
    // so a vanishing mu4 target cannot be met
    if (z4) {
      throw std::runtime_error(
          "eps_from_mu: gauge failure, mu3 != 0 with mu4 == 0 is unreachable in the split "
          "gauge (the cubic factor couples them); perturb mu4 away from zero");
    }
    const double tau = (m.mu4 > 0 ? 1.0 : -1.0) * delta;
    const double t = 6.0 * m.mu4 * tau * tau * tau / (m.mu3 * m.mu3);
    const double u = t * m.mu3 / (tau * tau);
    const double v = -2.0 * t * m.mu2 / tau;
    e.e0 = -t * m.mu1;
    e.e1 = (u + v) / 2.0;
    e.e2 = (u - v) / 2.0;
    e.e3 = tau;
    e.e4 = -tau;
    e.gauge = "split-tau";
    return e;
  }
  if (!z4) {
    // equal gauge keeps mu3 = 0; it needs mu2 != 0 to carry the cubic weight
    if (z2) {
      throw std::runtime_error(
          "eps_from_mu: gauge failure, mu4 != 0 with mu2 == mu3 == 0 has no solution in "
          "the equal gauge; supply a nonzero mu2 component");
    }
    const double tau = delta;
    const double t = delta * delta / (2.0 * std::abs(m.mu2));
    const double u = -2.0 * t * m.mu2 / tau;
    const double v = -3.0 * m.mu4 / m.mu2;
    e.e0 = -t * m.mu1;
    e.e1 = (u + v) / 2.0;
    e.e2 = (u - v) / 2.0;
    e.e3 = tau;
    e.e4 = tau;
    e.gauge = "equal-tau";
    return e;
  }
  if (!z2) {
    const double tau = delta;
    const double t = delta * delta / (2.0 * std::abs(m.mu2));
    const double u = -2.0 * t * m.mu2 / tau;
    e.e0 = -t * m.mu1;
    e.e1 = u / 2.0;
    e.e2 = u / 2.0;
    e.e3 = tau;
    e.e4 = tau;
    e.gauge = "equal-tau";
    return e;
  }
  // only mu1: a pure divergence perturbation
  e.e0 = -m.mu1 * delta;
  e.gauge = "pure-divergence";
  return e;
}

// direction mismatch between a target mu and the mu induced by eps
inline double inversion_residual(const MuParams& target, const EpsVector& eps) {
  const MuParams got = mu_of_eps(eps);
  const double nt = std::sqrt(target.mu1 * target.mu1 + target.mu2 * target.mu2 +
                              target.mu3 * target.mu3 + target.mu4 * target.mu4);
  const double ng = std::sqrt(got.mu1 * got.mu1 + got.mu2 * got.mu2 + got.mu3 * got.mu3 +
                              got.mu4 * got.mu4);
  if (nt == 0.0 && ng == 0.0) return 0.0;
  if (nt == 0.0 || ng == 0.0) return 2.0;
  const double d1 = got.mu1 / ng - target.mu1 / nt;
  const double d2 = got.mu2 / ng - target.mu2 / nt;
  const double d3 = got.mu3 / ng - target.mu3 / nt;
  const double d4 = got.mu4 / ng - target.mu4 / nt;
  return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4);
}

}  // namespace hamtri
