#pragma once

// The derivative ratio w(h) = I2'(h) / I0'(h).  It satisfies the Riccati
// equation
//   3h(h+4) w' = -2w^2 + 2(h+6) w - 2(2h+9),
// runs from w(-4) = 1 to w(0) = 3, and stays strictly between the chords
// l1(h) = 1 + (h+4)/6 and l2(h) = 3 + h/2.  Near h = 0 it behaves like
// 3 + 6/ln|h|.  Derivatives up to third order have closed forms in (h, w);
// the third one is driven by the quartic
//   zeta(h, w) = -324 - 108h - 37h^2 - 4h^3
//                + 2(108 - 42h + 4h^2 + h^3) w
//                + (-144 + 76h + h^2) w^2 - 12(h-6) w^3 - 12 w^4.

#include <cmath>
#include <stdexcept>

#include "hamtri/ode.hpp"
#include "hamtri/picard_fuchs.hpp"

namespace hamtri {

inline double chord_lower(double h) { return 1.0 + (h + 4.0) / 6.0; }
inline double chord_upper(double h) { return 3.0 + h / 2.0; }

inline double zeta_eval(double h, double w) {
  double c0 = -324.0 - 108.0 * h - 37.0 * h * h - 4.0 * h * h * h;
  double c1 = 2.0 * (108.0 - 42.0 * h + 4.0 * h * h + h * h * h);
  double c2 = -144.0 + 76.0 * h + h * h;
  double c3 = -12.0 * (h - 6.0);
  double c4 = -12.0;
  return c0 + w * (c1 + w * (c2 + w * (c3 + w * c4)));
}

// Direct evaluation through the quadrature layer.
inline double w_direct(double h, double tol = 1e-13) {
  return abelian_dI(2, h, tol) / abelian_dI(0, h, tol);
}

// Taylor coefficients of w at the center value, obtained by dividing the
// quintic expansions of I2' and I0'.  The low coefficients reproduce the
// classical truncation 1 + s/6 + s^2/108 + 7 s^3/5832.
inline const Jet<6>& w_center_jet() {
  static const Jet<6> jet = [] {
    Jet<6> n{}, d{};
    for (int k = 1; k <= 5; ++k) {
      n.c[k - 1] = k * series::kI2[k];
      d.c[k - 1] = k * series::kI0[k];
    }
    return n / d;
  }();
  return jet;
}

inline double w_series(double s) {
  const auto& j = w_center_jet();
  double acc = 0.0;
  for (int k = 5; k >= 0; --k) acc = acc * s + j.c[k];
  return acc;
}

inline double w_asymptote(double h) { return 3.0 + 6.0 / std::log(std::abs(h)); }

// Same logarithmic law with the integration constant fixed by the interior
// expansions: near the outer boundary I0' ~ (1/2) ln(|h|/108) and
// I2' ~ (3/2) ln(|h|/108) + 3, so the ratio approaches 3 + 6/ln(|h|/108).
// The plain form above differs by O(1/ln^2|h|), which is still ~0.1 at
// |h| = 1e-6; the calibrated form is accurate to ~1e-5 already at |h| = 1e-4.
inline double w_asymptote_calibrated(double h) {
  return 3.0 + 6.0 / std::log(std::abs(h) / 108.0);
}

// Dense Riccati solution across the annulus.  Inside the seed gap the center
// expansion is returned; past the right cut the logarithmic asymptote is the
// contract.
class RatioSolution {
 public:
  struct Config {
    double seed_offset = 1e-3;  // series region: h <= -4 + seed_offset
    double h_stop = -1e-4;      // asymptote region: h > h_stop
    double rtol = 1e-12;
    double atol = 1e-14;
  };

  RatioSolution() : RatioSolution(Config{}) {}

  explicit RatioSolution(Config cfg) : cfg_(cfg) {
    using I1 = Dopri5<1>;
    I1::Rhs rhs = [](double h, const I1::State& y, I1::State& dy) {
      double w = y[0];
      dy[0] = (-2.0 * w * w + 2.0 * (h + 6.0) * w - 2.0 * (2.0 * h + 9.0)) /
              (3.0 * h * (h + 4.0));
    };
    I1::Options opt;
    opt.rtol = cfg_.rtol;
    opt.atol = cfg_.atol;
    sol_ = I1::integrate(rhs, -4.0 + cfg_.seed_offset, cfg_.h_stop,
                         {w_series(cfg_.seed_offset)}, opt);
  }

  double operator()(double h) const {
    if (!(h > -4.0 && h < 0.0)) {
      throw std::domain_error("RatioSolution: level outside (-4, 0)");
    }
    if (h <= -4.0 + cfg_.seed_offset) return w_series(h + 4.0);
    if (h > cfg_.h_stop) return w_asymptote_calibrated(h);
    return sol_(h)[0];
  }

  const Config& config() const { return cfg_; }

 private:
  Config cfg_;
  Dopri5<1>::Solution sol_;
};

inline const RatioSolution& w_cache() {
  static const RatioSolution sol;
  return sol;
}

inline double w_riccati(double h) { return w_cache()(h); }

// Derivatives of w through third order.  Away from the center value they use
// the closed forms in (h, w); inside the seed gap the center Taylor series
// takes over (the closed forms degenerate to 0/0 at h = -4).
struct RatioDerivs {
  double w;
  double w1;
  double w2;
  double w3;
};

inline double w_slope_closed(double h, double w) {
  return (-2.0 * w * w + 2.0 * (h + 6.0) * w - 2.0 * (2.0 * h + 9.0)) /
         (3.0 * h * (h + 4.0));
}

inline double w_curv_closed(double h, double w) {
  double p = 6.0 + h - 2.0 * w;
  double q = -2.0 * h - 6.0 * w + h * w + 2.0 * w * w;
  double den = 9.0 * h * h * (4.0 + h) * (4.0 + h);
  return -2.0 * p * q / den;
}

inline double w_jerk_closed(double h, double w) {
  double den = 27.0 * h * h * h * (4.0 + h) * (4.0 + h) * (4.0 + h);
  return 4.0 * zeta_eval(h, w) / den;
}

inline RatioDerivs w_derivs(double h) {
  if (!(h >= -4.0 && h < 0.0)) {
    throw std::domain_error("w_derivs: level outside [-4, 0)");
  }
  double s = h + 4.0;
  if (s <= 1e-3) {
    const auto& j = w_center_jet();
    RatioDerivs r;
    r.w = w_series(s);
    r.w1 = j.c[1] + s * (2.0 * j.c[2] + s * (3.0 * j.c[3] + s * (4.0 * j.c[4] + s * 5.0 * j.c[5])));
    r.w2 = 2.0 * j.c[2] + s * (6.0 * j.c[3] + s * (12.0 * j.c[4] + s * 20.0 * j.c[5]));
    r.w3 = 6.0 * j.c[3] + s * (24.0 * j.c[4] + s * 60.0 * j.c[5]);
    return r;
  }
  double w = w_riccati(h);
  return {w, w_slope_closed(h, w), w_curv_closed(h, w), w_jerk_closed(h, w)};
}

// Algebraic branch bounding w from above on the interior:
//   (h^3 - 2h^2 + 48h + 432 + h(h+4) sqrt(h^2 + 4h + 324)) / (2(-2h^2 - 8h + 72)).
// The denominator has no roots in [-4, 0].
inline double w_tilde(double h) {
  double num = h * h * h - 2.0 * h * h + 48.0 * h + 432.0 +
               h * (h + 4.0) * std::sqrt(h * h + 4.0 * h + 324.0);
  double den = 2.0 * (-2.0 * h * h - 8.0 * h + 72.0);
  return num / den;
}

// Residual of the Riccati equation with the slope taken by finite differences
// of the cached solution, normalized against the participating scales.
inline double riccati_residual(double h, double dh = 1e-6) {
  double wp = (w_riccati(h + dh) - w_riccati(h - dh)) / (2.0 * dh);
  double w = w_riccati(h);
  double lhs = 3.0 * h * (h + 4.0) * wp;
  double rhs = -2.0 * w * w + 2.0 * (h + 6.0) * w - 2.0 * (2.0 * h + 9.0);
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

// Grid certificate that the cached solution stays inside the chord envelope.
struct EnvelopeReport {
  int points = 0;
  int violations = 0;
  double min_upper_gap = 0.0;  // min over grid of l2 - w
  double min_lower_gap = 0.0;  // min over grid of w - l1
};

inline EnvelopeReport envelope_check(int n = 500, double margin = 1e-6) {
  EnvelopeReport rep;
  rep.points = n;
  rep.min_upper_gap = 1e300;
  rep.min_lower_gap = 1e300;
  for (int i = 0; i < n; ++i) {
    double h = -4.0 + margin + (4.0 - 2.0 * margin) * (i + 0.5) / n;
    double w = w_riccati(h);
    double lo = chord_lower(h), hi = chord_upper(h);
    if (!(w >= lo && w <= hi)) ++rep.violations;
    rep.min_lower_gap = std::min(rep.min_lower_gap, w - lo);
    rep.min_upper_gap = std::min(rep.min_upper_gap, hi - w);
  }
  return rep;
}

}  // namespace hamtri
