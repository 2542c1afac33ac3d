#pragma once

// The first-order system satisfied by (I*, I2, I0):
//
//   [ I*  ]   [ h      -2          h+6        ] [ I*'  ]
//   [ I2  ] = [ 0   (3/4)(h-6)   (3/2)(h+9)   ] [ I2'  ]
//   [ I0  ]   [ 0     -3         (3/2)(h+6)   ] [ I0'  ]
//
// with det M = (9/8) h^2 (h+4).  The module provides the matrix, the solve
// for the derivatives, the convergent expansion at the center value h = -4
// used to seed a dense flow across the annulus, second-derivative closures,
// and a truncated-Taylor (jet) tower delivering derivatives of the frame to
// any small order at a point.

#include <array>
#include <cmath>

#include "hamtri/ode.hpp"
#include "hamtri/quadrature.hpp"

namespace hamtri {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 pf_matrix(double h) {
  return {{{h, -2.0, h + 6.0},
           {0.0, 0.75 * (h - 6.0), 1.5 * (h + 9.0)},
           {0.0, -3.0, 1.5 * (h + 6.0)}}};
}

inline double pf_det_closed(double h) { return 9.0 / 8.0 * h * h * (h + 4.0); }

namespace detail {

inline std::array<double, 3> solve3(Mat3 A, std::array<double, 3> b) {
  // Gaussian elimination with partial pivoting on a 3x3 system.
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      double m = A[r][col] / A[col][col];
      for (int c = col; c < 3; ++c) A[r][c] -= m * A[col][c];
      b[r] -= m * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

}  // namespace detail

// Solves for (I*', I2', I0') given (I*, I2, I0) at a fixed level.
inline std::array<double, 3> pf_derivatives(double h, double Istar, double I2, double I0) {
  return detail::solve3(pf_matrix(h), {Istar, I2, I0});
}

// Second derivatives follow from the reduced 2x2 system
//   3h(h+4) (I2'', I0'')^T = [[h+6, -2(9+2h)], [2, -(6+h)]] (I2', I0')^T
// and the closure I*'' = -2 I0' / (3h).
struct SecondDerivs {
  double d2Istar;
  double d2I2;
  double d2I0;
};

inline SecondDerivs second_derivatives(double h, double dI2, double dI0) {
  const double den = 3.0 * h * (h + 4.0);
  SecondDerivs out;
  out.d2I2 = ((h + 6.0) * dI2 - 2.0 * (9.0 + 2.0 * h) * dI0) / den;
  out.d2I0 = (2.0 * dI2 - (6.0 + h) * dI0) / den;
  out.d2Istar = -2.0 * dI0 / (3.0 * h);
  return out;
}

// Slope of I0 at the center value: I0'(-4) = -pi/sqrt(3).  The closed form
// agrees with the quadrature limit to twelve digits.
inline double a0_center_slope() { return -M_PI / std::sqrt(3.0); }

// Convergent expansions at the center value, s = h + 4:
//   I*  = a0 ( s^2/12 + 11 s^3/1296 + 109 s^4/93312 + 9389 s^5/50388480 + ... )
//   I2  = a0 ( s + s^2/9 + 17 s^3/1944 + 455 s^4/419904 + 1225 s^5/7558272 + ...)
//   I0  = a0 ( s + s^2/36 + 5 s^3/1944 + 35 s^4/104976 + 385 s^5/7558272 + ... )
// The quintic terms extend the classical quartic truncation; all eight lower
// coefficients match it, and the remainder after the quintic scales like s^6.
namespace series {

inline constexpr std::array<double, 6> kIstar = {0.0, 0.0, 1.0 / 12, 11.0 / 1296, 109.0 / 93312,
                                                 9389.0 / 50388480};
inline constexpr std::array<double, 6> kI2 = {0.0, 1.0, 1.0 / 9, 17.0 / 1944, 455.0 / 419904,
                                              1225.0 / 7558272};
inline constexpr std::array<double, 6> kI0 = {0.0, 1.0, 1.0 / 36, 5.0 / 1944, 35.0 / 104976,
                                              385.0 / 7558272};

inline double eval(const std::array<double, 6>& c, double s) {
  double acc = 0.0;
  for (int k = 5; k >= 0; --k) acc = acc * s + c[k];
  return acc;
}

inline double eval_derivative(const std::array<double, 6>& c, double s) {
  double acc = 0.0;
  for (int k = 5; k >= 1; --k) acc = acc * s + k * c[k];
  return acc;
}

}  // namespace series

// Frame (values and h-derivatives) from the center expansion at h = -4 + s.
inline AbelianFrame series_frame(double s) {
  if (!(s > 0.0)) throw std::domain_error("series_frame: s must be positive");
  const double a0 = a0_center_slope();
  AbelianFrame F;
  F.I0 = a0 * series::eval(series::kI0, s);
  F.I2 = a0 * series::eval(series::kI2, s);
  F.Istar = a0 * series::eval(series::kIstar, s);
  F.dI0 = a0 * series::eval_derivative(series::kI0, s);
  F.dI2 = a0 * series::eval_derivative(series::kI2, s);
  F.dIstar = a0 * series::eval_derivative(series::kIstar, s);
  return F;
}

// ---------------------------------------------------------------------------
// Dense flow of the frame across the annulus.  The state (I*, I2, I0) obeys
// u' = M(h)^{-1} u; seeding happens just off the center value where the
// expansion is far below the integration tolerance, and queries inside the
// seed gap fall back to the expansion itself.

class PfSolution {
 public:
  struct Config {
    double seed_offset = 1e-3;   // start the flow at h = -4 + seed_offset
    double h_stop = -1e-6;       // right end of the dense span
    double rtol = 1e-12;
    double atol = 1e-14;
  };

  PfSolution() : PfSolution(Config{}) {}

  explicit PfSolution(Config cfg) : cfg_(cfg) {
    using I3 = Dopri5<3>;
    I3::Rhs rhs = [](double h, const I3::State& u, I3::State& du) {
      auto d = pf_derivatives(h, u[0], u[1], u[2]);
      du = {d[0], d[1], d[2]};
    };
    AbelianFrame s = series_frame(cfg_.seed_offset);
    I3::Options opt;
    opt.rtol = cfg_.rtol;
    opt.atol = cfg_.atol;
    sol_ = I3::integrate(rhs, -4.0 + cfg_.seed_offset, cfg_.h_stop, {s.Istar, s.I2, s.I0}, opt);
  }

  double h_min() const { return -4.0; }
  double h_max() const { return cfg_.h_stop; }

  AbelianFrame frame(double h) const {
    if (!(h > -4.0 && h <= cfg_.h_stop)) {
      throw std::domain_error("PfSolution::frame: level outside the cached span");
    }
    if (h <= -4.0 + cfg_.seed_offset) return series_frame(h + 4.0);
    auto u = sol_(h);
    auto d = pf_derivatives(h, u[0], u[1], u[2]);
    return {u[2], u[1], u[0], d[2], d[1], d[0]};
  }

 private:
  Config cfg_;
  Dopri5<3>::Solution sol_;
};

inline const PfSolution& pf_cache() {
  static const PfSolution sol;
  return sol;
}

// ---------------------------------------------------------------------------
// Truncated Taylor arithmetic (jets) and the derivative tower of the frame.
// c[j] holds the j-th Taylor coefficient, i.e. f^{(j)}(h0)/j!.

template <int K>
struct Jet {
  std::array<double, K> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double h0) {
    Jet j;
    j.c[0] = h0;
    if constexpr (K > 1) j.c[1] = 1.0;
    return j;
  }

  Jet operator+(const Jet& o) const {
    Jet r;
    for (int i = 0; i < K; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r;
    for (int i = 0; i < K; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r;
    for (int i = 0; i < K; ++i) {
      double acc = 0.0;
      for (int j = 0; j <= i; ++j) acc += c[j] * o.c[i - j];
      r.c[i] = acc;
    }
    return r;
  }
  Jet operator/(const Jet& o) const {
    Jet r;
    for (int i = 0; i < K; ++i) {
      double acc = c[i];
      for (int j = 0; j < i; ++j) acc -= r.c[j] * o.c[i - j];
      r.c[i] = acc / o.c[0];
    }
    return r;
  }
  Jet operator*(double s) const {
    Jet r;
    for (int i = 0; i < K; ++i) r.c[i] = c[i] * s;
    return r;
  }
  Jet operator+(double s) const {
    Jet r = *this;
    r.c[0] += s;
    return r;
  }
  Jet operator-(double s) const {
    Jet r = *this;
    r.c[0] -= s;
    return r;
  }

  // n-th derivative value at the expansion point
  double derivative(int n) const {
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return c[n] * fact;
  }
};

template <int K>
struct FrameJets {
  Jet<K> I0, I2, Istar, dI0, dI2, dIstar;
};

// Jets of the frame at h0, seeded from frame values there.  The pair
// (I2', I0') propagates through its own closed first-order system; I*'
// integrates -2 I0' / (3h); the undifferentiated moments integrate their
// derivatives.  Valid away from h0 = 0 and h0 = -4.
template <int K>
FrameJets<K> frame_jets(double h0, const AbelianFrame& F) {
  using J = Jet<K>;
  J h = J::variable(h0);
  J den = (h * (h + 4.0)) * 3.0;
  // entries of the 2x2 coefficient matrix over the common denominator
  J L11 = (h + 6.0) / den;
  J L12 = ((h * 2.0) + 9.0) * (-2.0) / den;
  J L21 = J::constant(2.0) / den;
  J L22 = ((h + 6.0) * (-1.0)) / den;

  J u1{}, u2{};  // I2', I0'
  u1.c[0] = F.dI2;
  u2.c[0] = F.dI0;
  for (int n = 0; n + 1 < K; ++n) {
    double acc1 = 0.0, acc2 = 0.0;
    for (int j = 0; j <= n; ++j) {
      acc1 += L11.c[j] * u1.c[n - j] + L12.c[j] * u2.c[n - j];
      acc2 += L21.c[j] * u1.c[n - j] + L22.c[j] * u2.c[n - j];
    }
    u1.c[n + 1] = acc1 / (n + 1);
    u2.c[n + 1] = acc2 / (n + 1);
  }

  J v{};  // I*'
  v.c[0] = F.dIstar;
  J w = (u2 * (-2.0)) / (h * 3.0);
  for (int n = 0; n + 1 < K; ++n) v.c[n + 1] = w.c[n] / (n + 1);

  FrameJets<K> out;
  out.dI2 = u1;
  out.dI0 = u2;
  out.dIstar = v;
  out.I2.c[0] = F.I2;
  out.I0.c[0] = F.I0;
  out.Istar.c[0] = F.Istar;
  for (int n = 0; n + 1 < K; ++n) {
    out.I2.c[n + 1] = u1.c[n] / (n + 1);
    out.I0.c[n + 1] = u2.c[n] / (n + 1);
    out.Istar.c[n + 1] = v.c[n] / (n + 1);
  }
  return out;
}

}  // namespace hamtri
