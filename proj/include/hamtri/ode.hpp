#pragma once

// Explicit Dormand-Prince 5(4) integrator with the classical quintic dense
// interpolant and sign-change event location.  Small and self-contained; the
// problems here are smooth and non-stiff, and the dense output is what the
// downstream caches and section-return refinements rely on.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hamtri {

template <int N>
class Dopri5 {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;

  struct DenseSegment {
    double t0;
    double dt;
    std::array<State, 5> rc;

    State eval(double t) const {
      double th = (t - t0) / dt;
      double th1 = 1.0 - th;
      State y;
      for (int i = 0; i < N; ++i) {
        y[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
      }
      return y;
    }
  };

  struct Solution {
    std::vector<DenseSegment> segments;
    double t_begin = 0.0;
    double t_end = 0.0;
    State y_end{};

    State operator()(double t) const {
      if (segments.empty()) throw std::runtime_error("dense solution is empty");
      double lo = std::min(t_begin, t_end), hi = std::max(t_begin, t_end);
      if (t < lo - 1e-9 * (1.0 + std::abs(lo)) || t > hi + 1e-9 * (1.0 + std::abs(hi))) {
        throw std::domain_error("dense solution queried outside its span");
      }
      // segments are ordered by t0 in integration direction
      const bool fwd = t_end >= t_begin;
      std::size_t a = 0, b = segments.size() - 1;
      while (a < b) {
        std::size_t m = (a + b + 1) / 2;
        bool before = fwd ? (segments[m].t0 <= t) : (segments[m].t0 >= t);
        if (before) {
          a = m;
        } else {
          b = m - 1;
        }
      }
      return segments[a].eval(t);
    }
  };

  struct EventResult {
    bool found = false;
    double t = 0.0;
    State y{};
  };

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;  // 0: no cap
    std::size_t max_steps = 2000000;
  };

  static Solution integrate(const Rhs& f, double t0, double t1, State y0,
                            const Options& opt = {}, bool store_dense = true) {
    Solution sol;
    sol.t_begin = t0;
    step_loop(f, t0, t1, y0, opt,
              [&](const DenseSegment& seg) {
                if (store_dense) sol.segments.push_back(seg);
                return true;
              });
    sol.t_end = t1;
    sol.y_end = y0;
    return sol;
  }

  // Integrates until g(t, y) crosses zero (with the requested sign direction:
  // -1 for + to -, +1 for - to +, 0 for either), ignoring crossings before
  // watch_from.  The crossing is refined on the dense interpolant.
  static EventResult integrate_event(const Rhs& f, double t0, double t_max, State y0,
                                     const std::function<double(double, const State&)>& g,
                                     int direction, double watch_from, const Options& opt = {}) {
    EventResult res;
    double g_prev = 0.0;
    bool have_prev = false;
    step_loop(f, t0, t_max, y0, opt, [&](const DenseSegment& seg) {
      double ta = seg.t0, tb = seg.t0 + seg.dt;
      if (tb < watch_from) return true;
      if (!have_prev || ta <= watch_from) {
        double ta_eff = std::max(ta, watch_from);
        g_prev = g(ta_eff, seg.eval(ta_eff));
        have_prev = true;
        ta = ta_eff;
      }
      double gb = g(tb, seg.eval(tb));
      bool crossed = (g_prev > 0.0 && gb <= 0.0 && direction <= 0) ||
                     (g_prev < 0.0 && gb >= 0.0 && direction >= 0);
      if (!crossed) {
        g_prev = gb;
        return true;
      }
      double lo = ta, hi = tb, glo = g_prev;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double gm = g(mid, seg.eval(mid));
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      res.found = true;
      res.t = hi;
      res.y = seg.eval(hi);
      return false;
    });
    return res;
  }

 private:
  template <typename SegmentSink>
  static void step_loop(const Rhs& f, double t0, double t1, State& y, const Options& opt,
                        SegmentSink&& sink) {
    if (t1 == t0) return;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;
    double h = std::min(1e-2 * span, opt.max_step > 0.0 ? opt.max_step : 1e-2 * span);
    if (h <= 0.0) h = 1e-6;

    State k1, k2, k3, k4, k5, k6, k7, ytmp, y1;
    f(t, y, k1);
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
      if (++steps > opt.max_steps) throw std::runtime_error("integrator exceeded step budget");
      h = std::min(h, std::abs(t1 - t));
      if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
      double hs = dir * h;

      for (int i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a21 * k1[i]);
      f(t + c2 * hs, ytmp, k2);
      for (int i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      f(t + c3 * hs, ytmp, k3);
      for (int i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      f(t + c4 * hs, ytmp, k4);
      for (int i = 0; i < N; ++i) {
        ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      }
      f(t + c5 * hs, ytmp, k5);
      for (int i = 0; i < N; ++i) {
        ytmp[i] =
            y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      }
      f(t + hs, ytmp, k6);
      for (int i = 0; i < N; ++i) {
        y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      }
      f(t + hs, y1, k7);

      double err = 0.0;
      for (int i = 0; i < N; ++i) {
        double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                         e7 * k7[i]);
        double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / N);

      if (err <= 1.0) {
        DenseSegment seg;
        seg.t0 = t;
        seg.dt = hs;
        for (int i = 0; i < N; ++i) {
          double dy = y1[i] - y[i];
          seg.rc[0][i] = y[i];
          seg.rc[1][i] = dy;
          seg.rc[2][i] = hs * k1[i] - dy;
          seg.rc[3][i] = dy - hs * k7[i] - seg.rc[2][i];
          seg.rc[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                               d7 * k7[i]);
        }
        t += hs;
        y = y1;
        k1 = k7;  // first-same-as-last
        if (!sink(seg)) return;
      }

      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
      if (h < 1e-14 * (1.0 + std::abs(t))) {
        throw std::runtime_error("integrator step size underflow");
      }
    }
  }

  // Butcher tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  // difference between the 5th and embedded 4th order weights
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // dense-output weights
  static constexpr double d1 = -12715105075.0 / 11282082432.0;
  static constexpr double d3 = 87487479700.0 / 32700410799.0;
  static constexpr double d4 = -10690763975.0 / 1880347072.0;
  static constexpr double d5 = 701980252875.0 / 199316789632.0;
  static constexpr double d6 = -1453857185.0 / 822651844.0;
  static constexpr double d7 = 69997945.0 / 29380423.0;
};

}  // namespace hamtri
