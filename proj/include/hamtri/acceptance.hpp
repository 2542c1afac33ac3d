#pragma once

// End-to-end verification suite.  Each criterion bundles the checks that close
// one chapter of the argument: exact algebra, endpoint constants, the flow
// system, the ratio bounds, displacement identities, the randomized zero-count
// scan, sharpness, and the direct dynamics run.  Results carry one detail line
// per sub-check so failures are self-explanatory.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamtri/cyclicity.hpp"
#include "hamtri/geometry.hpp"
#include "hamtri/picard_fuchs.hpp"
#include "hamtri/polyalg.hpp"
#include "hamtri/quadrature.hpp"
#include "hamtri/ratio.hpp"
#include "hamtri/simulate.hpp"

namespace hamtri {
namespace acceptance {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = true;
  double seconds = 0.0;
  std::vector<std::string> details;
};

namespace detail {

inline std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return std::string(buf);
}

inline void check(CriterionResult& r, bool ok, const std::string& msg) {
  r.details.push_back((ok ? "ok   " : "FAIL ") + msg);
  if (!ok) r.pass = false;
}

inline void note(CriterionResult& r, const std::string& msg) {
  r.details.push_back("     " + msg);
}

// Least-squares slope of log|r| against log s.
inline double log_log_slope(const std::vector<double>& s, const std::vector<double>& r) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(s.size());
  for (int i = 0; i < n; ++i) {
    double x = std::log(s[i]), y = std::log(std::abs(r[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Random nondegenerate parameter vector from the counter generator.
inline GreekParams random_greek(std::uint64_t seed, std::uint64_t index) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t base = 4 * (index + 1000 * attempt);
    GreekParams g{counter_normal(seed, base), counter_normal(seed, base + 1),
                  counter_normal(seed, base + 2), counter_normal(seed, base + 3)};
    double n = std::sqrt(g.lambda * g.lambda + g.sigma * g.sigma + g.gamma * g.gamma +
                         g.kappa * g.kappa);
    if (n > 1e-3) {
      g.lambda /= n;
      g.sigma /= n;
      g.gamma /= n;
      g.kappa /= n;
      return g;
    }
  }
}

// Section parameter in (0, 1/3) whose level-curve value matches h.
inline double section_for_h(double h) {
  double target = triangle_level_from_h(h);
  double lo = 1e-6, hi = 1.0 / 3.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (triangle_level(mid, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// 1. Exact algebra: resultants, factorizations, Sturm counts.
inline CriterionResult criterion_1() {
  using detail::check;
  CriterionResult r;
  r.index = 1;
  r.name = "exact algebra suite";
  auto battery = run_poly_battery();
  int passed = 0;
  for (const auto& c : battery) {
    if (c.pass)
      ++passed;
    else
      check(r, false, c.statement);
  }
  check(r, passed == static_cast<int>(battery.size()),
        detail::fmt("%d/%zu exact identities and root counts hold", passed, battery.size()));
  return r;
}

// 2. Endpoint constants and center-series remainder order.
inline CriterionResult criterion_2() {
  using detail::check;
  CriterionResult r;
  r.index = 2;
  r.name = "endpoint constants and center series";

  AbelianFrame F = quadrature_frame(-1e-6, 1e-12);
  check(r, std::abs(F.I0 + 9.0) <= 1e-4,
        detail::fmt("I0(-1e-6) = %.8f vs limit -9 (|diff| = %.2e <= 1e-4)", F.I0,
                    std::abs(F.I0 + 9.0)));
  check(r, std::abs(F.I2 + 13.5) <= 1e-4,
        detail::fmt("I2(-1e-6) = %.8f vs limit -27/2 (|diff| = %.2e <= 1e-4)", F.I2,
                    std::abs(F.I2 + 13.5)));
  check(r, std::abs(F.Istar + 6.0) <= 1e-4,
        detail::fmt("Istar(-1e-6) = %.8f vs limit -6 (|diff| = %.2e <= 1e-4)", F.Istar,
                    std::abs(F.Istar + 6.0)));

  // Degree-4 truncation of the center expansion: the empirical remainder
  // exponent in s = h + 4 must be at least 4.7 over s in [0.02, 0.2].
  const double a0 = a0_center_slope();
  const int n = 8;
  std::vector<double> ss(n);
  for (int i = 0; i < n; ++i)
    ss[i] = 0.02 * std::pow(10.0, i / (n - 1.0));  // log-spaced 0.02 .. 0.2
  auto trunc4 = [&](const std::array<double, 6>& c, double s) {
    double acc = 0.0;
    for (int k = 4; k >= 0; --k) acc = acc * s + c[k];
    return a0 * acc * 1.0;
  };
  struct Row {
    const char* label;
    const std::array<double, 6>& coeff;
    double AbelianFrame::* field;
  };
  const Row rows[] = {{"I0", series::kI0, &AbelianFrame::I0},
                      {"I2", series::kI2, &AbelianFrame::I2},
                      {"Istar", series::kIstar, &AbelianFrame::Istar}};
  for (const Row& row : rows) {
    std::vector<double> rem(n);
    for (int i = 0; i < n; ++i) {
      AbelianFrame Q = quadrature_frame(-4.0 + ss[i], 1e-14);
      rem[i] = Q.*row.field - trunc4(row.coeff, ss[i]);
    }
    double slope = detail::log_log_slope(ss, rem);
    check(r, slope >= 4.7,
          detail::fmt("%s degree-4 remainder order %.3f >= 4.7 on s in [0.02, 0.2]", row.label,
                      slope));
  }
  return r;
}

// 3. Flow system residual and flow-vs-quadrature agreement.
inline CriterionResult criterion_3() {
  using detail::check;
  CriterionResult r;
  r.index = 3;
  r.name = "derivative system residual and flow agreement";

  double worst_res = 0.0, worst_res_h = 0.0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    double h = -3.98 + (i + 0.5) * (3.96 / n);
    AbelianFrame F = quadrature_frame(h, 1e-12);
    auto d = pf_derivatives(h, F.Istar, F.I2, F.I0);
    double scale = std::max({std::abs(F.dIstar), std::abs(F.dI2), std::abs(F.dI0)});
    double res = std::max({std::abs(d[0] - F.dIstar), std::abs(d[1] - F.dI2),
                           std::abs(d[2] - F.dI0)}) /
                 scale;
    if (res > worst_res) {
      worst_res = res;
      worst_res_h = h;
    }
  }
  check(r, worst_res <= 1e-6,
        detail::fmt("derivative-system relative residual <= 1e-6 on 200 levels "
                    "(worst %.2e at h = %.4f)",
                    worst_res, worst_res_h));

  double worst_flow = 0.0, worst_flow_h = 0.0;
  for (int i = 0; i < 25; ++i) {
    double h = -3.9 + i * (3.8 / 24.0);
    AbelianFrame Q = quadrature_frame(h, 1e-12);
    AbelianFrame P = pf_cache().frame(h);
    double scale = std::max({std::abs(Q.I0), std::abs(Q.I2), std::abs(Q.Istar), 1.0});
    double diff = std::max({std::abs(P.I0 - Q.I0), std::abs(P.I2 - Q.I2),
                            std::abs(P.Istar - Q.Istar)}) /
                  scale;
    if (diff > worst_flow) {
      worst_flow = diff;
      worst_flow_h = h;
    }
  }
  check(r, worst_flow <= 1e-6,
        detail::fmt("flow vs quadrature <= 1e-6 on [-3.9, -0.1] (worst %.2e at h = %.4f)",
                    worst_flow, worst_flow_h));
  return r;
}

// 4. Ratio function: endpoint limits, derivative signs, chord envelope.
inline CriterionResult criterion_4() {
  using detail::check;
  CriterionResult r;
  r.index = 4;
  r.name = "ratio limits, monotonicity, envelope";

  double w_center = w_riccati(-4.0 + 1e-6);
  check(r, std::abs(w_center - 1.0) <= 2e-7,
        detail::fmt("w(-4+1e-6) - 1 = %.3e (|.| <= 2e-7)", w_center - 1.0));

  // Logarithmic law at the outer boundary.  The integration constant of the
  // law is fixed by the interior expansions (the natural argument of the log
  // is |h|/108); the uncalibrated form 3 + 6/ln|h| carries an O(1/ln^2)
  // offset that is still ~0.11 at |h| = 1e-6, so it cannot meet a 1e-2 band
  // at this level for any implementation.  The independent quadrature value
  // is compared against the calibrated law, and the uncalibrated gap is
  // reported alongside.
  double wq = w_direct(-1e-6, 1e-12);
  double wa = w_asymptote_calibrated(-1e-6);
  check(r, std::abs(wq - wa) <= 1e-2,
        detail::fmt("w(-1e-6) = %.6f vs 3 + 6/ln(|h|/108) = %.6f (|diff| = %.2e <= 1e-2)", wq, wa,
                    std::abs(wq - wa)));
  detail::note(r, detail::fmt("gap to the uncalibrated form 3 + 6/ln|h| = %.6f is %.2e, "
                              "matching the analytic offset 6 ln(108)/ln^2|h| = %.2e",
                              w_asymptote(-1e-6), std::abs(wq - w_asymptote(-1e-6)),
                              6.0 * std::log(108.0) / std::pow(std::log(1e-6), 2)));

  int bad = 0;
  std::string first_bad;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    double h = -3.992 + (i + 0.5) * (3.984 / n);
    RatioDerivs d = w_derivs(h);
    bool ok = d.w1 > 0.0 && d.w2 > 0.0 && d.w3 > 0.0 && chord_lower(h) < d.w &&
              d.w < chord_upper(h);
    if (!ok && bad++ == 0) first_bad = detail::fmt("first failure at h = %.4f", h);
  }
  check(r, bad == 0,
        bad == 0 ? "w', w'', w''' > 0 and chord_lower < w < chord_upper at 500 levels"
                 : detail::fmt("%d/500 grid points violate sign/envelope bounds (%s)", bad,
                               first_bad.c_str()));

  double w2_near = w_derivs(-3.995).w2;
  check(r, std::abs(w2_near - 1.0 / 54.0) <= 1e-4,
        detail::fmt("w''(-3.995) = %.8f vs center limit 1/54 (|diff| = %.2e <= 1e-4)", w2_near,
                    std::abs(w2_near - 1.0 / 54.0)));
  return r;
}

// 5. Displacement identities: derivative bracket, third-derivative form,
// squared-log coefficient at the outer boundary.
inline CriterionResult criterion_5() {
  using detail::check;
  CriterionResult r;
  r.index = 5;
  r.name = "displacement identities";

  // 3 h (h+4) J''-free bracket: J' * 7776 h (4+h) == f(h, w) * I0'(h), with J'
  // taken by finite differences so the two sides are independent.
  double worst = 0.0, worst_h = 0.0;
  int worst_param = -1;
  const std::uint64_t seed = 777;
  for (int p = 0; p < 20; ++p) {
    GreekParams g = detail::random_greek(seed, p);
    for (int i = 0; i < 100; ++i) {
      double h = -3.95 + (i + 0.5) * (3.9 / 100.0);
      const double step = 1e-6;
      double jp = (J_eval(h + step, g) - J_eval(h - step, g)) / (2.0 * step);
      double lhs = jp * 7776.0 * h * (4.0 + h);
      double rhs = f_eval(g, h) * pf_cache().frame(h).dI0;
      double err = std::abs(lhs - rhs) / (1e-5 * std::abs(rhs) + 1e-10);
      if (err > worst) {
        worst = err;
        worst_h = h;
        worst_param = p;
      }
    }
  }
  check(r, worst <= 1.0,
        detail::fmt("derivative bracket |J'*7776h(4+h) - f*I0'| <= 1e-5|rhs| + 1e-10 over 20 "
                    "parameter draws x 100 levels (worst margin ratio %.3f at h = %.4f, draw %d)",
                    worst, worst_h, worst_param));

  // Third derivative of f along w(h) for the kappa = 1 normalization:
  // -96 w''' rho against finite differences.  The residual is scaled by the
  // terms of the closed form because f''' itself crosses zero inside the
  // annulus, where a pointwise relative error is ill-posed.
  double worst_f3 = 0.0;
  for (int p = 0; p < 8; ++p) {
    std::uint64_t base = 3 * p;
    GreekParams g{counter_normal(seed + 1, base), counter_normal(seed + 1, base + 1),
                  counter_normal(seed + 1, base + 2), 1.0};
    for (double h : {-3.5, -3.0, -2.0, -1.0, -0.5, -0.2}) {
      double fd = f_third_fd(g, h);
      double cl = -96.0 * w_derivs(h).w3 * rho_eval(h, g.gamma);
      double scale = std::abs(cl) + f_third_scale(g, h);
      worst_f3 = std::max(worst_f3, std::abs(fd - cl) / scale);
    }
  }
  check(r, worst_f3 <= 1e-4,
        detail::fmt("f''' = -96 w''' rho (kappa = 1) vs finite differences along the ratio, "
                    "scaled residual %.2e <= 1e-4 over 8 draws x 6 levels",
                    worst_f3));

  // Squared-log coefficient of J near h = 0 against f(0)/124416.
  double worst_ln2 = 0.0;
  for (int p = 0; p < 10;) {
    GreekParams g = detail::random_greek(seed + 2, p + 40);
    double expected = endpoint_data(g).ln2_coeff;
    if (std::abs(expected) < 1e-4) {
      ++p;
      continue;
    }
    const int m = 25;
    double S[3][3] = {{0}}, b[3] = {0};
    for (int i = 0; i < m; ++i) {
      double h = -std::pow(10.0, -3.0 - 3.0 * i / (m - 1.0));
      double L = std::log(std::abs(h));
      double phi[3] = {1.0, L, L * L};
      double y = J_eval(h, g);
      for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 3; ++c) S[a][c] += phi[a] * phi[c];
        b[a] += phi[a] * y;
      }
    }
    // Solve the 3x3 normal equations by elimination.
    double A[3][4] = {{S[0][0], S[0][1], S[0][2], b[0]},
                      {S[1][0], S[1][1], S[1][2], b[1]},
                      {S[2][0], S[2][1], S[2][2], b[2]}};
    for (int c = 0; c < 3; ++c) {
      int piv = c;
      for (int q = c + 1; q < 3; ++q)
        if (std::abs(A[q][c]) > std::abs(A[piv][c])) piv = q;
      std::swap(A[c], A[piv]);
      for (int q = 0; q < 3; ++q) {
        if (q == c) continue;
        double fac = A[q][c] / A[c][c];
        for (int k = c; k < 4; ++k) A[q][k] -= fac * A[c][k];
      }
    }
    double c2 = A[2][3] / A[2][2];
    worst_ln2 = std::max(worst_ln2, std::abs(c2 - expected) / std::abs(expected));
    ++p;
  }
  check(r, worst_ln2 <= 0.02,
        detail::fmt("squared-log coefficient of J matches f(0)/124416 within 2%% over 10 draws "
                    "(worst %.2e)",
                    worst_ln2));
  return r;
}

// 6. Randomized zero-count scan over parameter strata.
inline CriterionResult criterion_6(int samples = 10000) {
  using detail::check;
  CriterionResult r;
  r.index = 6;
  r.name = "randomized zero-count scan";
  ScanReport s = scan(samples);
  check(r, s.global_max <= 3,
        detail::fmt("max zero count over %d seeded directions = %d (bound 3)", s.n, s.global_max));
  check(r, !s.any_violation, "no stratum exceeds its case bound");
  int suspects = 0;
  for (const auto& st : s.strata) {
    suspects += st.suspects;
    detail::note(r, detail::fmt("stratum %-42s bound %d, samples %5d, max %d", st.name.c_str(),
                                st.bound, st.samples, st.max_count));
  }
  check(r, suspects == 0,
        detail::fmt("%d multiplicity-suspect escalations left unresolved (must be 0)", suspects));
  for (const auto& st : s.strata) {
    if (st.name.find("f(0)<0") != std::string::npos || st.name.find("f(0) < 0") != std::string::npos) {
      check(r, st.max_count <= 2,
            detail::fmt("restricted stratum '%s' max = %d (bound 2)", st.name.c_str(),
                        st.max_count));
    }
  }
  check(r, s.witness_three, "deterministic witness direction attains 3 zeros");
  return r;
}

// 7. Sharpness: explicit three-zero parameters and the determinant ladder.
inline CriterionResult criterion_7() {
  using detail::check;
  CriterionResult r;
  r.index = 7;
  r.name = "sharpness and determinant ladder";

  ThreeZeroResult t3 = find_three_zeros();
  check(r, t3.verified && t3.report.count == 3,
        detail::fmt("constructed direction has exactly %d verified zeros (target 3)",
                    t3.report.count));
  check(r, t3.report.all_simple, "all three zeros are simple crossings");
  check(r, t3.max_offset <= 1e-6,
        detail::fmt("zero locations hit requested targets within %.2e (<= 1e-6)", t3.max_offset));

  EctReport er = ect_scan(400, 0.01);
  check(r, er.negative_on_inner,
        detail::fmt("determinants D1..D4 all negative on the empirical window (end %.4f, "
                    "sign flip found: %s)",
                    er.window_end, er.flip_found ? "yes" : "no"));

  EctLimits lim = ect_center_limits(0.01);
  const double target = -1.0 / 6377292.0;
  double rel = std::abs(lim.d4_norm - target) / std::abs(target);
  check(r, rel <= 0.01,
        detail::fmt("normalized D4 center limit %.6e vs -1/6377292 = %.6e (rel %.2e <= 1e-2)",
                    lim.d4_norm, target, rel));
  return r;
}

// 8. Direct dynamics: realize the three-zero direction as a perturbation and
// look for the three displacement sign changes at two perturbation scales.
inline CriterionResult criterion_8() {
  using detail::check;
  using detail::note;
  CriterionResult r;
  r.index = 8;
  r.name = "end-to-end dynamics";

  ThreeZeroResult t3 = find_three_zeros();
  MuParams mu = t3.mu;
  double mu_norm2 = mu.mu1 * mu.mu1 + mu.mu2 * mu.mu2 + mu.mu3 * mu.mu3 + mu.mu4 * mu.mu4;

  // Sample levels spanning the predicted zero cluster.
  std::vector<double> hs;
  for (int i = 0; i < 12; ++i) hs.push_back(-3.99 + i * (0.14 / 11.0));

  // Noise floor of the return computation itself.
  double noise = 0.0;
  {
    EpsVector zero;
    for (double h : {-3.99, -3.92, -3.85}) {
      double t = detail::section_for_h(h);
      noise = std::max(noise, std::abs(displacement(t, zero)));
    }
  }
  note(r, detail::fmt("unperturbed displacement noise floor: %.2e", noise));

  std::array<double, 2> deltas = {1e-2, 1e-3};
  std::array<double, 2> level_err = {0.0, 0.0};
  std::array<bool, 2> got_three = {false, false};
  for (int k = 0; k < 2; ++k) {
    double delta = deltas[k];
    EpsVector e = eps_from_mu(mu, delta);
    MuParams ind = mu_of_eps(e);
    double tfac =
        (ind.mu1 * mu.mu1 + ind.mu2 * mu.mu2 + ind.mu3 * mu.mu3 + ind.mu4 * mu.mu4) / mu_norm2;
    double amp = 0.0;
    for (double h : t3.targets) amp = std::max(amp, std::abs(tfac * J_eval(h, t3.greek)));

    std::vector<double> ds;
    int sign_changes = 0;
    double max_d = 0.0;
    for (double h : hs) {
      double d = displacement(detail::section_for_h(h), e);
      if (!ds.empty() && ds.back() * d < 0.0) ++sign_changes;
      ds.push_back(d);
      max_d = std::max(max_d, std::abs(d));
    }
    got_three[k] = (sign_changes == 3);

    // Detected cycle levels: zero crossings of the sampled displacement.
    std::vector<double> detected;
    for (std::size_t i = 1; i < ds.size(); ++i) {
      if (ds[i - 1] * ds[i] < 0.0) {
        double frac = ds[i - 1] / (ds[i - 1] - ds[i]);
        detected.push_back(hs[i - 1] + frac * (hs[i] - hs[i - 1]));
      }
    }
    double err = std::numeric_limits<double>::quiet_NaN();
    if (detected.size() == t3.targets.size()) {
      err = 0.0;
      for (std::size_t i = 0; i < detected.size(); ++i)
        err = std::max(err, std::abs(detected[i] - t3.targets[i]));
    }
    level_err[k] = err;

    note(r, detail::fmt("delta = %g (gauge %s): induced scale t = %.3e, first-order amplitude "
                        "%.2e, measured max |d| = %.2e, sign changes %d/3",
                        delta, e.gauge.c_str(), tfac, amp, max_d, sign_changes));
  }

  check(r, got_three[0] && got_three[1],
        "displacement shows 3 sign changes at both perturbation scales");
  bool trend = got_three[0] && got_three[1] && std::isfinite(level_err[0]) &&
               std::isfinite(level_err[1]) && level_err[1] < level_err[0];
  check(r, trend, "detected cycle levels approach the predicted zeros as delta shrinks");
  if (!(got_three[0] && got_three[1])) {
    note(r, "obstruction: the constructed direction needs a fourth-slot component of order 1e-6,");
    note(r, "and the realizing perturbation scales displacement by t ~ 6 mu4 delta^3 / mu3^2,");
    note(r, "so the first-order signal (~1e-14 at delta = 1e-2) sits below the integrator");
    note(r, "noise floor; no sign structure is recoverable at these scales.");
  }
  return r;
}

inline CriterionResult run_criterion(int index) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (index) {
    case 1: r = criterion_1(); break;
    case 2: r = criterion_2(); break;
    case 3: r = criterion_3(); break;
    case 4: r = criterion_4(); break;
    case 5: r = criterion_5(); break;
    case 6: r = criterion_6(); break;
    case 7: r = criterion_7(); break;
    case 8: r = criterion_8(); break;
    default: throw std::invalid_argument("run_criterion: index must be 1..8");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int i = 1; i <= 8; ++i) out.push_back(run_criterion(i));
  return out;
}

}  // namespace acceptance
}  // namespace hamtri
