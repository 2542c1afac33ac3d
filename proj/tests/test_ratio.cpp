#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamtri/ratio.hpp"

using namespace hamtri;

TEST_CASE("center Taylor coefficients reproduce the classical truncation") {
  const auto& j = w_center_jet();
  CHECK(j.c[0] == Catch::Approx(1.0).margin(1e-15));
  CHECK(j.c[1] == Catch::Approx(1.0 / 6.0).margin(1e-15));
  CHECK(j.c[2] == Catch::Approx(1.0 / 108.0).margin(1e-15));
  CHECK(j.c[3] == Catch::Approx(7.0 / 5832.0).margin(1e-15));
}

TEST_CASE("cached solution matches the direct quadrature ratio") {
  CHECK(w_riccati(-2.0) == Catch::Approx(1.3849801321801664).epsilon(1e-9));
  for (double h : {-3.5, -1.0, -0.3}) {
    INFO("h=" << h);
    CHECK(w_riccati(h) == Catch::Approx(w_direct(h)).epsilon(1e-9));
  }
}

TEST_CASE("boundary behavior at both ends") {
  CHECK(std::abs(w_riccati(-4.0 + 1e-6) - 1.0) <= 2e-7);
  // quadrature truth in the far tail against the calibrated logarithmic law
  CHECK(std::abs(w_direct(-1e-6, 1e-12) - w_asymptote_calibrated(-1e-6)) <= 1e-2);
  // the uncalibrated law differs by O(1/ln^2), about 0.11 at this level
  CHECK(std::abs(w_asymptote(-1e-6) - w_asymptote_calibrated(-1e-6)) < 0.2);
  // seam between the dense solution and the asymptote branch
  CHECK(std::abs(w_riccati(-1.0000001e-4) - w_riccati(-0.9999999e-4)) <= 1e-4);
}

TEST_CASE("gap to the logarithmic asymptote shrinks toward zero") {
  double prev = 1e300;
  for (double h : {-0.01, -0.003, -0.001, -0.0003, -1.01e-4}) {
    double gap = std::abs(w_riccati(h) - w_asymptote(h));
    INFO("h=" << h);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("derivative limits at the center value") {
  auto d = w_derivs(-4.0);
  CHECK(d.w == Catch::Approx(1.0).margin(1e-12));
  CHECK(d.w1 == Catch::Approx(1.0 / 6.0).margin(1e-12));
  CHECK(d.w2 == Catch::Approx(1.0 / 54.0).margin(1e-4));
  CHECK(d.w3 == Catch::Approx(7.0 / 972.0).margin(1e-4));
}

TEST_CASE("closed-form derivatives match finite differences") {
  for (double h : {-3.0, -2.0, -1.0}) {
    auto d = w_derivs(h);
    double fd1 = (w_riccati(h + 1e-5) - w_riccati(h - 1e-5)) / 2e-5;
    double fd2 = (w_riccati(h + 1e-4) - 2.0 * w_riccati(h) + w_riccati(h - 1e-4)) / 1e-8;
    double fd3 = (w_derivs(h + 1e-5).w2 - w_derivs(h - 1e-5).w2) / 2e-5;
    INFO("h=" << h);
    CHECK(d.w1 == Catch::Approx(fd1).epsilon(1e-6));
    CHECK(d.w2 == Catch::Approx(fd2).epsilon(1e-4));
    CHECK(d.w3 == Catch::Approx(fd3).epsilon(1e-4));
  }
}

TEST_CASE("slope equation residual is small across the annulus") {
  for (double h : {-3.9, -3.0, -2.0, -1.0, -0.5, -0.01}) {
    INFO("h=" << h);
    CHECK(riccati_residual(h) <= 1e-8);
  }
}

TEST_CASE("solution stays inside the chord envelope on a 500-point grid") {
  auto rep = envelope_check(500);
  CHECK(rep.violations == 0);
  CHECK(rep.min_lower_gap >= 0.0);
  CHECK(rep.min_upper_gap >= 0.0);
}

TEST_CASE("midpoint value sits inside its bracketing interval") {
  double w = w_riccati(-2.0);
  CHECK(w > 4.0 / 3.0);
  CHECK(w < 2.0);
}

TEST_CASE("algebraic branch bounds the solution from above") {
  for (double h : {-3.9, -3.0, -2.0, -1.0, -0.5}) {
    INFO("h=" << h);
    CHECK(w_riccati(h) < w_tilde(h));
  }
  // near the center value the gap closes quadratically with ratio -5/162
  for (double s : {0.1, 0.05}) {
    double h = -4.0 + s;
    double ratio = (w_riccati(h) - w_tilde(h)) / (s * s);
    CHECK(ratio == Catch::Approx(-5.0 / 162.0).epsilon(0.05));
  }
}

TEST_CASE("monotone increase from 1 toward 3") {
  double prev = 1.0;
  for (double h = -3.95; h < -0.05; h += 0.13) {
    double w = w_riccati(h);
    CHECK(w > prev);
    prev = w;
  }
  CHECK(prev < 3.0);
}

TEST_CASE("levels outside the annulus are rejected") {
  CHECK_THROWS_AS(w_riccati(-4.5), std::domain_error);
  CHECK_THROWS_AS(w_riccati(0.0), std::domain_error);
  CHECK_THROWS_AS(w_derivs(-4.1), std::domain_error);
}
