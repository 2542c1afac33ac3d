#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamtri/quadrature.hpp"

using namespace hamtri;

namespace {
// Frozen reference values at h = -2, produced by two independent quadrature
// routes (turning-point-aware substitution vs. endpoint-weighted rule) that
// agreed to better than 1e-12 before being pinned here.
constexpr double kI0 = -3.8806643388446858;
constexpr double kI2 = -4.6064189407070995;
constexpr double kIstar = -0.7785392843101087;
constexpr double kdI0 = -2.1032731579881814;
constexpr double kdI2 = -2.9129915363614675;
constexpr double kdIstar = -0.9042851374598409;
constexpr double kJ1 = -0.287456617692199;
constexpr double kJ2 = 0.252355634556658;
constexpr double kJ3 = 0.783259433277247;
constexpr double kJ31 = 0.0261925296072711;
constexpr double kJ4 = -0.0499210534248213;
}  // namespace

TEST_CASE("abelian frame reproduces the pinned values at h = -2") {
  auto F = quadrature_frame(-2.0);
  CHECK(F.I0 == Catch::Approx(kI0).epsilon(1e-10));
  CHECK(F.I2 == Catch::Approx(kI2).epsilon(1e-10));
  CHECK(F.Istar == Catch::Approx(kIstar).epsilon(1e-10));
  CHECK(F.dI0 == Catch::Approx(kdI0).epsilon(1e-10));
  CHECK(F.dI2 == Catch::Approx(kdI2).epsilon(1e-10));
  CHECK(F.dIstar == Catch::Approx(kdIstar).epsilon(1e-10));
}

TEST_CASE("first and zeroth moments coincide") {
  for (double h : {-3.5, -2.0, -0.7}) {
    double i0 = abelian_I(0, h), i1 = abelian_I(1, h);
    CHECK(std::abs(i1 - i0) <= 1e-12 * std::abs(i0));
  }
}

TEST_CASE("derivatives of the moments match a central difference") {
  const double h = -2.0, dh = 1e-5;
  for (int i : {0, 2}) {
    double fd = (abelian_I(i, h + dh) - abelian_I(i, h - dh)) / (2.0 * dh);
    CHECK(fd == Catch::Approx(abelian_dI(i, h)).epsilon(1e-7));
  }
  double fds = (abelian_Istar(h + dh) - abelian_Istar(h - dh)) / (2.0 * dh);
  CHECK(fds == Catch::Approx(abelian_dIstar(h)).epsilon(1e-7));
}

TEST_CASE("three-term power contraction holds for k = 1, 2, 3") {
  for (double h : {-3.0, -2.0, -1.0}) {
    for (int k : {1, 2, 3}) {
      INFO("h=" << h << " k=" << k);
      CHECK(power_recursion_residual(k, h) <= 1e-9);
    }
  }
}

TEST_CASE("cubic y-power reduction holds") {
  for (double h : {-3.0, -2.0, -1.0}) {
    INFO("h=" << h);
    CHECK(cubic_moment_residual(h) <= 1e-9);
  }
}

TEST_CASE("even y-powers integrate to zero by symmetry") {
  CHECK(moment_I(1, 2, -2.0) == 0.0);
  CHECK(moment_I(0, 0, -2.0) == 0.0);
}

TEST_CASE("triangle-chart integrals reproduce the pinned values at h = -2") {
  CHECK(original_J(1, -2.0) == Catch::Approx(kJ1).epsilon(1e-8));
  CHECK(original_J(2, -2.0) == Catch::Approx(kJ2).epsilon(1e-8));
  CHECK(original_J(3, -2.0) == Catch::Approx(kJ3).epsilon(1e-8));
  CHECK(original_J(4, -2.0) == Catch::Approx(kJ4).epsilon(1e-8));
}

TEST_CASE("line and area forms of J_1 agree") {
  for (double h : {-3.0, -1.0}) {
    CHECK(original_J(1, h) == Catch::Approx(original_J1_area(h)).epsilon(1e-9));
  }
}

TEST_CASE("triangle-chart values match the abelian-frame combinations") {
  for (double h : {-3.5, -2.0, -0.8}) {
    auto F = quadrature_frame(h);
    for (int k = 1; k <= 4; ++k) {
      INFO("h=" << h << " k=" << k);
      CHECK(original_J(k, h) == Catch::Approx(j_combination(k, h, F)).epsilon(1e-8));
    }
  }
}

TEST_CASE("both compact forms of the J_4 combination agree") {
  for (double h : {-3.0, -2.0, -0.5}) {
    auto F = quadrature_frame(h);
    CHECK(j4_compact(h, F) == Catch::Approx(j_combination(4, h, F)).epsilon(1e-9));
  }
}

TEST_CASE("the pure-log component is consistent across all three routes") {
  for (double h : {-2.0, -1.0}) {
    auto F = quadrature_frame(h);
    double via_moments = j31_direct(h, F);
    double via_frame = j31_combination(h, F);
    double via_triangle = original_J(3, h) - 3.0 * original_J(2, h);
    CHECK(via_moments == Catch::Approx(via_frame).epsilon(1e-9));
    CHECK(via_triangle == Catch::Approx(via_frame).epsilon(1e-7));
  }
  auto F = quadrature_frame(-2.0);
  CHECK(j31_combination(-2.0, F) == Catch::Approx(kJ31).epsilon(1e-9));
}

TEST_CASE("interior sign pattern of the triangle-chart integrals") {
  for (double h : {-3.5, -2.0, -0.8}) {
    CHECK(original_J(1, h) < 0.0);
    CHECK(original_J(2, h) > 0.0);
    CHECK(original_J(3, h) > 0.0);
    CHECK(original_J(4, h) < 0.0);
  }
}

TEST_CASE("powers outside the supported range are rejected") {
  CHECK_THROWS_AS(abelian_I(-2, -2.0), std::domain_error);
  CHECK_THROWS_AS(abelian_I(7, -2.0), std::domain_error);
  CHECK_THROWS_AS(original_J(5, -2.0), std::domain_error);
  CHECK_THROWS_AS(abelian_I(0, -4.5), std::domain_error);
}
