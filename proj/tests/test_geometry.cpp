#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamtri/geometry.hpp"

using namespace hamtri;

TEST_CASE("oval extent at h = -2 hits the closed-form roots") {
  // x(x-3)^2 = 2 factors through x = 2 - sqrt(3) on the inner branch.
  auto e = oval_extent(-2.0);
  CHECK(e.x1 == Catch::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-14));
  CHECK(e.x1 < 1.0);
  CHECK(e.x2 > 1.0);
  CHECK(e.x2 < 3.0);
  CHECK(e.x3 > 3.0);
}

TEST_CASE("extent roots satisfy the cubic to near machine accuracy") {
  for (double h : {-3.9, -3.0, -2.0, -1.0, -0.5, -0.1, -0.01, -1e-4}) {
    auto e = oval_extent(h);
    const double tol = 1e-13 * std::max(1.0, std::abs(h));
    for (double x : {e.x1, e.x2, e.x3}) {
      double res = x * (x - 3.0) * (x - 3.0) + h;
      INFO("h=" << h << " x=" << x);
      CHECK(std::abs(res) <= tol);
    }
  }
}

TEST_CASE("oval height closes the oval and reproduces the level") {
  for (double h : {-3.5, -2.0, -0.5}) {
    auto e = oval_extent(h);
    CHECK(oval_height(h, e.x1) <= 2e-6);
    CHECK(oval_height(h, e.x2) <= 2e-6);
    for (int i = 1; i < 40; ++i) {
      double x = e.x1 + (e.x2 - e.x1) * i / 40.0;
      double y = oval_height(h, x);
      INFO("h=" << h << " x=" << x);
      CHECK(std::abs(hamiltonian(x, y) - h) <= 1e-10);
    }
  }
}

TEST_CASE("chart change is an involution pair at machine accuracy") {
  auto close = [](Vec2 a, Vec2 b) {
    return std::abs(a.x - b.x) <= 1e-15 && std::abs(a.y - b.y) <= 1e-15;
  };
  Vec2 samples[] = {{1.0, 0.0}, {0.5, 0.25}, {2.5, -1.0}, {0.1, 1.7}, {3.0, 0.0}};
  for (auto p : samples) {
    CHECK(close(to_h_chart(from_h_chart(p)), p));
  }
  Vec2 tsamples[] = {{1.0 / 3, 1.0 / 3}, {0.2, 0.5}, {0.0, 0.0}, {0.9, 0.05}};
  for (auto t : tsamples) {
    CHECK(close(from_h_chart(to_h_chart(t)), t));
  }
}

TEST_CASE("chart change sends the markers where they belong") {
  Vec2 c = from_h_chart({1.0, 0.0});
  CHECK(c.x == Catch::Approx(1.0 / 3).margin(1e-16));
  CHECK(c.y == Catch::Approx(1.0 / 3).margin(1e-16));
  Vec2 corner = from_h_chart({3.0, 0.0});
  CHECK(corner.x == Catch::Approx(0.0).margin(1e-16));
  CHECK(corner.y == Catch::Approx(0.0).margin(1e-16));
}

TEST_CASE("levels transform by the -1/108 scaling along the oval") {
  for (double h : {-3.0, -1.0, -0.25}) {
    auto e = oval_extent(h);
    for (int i = 1; i < 10; ++i) {
      double x = e.x1 + (e.x2 - e.x1) * i / 10.0;
      Vec2 t = from_h_chart({x, oval_height(h, x)});
      CHECK(std::abs(triangle_level(t.x, t.y) - triangle_level_from_h(h)) <= 1e-13);
    }
    CHECK(h_from_triangle_level(triangle_level_from_h(h)) == Catch::Approx(h).epsilon(1e-15));
  }
}

TEST_CASE("levels outside the annulus are rejected") {
  CHECK_THROWS_AS(oval_extent(-4.0), std::domain_error);
  CHECK_THROWS_AS(oval_extent(0.0), std::domain_error);
  CHECK_THROWS_AS(oval_extent(-5.0), std::domain_error);
  CHECK_THROWS_AS(oval_extent(1.0), std::domain_error);
  CHECK_THROWS_AS(oval_height(-4.5, 1.0), std::domain_error);
}
