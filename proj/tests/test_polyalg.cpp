#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "hamtri/polyalg.hpp"
#include "hamtri/ratio.hpp"

using hamtri::Grid;
using hamtri::Poly;
using hamtri::Rat;

TEST_CASE("univariate arithmetic round trips") {
  Poly a({Rat(3), Rat(0), Rat(-2), Rat(1)});  // t^3 - 2t^2 + 3
  Poly b({Rat(-1), Rat(1)});                  // t - 1

  auto [q, r] = divmod(a, b);
  CHECK(q * b + r == a);
  CHECK(r.degree() < b.degree());

  CHECK(exact_div(a * b, b) == a);
  CHECK_THROWS_AS(exact_div(a, b), std::domain_error);

  Poly d = a.derivative();
  CHECK(d == Poly({Rat(0), Rat(-4), Rat(3)}));
  CHECK(a.eval(Rat(2)) == Rat(3));
  CHECK(a.eval(2.0) == Catch::Approx(3.0));
}

TEST_CASE("gcd and squarefree part") {
  Poly t = Poly::variable();
  Poly p = hamtri::poly_pow(t - Poly::constant(1), 2) * (t + Poly::constant(2));
  Poly g = hamtri::gcd(p, p.derivative());
  CHECK(g == t - Poly::constant(1));  // monic
  CHECK(hamtri::squarefree_part(p) ==
        (t - Poly::constant(1)) * (t + Poly::constant(2)) * Rat(1));
}

TEST_CASE("sturm counting on knowns") {
  Poly t = Poly::variable();
  Poly p = t * t - Poly::constant(2);
  CHECK(hamtri::sturm_count(p, Rat(0), Rat(2)) == 1);
  CHECK(hamtri::sturm_count(p, Rat(-2), Rat(2)) == 2);
  CHECK(hamtri::sturm_count(p, Rat(3, 2), Rat(2)) == 0);
  // repeated roots count once
  Poly sq = hamtri::poly_pow(t - Poly::constant(1), 3);
  CHECK(hamtri::sturm_count(sq, Rat(0), Rat(2)) == 1);
}

TEST_CASE("sturm endpoint root is rejected") {
  Poly t = Poly::variable();
  CHECK_THROWS_AS(hamtri::sturm_count(t - Poly::constant(1), Rat(1), Rat(2)),
                  std::domain_error);
}

TEST_CASE("resultant matches product-over-roots on linear pairs") {
  // res_x(x - a, x - b) = a - b with the classical Sylvester layout
  auto lin = [](Rat c) { return std::vector<Poly>{Poly::constant(-c), Poly::constant(1)}; };
  Poly r = hamtri::resultant(lin(Rat(5)), lin(Rat(2)));
  CHECK(r == Poly::constant(Rat(3)));
  // shared root collapses the resultant
  std::vector<Poly> f = {Poly::constant(-1), Poly::constant(0), Poly::constant(1)};  // x^2 - 1
  std::vector<Poly> g = {Poly::constant(-1), Poly::constant(1)};                     // x - 1
  CHECK(hamtri::resultant(f, g).is_zero());
}

TEST_CASE("bivariate grid partial evaluation and derivatives") {
  // p = h^2 w + 3 h w^2 - 7
  Grid g = Grid::from_rows({
      {Rat(-7), Rat(0), Rat(0)},
      {Rat(0), Rat(0), Rat(3)},
      {Rat(0), Rat(1), Rat(0)},
  });
  CHECK(g.eval(Rat(2), Rat(3)) == Rat(4 * 3 + 3 * 2 * 9 - 7));
  CHECK(g.d_h().eval(Rat(2), Rat(3)) == Rat(2 * 2 * 3 + 3 * 9));
  CHECK(g.d_w().eval(Rat(2), Rat(3)) == Rat(4 + 6 * 2 * 3));
  CHECK(g.substitute_w(Poly::variable()).eval(Rat(2)) == g.eval(Rat(2), Rat(2)));
  CHECK(g.at_h(Rat(1)).eval(Rat(5)) == g.eval(Rat(1), Rat(5)));
  CHECK(g.eval(2.0, 3.0) == Catch::Approx(59.0));
}

TEST_CASE("named grids agree with the floating slope-surface evaluator") {
  for (double h : {-3.7, -2.0, -0.9}) {
    for (double w : {1.1, 1.7, 2.6}) {
      // Near a root of zeta the relative gap blows up from cancellation against
      // coefficients of size ~300, so allow an absolute floor as well.
      CHECK(hamtri::named::zeta().eval(h, w) ==
            Catch::Approx(hamtri::zeta_eval(h, w)).epsilon(1e-13).margin(1e-9));
    }
  }
  for (double h : {-3.5, -1.2}) {
    CHECK(hamtri::named::chord_lo().eval(h) == Catch::Approx(hamtri::chord_lower(h)));
    CHECK(hamtri::named::chord_hi().eval(h) == Catch::Approx(hamtri::chord_upper(h)));
  }
}

TEST_CASE("identity battery passes in full") {
  auto checks = hamtri::run_poly_battery();
  CHECK(checks.size() == 28);
  for (const auto& c : checks) {
    INFO(c.statement);
    CHECK(c.pass);
  }
}

TEST_CASE("battery statements are unique and nonempty") {
  auto checks = hamtri::run_poly_battery();
  std::vector<std::string> names;
  for (const auto& c : checks) {
    CHECK(!c.statement.empty());
    names.push_back(c.statement);
  }
  std::sort(names.begin(), names.end());
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
}
