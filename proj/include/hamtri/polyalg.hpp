#pragma once

// Exact polynomial algebra over arbitrary-precision rationals: univariate and
// bivariate polynomials, resultants via Sylvester determinants, Sturm root
// counting, and the named battery of exact identities underpinning the
// qualitative picture of the ratio surface
//   zeta, Psi_1, Psi_2, psi, chi_1, chi_2
// together with their boundary factorizations and critical-point bookkeeping.
// Everything in this header is exact; no floating point enters the checks.

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hamtri {

using Rat = boost::multiprecision::cpp_rational;

// --- univariate ------------------------------------------------------------

class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }
  explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(Rat v) { return Poly({std::move(v)}); }
  static Poly variable() { return Poly({Rat(0), Rat(1)}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rat& leading() const {
    if (is_zero()) throw std::domain_error("Poly::leading: zero polynomial");
    return c_.back();
  }
  Rat coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rat(0);
  }
  const std::vector<Rat>& coeffs() const { return c_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Rat& s) {
    std::vector<Rat> r = a.c_;
    for (auto& v : r) v *= s;
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) { return a * Rat(-1); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rat> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(i);
    return Poly(std::move(r));
  }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * x + static_cast<double>(*it);
    }
    return acc;
  }

  // quotient and remainder over the rational field
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("Poly divmod: division by zero");
    std::vector<Rat> rem = a.c_;
    std::vector<Rat> quo(std::max<std::ptrdiff_t>(0, a.degree() - b.degree() + 1), Rat(0));
    while (static_cast<int>(rem.size()) - 1 >= b.degree() && !rem.empty()) {
      int d = static_cast<int>(rem.size()) - 1 - b.degree();
      Rat f = rem.back() / b.leading();
      quo[d] = f;
      for (std::size_t i = 0; i < b.c_.size(); ++i) rem[d + i] -= f * b.c_[i];
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
    }
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }

  friend Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::domain_error("exact_div: nonzero remainder");
    return q;
  }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      if (!first) os << " + ";
      os << c_[i];
      if (i >= 1) os << "*" << var;
      if (i >= 2) os << "^" << i;
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

inline Poly poly_pow(Poly base, int n) {
  Poly r = Poly::constant(1);
  for (int i = 0; i < n; ++i) r = r * base;
  return r;
}

inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    (void)q;
    a = b;
    b = r;
  }
  if (!a.is_zero()) {
    // monic normalization
    Rat inv = Rat(1) / a.leading();
    a = a * inv;
  }
  return a;
}

inline Poly squarefree_part(const Poly& p) {
  if (p.degree() <= 0) return p;
  return exact_div(p, gcd(p, p.derivative()));
}

// Number of distinct real roots in the open interval (a, b); both endpoints
// must be non-roots.
inline int sturm_count(const Poly& p, const Rat& a, const Rat& b) {
  Poly p0 = squarefree_part(p);
  if (p0.eval(a) == 0 || p0.eval(b) == 0) {
    throw std::domain_error("sturm_count: endpoint is a root");
  }
  std::vector<Poly> seq = {p0, p0.derivative()};
  while (!seq.back().is_zero()) {
    auto [q, r] = divmod(seq[seq.size() - 2], seq.back());
    (void)q;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  auto variations = [&](const Rat& x) {
    int v = 0;
    int last = 0;
    for (const auto& s : seq) {
      Rat val = s.eval(x);
      if (val == 0) continue;
      int sgn = val > 0 ? 1 : -1;
      if (last != 0 && sgn != last) ++v;
      last = sgn;
    }
    return v;
  };
  return variations(a) - variations(b);
}

// --- bivariate -------------------------------------------------------------

// Coefficient grid c[i][j] multiplying h^i w^j.
struct Grid {
  std::vector<std::vector<Rat>> c;

  static Grid from_rows(std::vector<std::vector<Rat>> rows_h_by_w) {
    return {std::move(rows_h_by_w)};
  }

  Rat coeff(int i, int j) const {
    if (i < 0 || i >= static_cast<int>(c.size())) return Rat(0);
    const auto& row = c[i];
    if (j < 0 || j >= static_cast<int>(row.size())) return Rat(0);
    return row[j];
  }
  int deg_h() const { return static_cast<int>(c.size()) - 1; }
  int deg_w() const {
    int d = -1;
    for (const auto& row : c) d = std::max(d, static_cast<int>(row.size()) - 1);
    return d;
  }

  // partial derivatives
  Grid d_h() const {
    Grid g;
    for (std::size_t i = 1; i < c.size(); ++i) {
      auto row = c[i];
      for (auto& v : row) v *= Rat(i);
      g.c.push_back(std::move(row));
    }
    return g;
  }
  Grid d_w() const {
    Grid g = *this;
    for (auto& row : g.c) {
      if (row.empty()) continue;
      for (std::size_t j = 1; j < row.size(); ++j) row[j - 1] = row[j] * Rat(j);
      row.pop_back();
    }
    return g;
  }

  // collect as a polynomial in h with Poly-in-w coefficients, or vice versa
  std::vector<Poly> in_h() const {
    std::vector<Poly> out;
    for (const auto& row : c) out.emplace_back(Poly(row));
    while (!out.empty() && out.back().is_zero()) out.pop_back();
    return out;
  }
  std::vector<Poly> in_w() const {
    std::vector<Poly> out(deg_w() + 1);
    for (int j = 0; j <= deg_w(); ++j) {
      std::vector<Rat> col;
      for (std::size_t i = 0; i < c.size(); ++i) col.push_back(coeff(i, j));
      out[j] = Poly(std::move(col));
    }
    while (!out.empty() && out.back().is_zero()) out.pop_back();
    return out;
  }

  // substitute w := s(h), producing a univariate polynomial in h
  Poly substitute_w(const Poly& s) const {
    auto byw = in_w();
    Poly acc;
    for (auto it = byw.rbegin(); it != byw.rend(); ++it) acc = acc * s + *it;
    return acc;
  }

  // partial evaluation h := v, producing a polynomial in w
  Poly at_h(const Rat& v) const {
    auto byw = in_w();
    std::vector<Rat> out;
    for (auto& p : byw) out.push_back(p.eval(v));
    return Poly(std::move(out));
  }

  Rat eval(const Rat& h, const Rat& w) const { return at_h(h).eval(w); }

  double eval(double h, double w) const {
    double acc = 0.0;
    auto byw = in_w();
    for (auto it = byw.rbegin(); it != byw.rend(); ++it) acc = acc * w + it->eval(h);
    return acc;
  }
};

namespace detail {

inline Poly det_poly(std::vector<std::vector<Poly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Poly::constant(1);
  if (n == 1) return m[0][0];
  Poly acc;
  for (std::size_t r = 0; r < n; ++r) {
    if (m[r][0].is_zero()) continue;
    std::vector<std::vector<Poly>> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      sub.emplace_back(m[i].begin() + 1, m[i].end());
    }
    Poly term = m[r][0] * det_poly(std::move(sub));
    acc = (r % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace detail

// Resultant of two polynomials in the main variable (coefficients in the
// other), via the Sylvester determinant.
inline Poly resultant(const std::vector<Poly>& f, const std::vector<Poly>& g) {
  const int m = static_cast<int>(f.size()) - 1;
  const int n = static_cast<int>(g.size()) - 1;
  if (m < 0 || n < 0) throw std::domain_error("resultant: zero polynomial");
  const int sz = m + n;
  std::vector<std::vector<Poly>> syl(sz, std::vector<Poly>(sz, Poly()));
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k <= m; ++k) syl[r][r + k] = f[m - k];
  }
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= n; ++k) syl[n + r][r + k] = g[n - k];
  }
  return detail::det_poly(std::move(syl));
}

// --- named polynomials -----------------------------------------------------

namespace named {

// zeta(h, w), the quartic driving the third derivative of the ratio
inline const Grid& zeta() {
  static const Grid g = Grid::from_rows({
      {-324, 216, -144, 72, -12},
      {-108, -84, 76, -12, 0},
      {-37, 8, 1, 0, 0},
      {-4, 2, 0, 0, 0},
  });
  return g;
}

// Psi_1(h, w), numerator of the first tangency bracket
inline const Grid& psi1() {
  static const Grid g = Grid::from_rows({
      {648, -432, 72},
      {216, -48, -8},
      {26, 2, -2},
      {2, -1, 0},
  });
  return g;
}

// Psi_2(h, w), numerator of the second tangency bracket
inline const Grid& psi2() {
  static const Grid g = Grid::from_rows({
      {648, -1080, 504, -72},
      {0, -228, 184, -36},
      {-94, 62, -8, 0},
      {-10, 5, 0, 0},
  });
  return g;
}

// psi(h, w), the combination controlling the product Psi_1 * Psi_2
inline const Grid& psi() {
  static const Grid g = Grid::from_rows({
      {7776, -7776, 2592, -288},
      {5184, -2304, 96, 32},
      {1428, -32, -156, 8},
      {238, -16, -18, 0},
      {22, -11, 0, 0},
  });
  return g;
}

// chi_1(w), the quartic cofactor of the w-resultant
inline const Poly& chi1() {
  static const Poly p({-21975, 14660, -1841, -912, 114});
  return p;
}

// chi_2(h), the quartic cofactor of the h-resultant
inline const Poly& chi2() {
  static const Poly p({-170856, -4036, -401, 304, 38});
  return p;
}

// interior chords bounding the ratio
inline const Poly& chord_lo() {
  static const Poly p({Rat(5, 3), Rat(1, 6)});  // 1 + (h+4)/6
  return p;
}
inline const Poly& chord_hi() {
  static const Poly p({Rat(3), Rat(1, 2)});  // 3 + h/2
  return p;
}

}  // namespace named

// --- identity battery ------------------------------------------------------

struct PolyCheck {
  std::string statement;
  bool pass;
};

inline std::vector<PolyCheck> run_poly_battery() {
  using named::chi1;
  using named::chi2;
  using named::psi;
  using named::psi1;
  using named::psi2;
  using named::zeta;

  std::vector<PolyCheck> out;
  auto record = [&](std::string stmt, bool ok) {
    out.push_back({std::move(stmt), ok});
  };
  auto W = Poly::variable();
  auto H = Poly::variable();

  // resultant factorizations
  {
    Poly lhs = resultant(zeta().d_h().in_h(), zeta().d_w().in_h());
    Poly rhs = poly_pow(W - Poly::constant(3), 2) * (W - Poly::constant(2)) *
               poly_pow(W - Poly::constant(1), 2) * chi1() * Rat(-1024);
    record("resultant_h(zeta_h, zeta_w) == -1024*(w-3)^2*(w-2)*(w-1)^2*chi1(w)", lhs == rhs);

    // cofactor root count: the only critical w in (1, 3) is w = 2
    Poly cof = exact_div(lhs, poly_pow(W - Poly::constant(3), 2) *
                                  poly_pow(W - Poly::constant(1), 2) * Rat(-1024));
    record("critical-w cofactor (w-2)*chi1 has exactly one root in (1, 3)",
           sturm_count(cof, Rat(1), Rat(3)) == 1);
  }
  {
    Poly lhs = resultant(zeta().d_h().in_w(), zeta().d_w().in_w());
    Poly rhs = poly_pow(H, 2) * (H + Poly::constant(2)) * poly_pow(H + Poly::constant(4), 2) *
               chi2() * Rat(-6144);
    record("resultant_w(zeta_h, zeta_w) == -6144*h^2*(h+2)*(h+4)^2*chi2(h)", lhs == rhs);

    Poly cof = exact_div(lhs, poly_pow(H, 2) * poly_pow(H + Poly::constant(4), 2) * Rat(-6144));
    record("critical-h cofactor (h+2)*chi2 has exactly one root in (-4, 0)",
           sturm_count(cof, Rat(-4), Rat(0)) == 1);
  }
  {
    Poly lhs = resultant(psi1().in_h(), psi1().d_w().in_h());
    Poly rhs = poly_pow(W - Poly::constant(3), 2) * poly_pow(W - Poly::constant(1), 2) *
               Poly({69, -20, 5}) * Rat(-746496);
    record("resultant_h(Psi1, dPsi1/dw) == -746496*(w-3)^2*(w-1)^2*(5w^2-20w+69)", lhs == rhs);
    record("5w^2 - 20w + 69 has negative discriminant", Rat(20 * 20 - 4 * 5 * 69) < 0);
  }
  {
    Poly lhs = resultant(psi().in_w(), psi1().in_w());
    Poly rhs = poly_pow(H, 5) * poly_pow(H + Poly::constant(4), 5) * Poly({-36, 4, 1}) *
               Rat(-466560);
    record("resultant_w(psi, Psi1) == -466560*h^5*(h+4)^5*(h^2+4h-36)", lhs == rhs);
    record("h^2 + 4h - 36 has no root in (-4, 0)",
           sturm_count(Poly({-36, 4, 1}), Rat(-4), Rat(0)) == 0);
  }

  // Sturm certificates for the cofactors themselves
  record("chi1 has no root in (1, 3)", sturm_count(chi1(), Rat(1), Rat(3)) == 0);
  record("chi2 has no root in (-4, 0)", sturm_count(chi2(), Rat(-4), Rat(0)) == 0);

  // the unique interior critical point of zeta
  record("zeta_h(-2, 2) == 0", zeta().d_h().eval(Rat(-2), Rat(2)) == 0);
  record("zeta_w(-2, 2) == 0", zeta().d_w().eval(Rat(-2), Rat(2)) == 0);
  record("zeta(-2, 2) == -16", zeta().eval(Rat(-2), Rat(2)) == Rat(-16));

  // boundary factorizations of zeta
  record("zeta(-4, w) == -12*(w-1)^2*(w^2-8w+19)",
         zeta().at_h(Rat(-4)) == poly_pow(W - Poly::constant(1), 2) * Poly({19, -8, 1}) * Rat(-12));
  record("zeta(0, w) == -12*(w-3)^2*(w^2+3)",
         zeta().at_h(Rat(0)) == poly_pow(W - Poly::constant(3), 2) * Poly({3, 0, 1}) * Rat(-12));
  record("zeta(h, 1) == -2*(h+4)^2*(h+6)",
         zeta().substitute_w(Poly::constant(1)) ==
             poly_pow(H + Poly::constant(4), 2) * (H + Poly::constant(6)) * Rat(-2));
  record("zeta(h, 3) == 2*h^2*(h-2)",
         zeta().substitute_w(Poly::constant(3)) ==
             poly_pow(H, 2) * (H - Poly::constant(2)) * Rat(2));

  // chord traces of the tangency brackets
  record("Psi1 on the lower chord == -(2/9)*(h-9)*(h+4)^3",
         psi1().substitute_w(named::chord_lo()) ==
             (H - Poly::constant(9)) * poly_pow(H + Poly::constant(4), 3) * Rat(-2, 9));
  record("Psi1 on the upper chord == -h^2*(h+4)^2",
         psi1().substitute_w(named::chord_hi()) ==
             -(poly_pow(H, 2) * poly_pow(H + Poly::constant(4), 2)));
  record("Psi2 at w = 1 == -5*h*(h+4)^2",
         psi2().substitute_w(Poly::constant(1)) ==
             H * poly_pow(H + Poly::constant(4), 2) * Rat(-5));
  record("Psi2 on the lower chord == (4/9)*(h-3)*(h+4)^3",
         psi2().substitute_w(named::chord_lo()) ==
             (H - Poly::constant(3)) * poly_pow(H + Poly::constant(4), 3) * Rat(4, 9));
  record("Psi2 on the upper chord == -4*h^2*(h+4)^2",
         psi2().substitute_w(named::chord_hi()) ==
             poly_pow(H, 2) * poly_pow(H + Poly::constant(4), 2) * Rat(-4));
  record("Psi2 at w = 3 == 5*h^2*(h+4)",
         psi2().substitute_w(Poly::constant(3)) ==
             poly_pow(H, 2) * (H + Poly::constant(4)) * Rat(5));
  record("Psi2 at h = -2 == 8*(13w^2-52w+44)",
         psi2().at_h(Rat(-2)) == Poly({44, -52, 13}) * Rat(8));
  record("13w^2 - 52w + 44 has no root in (4/3, 2)",
         sturm_count(Poly({44, -52, 13}), Rat(4, 3), Rat(2)) == 0);

  // derivative factorizations of the cofactors
  record("chi1'(w) == 2*(w-2)*(228w^2-912w-3665)",
         chi1().derivative() == (W - Poly::constant(2)) * Poly({-3665, -912, 228}) * Rat(2));
  record("chi2'(h) == 2*(h+2)*(76h^2+304h-1009)",
         chi2().derivative() == (H + Poly::constant(2)) * Poly({-1009, 304, 76}) * Rat(2));

  // equilibrium discriminant of the slope equation
  {
    Poly lhs = poly_pow(H + Poly::constant(6), 2) * Rat(4) - Poly({36, 8}) * Rat(4);
    record("4*(h+6)^2 - 16*(2h+9) == 4*h*(h+4)", lhs == H * (H + Poly::constant(4)) * Rat(4));
  }

  return out;
}

}  // namespace hamtri
