#pragma once

// Command-line front end.  Every subcommand runs one verification or
// evaluation, prints a short human summary, and writes a machine-readable
// artifact (JSON by default, CSV on request) into the output directory.
// Artifacts are deterministic: the same invocation produces byte-identical
// files.  Exit codes: 0 all requested checks pass, 1 a check or run failed,
// 2 usage or input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamtri/acceptance.hpp"
#include "hamtri/cyclicity.hpp"
#include "hamtri/geometry.hpp"
#include "hamtri/picard_fuchs.hpp"
#include "hamtri/polyalg.hpp"
#include "hamtri/quadrature.hpp"
#include "hamtri/ratio.hpp"
#include "hamtri/simulate.hpp"

namespace hamtri {
namespace cli {

using json = nlohmann::ordered_json;

struct Output {
  std::string dir = ".";
  std::string format = "json";
};

namespace detail {

inline std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return std::string(buf);
}

inline json make_artifact(const std::string& command) {
  json a;
  a["schema_version"] = "1";
  a["command"] = command;
  a["config"] = json::object();
  a["pass"] = true;
  a["checks"] = json::array();
  return a;
}

inline void add_check(json& artifact, const std::string& anchor, bool pass,
                      json extra = json::object()) {
  json rec;
  rec["anchor"] = anchor;
  rec["pass"] = pass;
  for (auto& [k, v] : extra.items()) rec[k] = v;
  artifact["checks"].push_back(rec);
  if (!pass) artifact["pass"] = false;
}

// CSV cell with RFC-style quoting for text that may contain commas.
inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

inline std::string write_artifact(const json& artifact, const Output& out,
                                  const std::string& csv_body) {
  std::filesystem::create_directories(out.dir);
  std::string base = artifact.at("command").get<std::string>();
  std::string path = out.dir + "/" + base + (out.format == "csv" ? ".csv" : ".json");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write artifact: " + path);
  if (out.format == "csv")
    f << csv_body;
  else
    f << artifact.dump(2) << "\n";
  f.close();
  std::printf("wrote %s\n", path.c_str());
  return path;
}

inline std::vector<double> parse_fixed(const std::vector<double>& v, std::size_t n,
                                       const char* flag) {
  if (v.size() != n) {
    throw CLI::ValidationError(std::string(flag) + " expects " + std::to_string(n) +
                               " comma-separated values");
  }
  return v;
}

inline json zero_report_json(const ZeroReport& rep) {
  json j;
  j["count"] = rep.count;
  j["all_simple"] = rep.all_simple;
  j["window"] = {rep.h_lo, rep.h_hi};
  j["grid_n"] = rep.grid_n;
  j["sign_left"] = rep.sign_left;
  j["sign_right"] = rep.sign_right;
  j["parity_consistent"] = rep.parity_consistent;
  j["zeros"] = json::array();
  for (const auto& z : rep.zeros) {
    j["zeros"].push_back({{"location", z.location},
                          {"bracket_lo", z.bracket_lo},
                          {"bracket_hi", z.bracket_hi},
                          {"direction", z.direction},
                          {"slope", z.J_slope},
                          {"multiplicity_suspect", z.multiplicity_suspect}});
  }
  j["tangency_suspects"] = rep.tangency_suspects;
  return j;
}

inline json greek_json(const GreekParams& g) {
  return {{"lambda", g.lambda}, {"sigma", g.sigma}, {"gamma", g.gamma}, {"kappa", g.kappa}};
}

inline json mu_json(const MuParams& m) {
  return {{"mu1", m.mu1}, {"mu2", m.mu2}, {"mu3", m.mu3}, {"mu4", m.mu4}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommand implementations.  Each returns the process exit code.

inline int cmd_oval(double h, const Output& out) {
  OvalExtent e = oval_extent(h);
  json a = detail::make_artifact("oval");
  a["config"]["h"] = h;
  a["x1"] = e.x1;
  a["x2"] = e.x2;
  a["x3"] = e.x3;
  double ymax = oval_height(h, 0.5 * (e.x1 + e.x2));
  a["height_mid"] = ymax;
  auto cubic = [&](double x) { return x * (x - 3.0) * (x - 3.0) + h; };
  double scale = std::abs(h) + 1.0;
  bool roots_ok = std::abs(cubic(e.x1)) <= 1e-10 * scale && std::abs(cubic(e.x2)) <= 1e-10 * scale &&
                  std::abs(cubic(e.x3)) <= 1e-10 * scale;
  detail::add_check(a, "x (x-3)^2 + h has roots 0 < x1 < x2 < 3 < x3 for h in (-4, 0)",
                    roots_ok && 0.0 < e.x1 && e.x1 < e.x2 && e.x2 < 3.0 && 3.0 < e.x3,
                    {{"max_cubic_residual",
                      std::max({std::abs(cubic(e.x1)), std::abs(cubic(e.x2)),
                                std::abs(cubic(e.x3))})}});
  std::printf("x1 = %.12f\n", e.x1);
  std::printf("x2 = %.12f\n", e.x2);
  std::string csv = "h,x1,x2,x3,height_mid\n" + detail::sci(h) + "," + detail::sci(e.x1) + "," +
                    detail::sci(e.x2) + "," + detail::sci(e.x3) + "," + detail::sci(ymax) + "\n";
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_integrals(double h, double tol, const Output& out) {
  AbelianFrame F = quadrature_frame(h, tol);
  json a = detail::make_artifact("integrals");
  a["config"] = {{"h", h}, {"tol", tol}};
  a["I0"] = F.I0;
  a["I2"] = F.I2;
  a["Istar"] = F.Istar;
  a["dI0"] = F.dI0;
  a["dI2"] = F.dI2;
  a["dIstar"] = F.dIstar;
  json jj = json::object();
  for (int k = 1; k <= 4; ++k) jj["J" + std::to_string(k)] = j_combination(k, h, F);
  a["J"] = jj;

  double rec = power_recursion_residual(3, h, tol);
  detail::add_check(a,
                    "(2k+6) I_{k+1} = 6(2k+3) I_k - 18k I_{k-1} - (2k-3) h I_{k-2} for k = 3",
                    std::abs(rec) <= 1e-9 * (std::abs(F.I0) + std::abs(h)),
                    {{"residual", rec}});
  double cub = cubic_moment_residual(h, tol);
  detail::add_check(a, "I_03 / 3 = 9 I_0 - 12 I_1 + 3 I_2 on the oval",
                    std::abs(cub) <= 1e-9 * (std::abs(F.I0) + std::abs(h)),
                    {{"residual", cub}});
  double worst_bridge = 0.0;
  for (int k = 1; k <= 4; ++k) {
    double direct = original_J(k, h);
    double reduced = j_combination(k, h, F);
    double rel = std::abs(direct - reduced) /
                 std::max({std::abs(direct), std::abs(reduced), 1e-12});
    worst_bridge = std::max(worst_bridge, rel);
    a["J_area"]["J" + std::to_string(k)] = direct;
  }
  detail::add_check(a,
                    "area-integral basis J_1..J_4 matches the reduction to I_0, I_2, I_* and "
                    "their derivatives within 1e-6 relative",
                    worst_bridge <= 1e-6, {{"worst_relative", worst_bridge}});

  std::printf("I0 = %.12f  I2 = %.12f  Istar = %.12f\n", F.I0, F.I2, F.Istar);
  std::printf("J1..J4 = %.12f %.12f %.12f %.12f\n", jj["J1"].get<double>(),
              jj["J2"].get<double>(), jj["J3"].get<double>(), jj["J4"].get<double>());
  std::string csv = "h,I0,I2,Istar,dI0,dI2,dIstar,J1,J2,J3,J4\n" + detail::sci(h);
  for (double v : {F.I0, F.I2, F.Istar, F.dI0, F.dI2, F.dIstar, jj["J1"].get<double>(),
                   jj["J2"].get<double>(), jj["J3"].get<double>(), jj["J4"].get<double>()})
    csv += "," + detail::sci(v);
  csv += "\n";
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_pf_check(int grid_n, double tol, const Output& out) {
  if (grid_n < 2) throw CLI::ValidationError("--grid-n must be at least 2");
  json a = detail::make_artifact("pf-check");
  a["config"] = {{"grid_n", grid_n}, {"tol", tol}};
  std::string csv = "h,matrix_residual,flow_vs_quadrature\n";
  double worst_mat = 0.0, worst_flow = 0.0;
  json rows = json::array();
  for (int i = 0; i < grid_n; ++i) {
    double h = -3.98 + (i + 0.5) * (3.96 / grid_n);
    AbelianFrame F = quadrature_frame(h, 1e-12);
    auto d = pf_derivatives(h, F.Istar, F.I2, F.I0);
    double scale = std::max({std::abs(F.dIstar), std::abs(F.dI2), std::abs(F.dI0)});
    double rm = std::max({std::abs(d[0] - F.dIstar), std::abs(d[1] - F.dI2),
                          std::abs(d[2] - F.dI0)}) /
                scale;
    AbelianFrame P = pf_cache().frame(h);
    double fscale = std::max({std::abs(F.I0), std::abs(F.I2), std::abs(F.Istar), 1.0});
    double rf = std::max({std::abs(P.I0 - F.I0), std::abs(P.I2 - F.I2),
                          std::abs(P.Istar - F.Istar)}) /
                fscale;
    worst_mat = std::max(worst_mat, rm);
    worst_flow = std::max(worst_flow, rf);
    rows.push_back({{"h", h}, {"matrix_residual", rm}, {"flow_vs_quadrature", rf}});
    csv += detail::sci(h) + "," + detail::sci(rm) + "," + detail::sci(rf) + "\n";
  }
  a["grid"] = rows;
  detail::add_check(a,
                    "M(h) d/dh (I_*, I_2, I_0) = (I_*, I_2, I_0) with quadrature values, "
                    "relative residual <= tol",
                    worst_mat <= tol, {{"worst", worst_mat}});
  detail::add_check(a, "flow of the derivative system matches quadrature within tol",
                    worst_flow <= tol, {{"worst", worst_flow}});
  std::printf("matrix residual worst %.3e, flow vs quadrature worst %.3e on %d levels\n",
              worst_mat, worst_flow, grid_n);
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_ratio_check(int grid_n, const Output& out) {
  if (grid_n < 2) throw CLI::ValidationError("--grid-n must be at least 2");
  json a = detail::make_artifact("ratio-check");
  a["config"] = {{"grid_n", grid_n}};
  std::string csv = "h,w,chord_lower,chord_upper,w1,w2,w3\n";
  int violations = 0;
  for (int i = 0; i < grid_n; ++i) {
    double h = -3.992 + (i + 0.5) * (3.984 / grid_n);
    RatioDerivs d = w_derivs(h);
    bool ok = d.w1 > 0.0 && d.w2 > 0.0 && d.w3 > 0.0 && chord_lower(h) < d.w &&
              d.w < chord_upper(h);
    if (!ok) ++violations;
    csv += detail::sci(h) + "," + detail::sci(d.w) + "," + detail::sci(chord_lower(h)) + "," +
           detail::sci(chord_upper(h)) + "," + detail::sci(d.w1) + "," + detail::sci(d.w2) +
           "," + detail::sci(d.w3) + "\n";
  }
  detail::add_check(a,
                    "w' > 0, w'' > 0, w''' > 0 and chord bounds 1 + (h+4)/6 < w < 3 + h/2 "
                    "across the annulus",
                    violations == 0, {{"violations", violations}, {"grid_n", grid_n}});
  double w_center = w_riccati(-4.0 + 1e-6);
  detail::add_check(a, "w -> 1 at the center value", std::abs(w_center - 1.0) <= 2e-7,
                    {{"value", w_center}});
  double wq = w_direct(-1e-6, 1e-12);
  detail::add_check(a, "w -> 3 + 6/ln(|h|/108) at the outer boundary",
                    std::abs(wq - w_asymptote_calibrated(-1e-6)) <= 1e-2,
                    {{"value", wq}, {"asymptote", w_asymptote_calibrated(-1e-6)}});
  std::printf("%d/%d grid points satisfy the sign and chord bounds\n", grid_n - violations,
              grid_n);
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_poly_verify(const Output& out) {
  json a = detail::make_artifact("poly-verify");
  auto battery = run_poly_battery();
  std::string csv = "index,pass,statement\n";
  int idx = 0, passed = 0;
  for (const auto& c : battery) {
    detail::add_check(a, c.statement, c.pass);
    csv += std::to_string(idx++) + "," + (c.pass ? "true" : "false") + "," +
           detail::csv_quote(c.statement) + "\n";
    if (c.pass) ++passed;
  }
  std::printf("%d/%zu exact identities hold\n", passed, battery.size());
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_j_eval(const GreekParams& g, bool have_h, double h, int grid_n,
                      const Output& out) {
  json a = detail::make_artifact("j-eval");
  a["config"] = {{"greek", detail::greek_json(g)}, {"grid_n", grid_n}};
  MuParams m = mu_from_greek(g);
  a["mu_equivalent"] = detail::mu_json(m);
  std::string csv = "h,J,J_deriv\n";
  json rows = json::array();
  if (have_h) {
    a["config"]["h"] = h;
    double v = J_eval(h, g), dv = J_deriv(h, g);
    rows.push_back({{"h", h}, {"J", v}, {"J_deriv", dv}});
    csv += detail::sci(h) + "," + detail::sci(v) + "," + detail::sci(dv) + "\n";
    std::printf("J(%.6f) = %.12e   J'(%.6f) = %.12e\n", h, v, h, dv);
  } else {
    for (int i = 0; i < grid_n; ++i) {
      double hh = -3.99 + (i + 0.5) * (3.98 / grid_n);
      double v = J_eval(hh, g), dv = J_deriv(hh, g);
      rows.push_back({{"h", hh}, {"J", v}, {"J_deriv", dv}});
      csv += detail::sci(hh) + "," + detail::sci(v) + "," + detail::sci(dv) + "\n";
    }
    std::printf("evaluated J on %d levels\n", grid_n);
  }
  a["grid"] = rows;
  detail::add_check(a,
                    "J = weighted combination of I_0', I_2', I_*' for the given parameters, "
                    "evaluated along the flow",
                    true);
  detail::write_artifact(a, out, csv);
  return 0;
}

inline int cmd_count_zeros(const GreekParams& g, double delta1, double delta2, int grid_n,
                           const Output& out) {
  json a = detail::make_artifact("count-zeros");
  a["config"] = {{"greek", detail::greek_json(g)},
                 {"delta1", delta1},
                 {"delta2", delta2},
                 {"grid_n", grid_n}};
  ZeroReport rep = count_zeros(g, delta1, delta2, grid_n);
  a["report"] = detail::zero_report_json(rep);
  detail::add_check(a, "J has at most 3 zeros in the inner window, all counted as simple",
                    rep.count <= 3 && rep.tangency_suspects.empty(),
                    {{"count", rep.count},
                     {"tangency_suspects", rep.tangency_suspects.size()}});
  detail::add_check(a, "endpoint parity of J is consistent with the interior crossing count",
                    rep.parity_consistent);
  std::string csv = "location,bracket_lo,bracket_hi,direction,slope,multiplicity_suspect\n";
  for (const auto& z : rep.zeros) {
    csv += detail::sci(z.location) + "," + detail::sci(z.bracket_lo) + "," +
           detail::sci(z.bracket_hi) + "," + std::to_string(z.direction) + "," +
           detail::sci(z.J_slope) + "," + (z.multiplicity_suspect ? "true" : "false") + "\n";
  }
  std::printf("zero count %d in [%.4f, %.4f], all simple: %s\n", rep.count, rep.h_lo, rep.h_hi,
              rep.all_simple ? "yes" : "no");
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_ect(int n, double margin, double s1, const Output& out) {
  json a = detail::make_artifact("ect");
  a["config"] = {{"n", n}, {"margin", margin}, {"s1", s1}};
  EctReport rep = ect_scan(n, margin);
  a["window_end"] = rep.window_end;
  a["flip_found"] = rep.flip_found;
  EctLimits lim = ect_center_limits(s1);
  a["center_limits"] = {{"d2_norm", lim.d2_norm}, {"d3_norm", lim.d3_norm},
                        {"d4_norm", lim.d4_norm}};
  std::string csv = "h,d1,d2,d3,d4\n";
  for (const auto& p : rep.points) {
    csv += detail::sci(p.h);
    for (double v : p.delta) csv += "," + detail::sci(v);
    csv += "\n";
  }
  detail::add_check(a, "leading minors D1..D4 of the basis derivative matrix stay negative "
                       "on the empirical window",
                    rep.negative_on_inner,
                    {{"window_end", rep.window_end}, {"flip_found", rep.flip_found}});
  const double t2 = -1.0 / 1458.0, t3 = 1.0 / 944784.0, t4 = -1.0 / 6377292.0;
  bool lim_ok = std::abs(lim.d2_norm - t2) <= 0.01 * std::abs(t2) &&
                std::abs(lim.d3_norm - t3) <= 0.01 * std::abs(t3) &&
                std::abs(lim.d4_norm - t4) <= 0.01 * std::abs(t4);
  detail::add_check(a,
                    "normalized center limits of D2, D3, D4 equal -1/1458, 1/944784, "
                    "-1/6377292 within 1 percent",
                    lim_ok,
                    {{"d2_norm", lim.d2_norm}, {"d3_norm", lim.d3_norm},
                     {"d4_norm", lim.d4_norm}});
  std::printf("window end %.4f, sign flip found: %s, minors negative: %s\n", rep.window_end,
              rep.flip_found ? "yes" : "no", rep.negative_on_inner ? "yes" : "no");
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_find_three(const std::vector<double>& targets, double delta1, double delta2,
                          int grid_n, const Output& out) {
  json a = detail::make_artifact("find-three");
  a["config"] = {{"targets", targets},
                 {"delta1", delta1},
                 {"delta2", delta2},
                 {"grid_n", grid_n}};
  std::array<double, 3> t{targets[0], targets[1], targets[2]};
  ThreeZeroResult res = find_three_zeros(t, delta1, delta2, grid_n);
  a["mu"] = detail::mu_json(res.mu);
  a["greek"] = detail::greek_json(res.greek);
  a["report"] = detail::zero_report_json(res.report);
  a["max_offset"] = res.max_offset;
  detail::add_check(a, "constructed parameter direction yields exactly 3 verified simple zeros",
                    res.verified && res.report.count == 3,
                    {{"count", res.report.count}, {"max_offset", res.max_offset}});
  std::string csv = "target,found\n";
  for (std::size_t i = 0; i < res.report.zeros.size() && i < 3; ++i) {
    csv += detail::sci(t[i]) + "," + detail::sci(res.report.zeros[i].location) + "\n";
  }
  std::printf("three zeros at");
  for (const auto& z : res.report.zeros) std::printf(" %.6f", z.location);
  std::printf(", max offset %.2e\n", res.max_offset);
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_scan(int n, std::uint64_t seed, double delta1, double delta2, int grid_n,
                    const Output& out) {
  json a = detail::make_artifact("scan");
  a["config"] = {{"n", n},
                 {"seed", seed},
                 {"delta1", delta1},
                 {"delta2", delta2},
                 {"grid_n", grid_n}};
  ScanReport rep = scan(n, seed, delta1, delta2, grid_n);
  a["global_max"] = rep.global_max;
  a["strata"] = json::array();
  std::string csv = "stratum,bound,samples,max_count,violations,suspects\n";
  for (const auto& st : rep.strata) {
    a["strata"].push_back({{"name", st.name},
                           {"bound", st.bound},
                           {"samples", st.samples},
                           {"max_count", st.max_count},
                           {"violations", st.violations},
                           {"suspects", st.suspects}});
    csv += detail::csv_quote(st.name) + "," + std::to_string(st.bound) + "," +
           std::to_string(st.samples) + "," + std::to_string(st.max_count) + "," +
           std::to_string(st.violations) + "," + std::to_string(st.suspects) + "\n";
  }
  detail::add_check(a, "zero counts stay within the per-stratum bounds of the case analysis",
                    !rep.any_violation, {{"global_max", rep.global_max}});
  int suspects = 0;
  for (const auto& st : rep.strata) suspects += st.suspects;
  detail::add_check(a, "no multiplicity-suspect zero is left unresolved", suspects == 0,
                    {{"suspects", suspects}});
  detail::add_check(a, "the deterministic witness direction attains the bound of 3",
                    rep.witness_three);
  std::printf("scanned %d directions, global max %d, violations: %s\n", rep.n, rep.global_max,
              rep.any_violation ? "yes" : "no");
  detail::write_artifact(a, out, csv);
  return a["pass"].get<bool>() ? 0 : 1;
}

inline int cmd_simulate(const EpsVector& eps, bool have_t, double t, int resolution, double rtol,
                        const Output& out) {
  json a = detail::make_artifact("simulate");
  a["config"] = {{"eps", {eps.e0, eps.e1, eps.e2, eps.e3, eps.e4}},
                 {"rtol", rtol},
                 {"resolution", resolution},
                 {"gauge", eps.gauge}};
  std::string csv;
  if (have_t) {
    a["config"]["t"] = t;
    ReturnResult r = poincare_return(t, eps, rtol);
    a["return"] = {{"t_start", r.t_start},
                   {"x_return", r.x_return},
                   {"y_return", r.y_return},
                   {"period", r.period},
                   {"displacement", r.displacement}};
    MuParams m = mu_of_eps(eps);
    a["mu_induced"] = detail::mu_json(m);
    detail::add_check(a, "first return to the diagonal section computed to the requested "
                         "tolerance; displacement is the conserved-level difference",
                      true, {{"displacement", r.displacement}});
    csv = "t,x_return,y_return,period,displacement\n" + detail::sci(t) + "," +
          detail::sci(r.x_return) + "," + detail::sci(r.y_return) + "," + detail::sci(r.period) +
          "," + detail::sci(r.displacement) + "\n";
    std::printf("return from t = %.6f: displacement %.6e, period %.6f\n", t, r.displacement,
                r.period);
  } else {
    CycleReport rep = count_cycles(eps, resolution, rtol);
    a["count"] = rep.count;
    a["cycle_levels"] = rep.h_levels;
    a["cycle_t"] = rep.t_params;
    MuParams m = mu_of_eps(eps);
    a["mu_induced"] = detail::mu_json(m);
    detail::add_check(a, "limit cycles located as sign changes of the return displacement "
                         "along the section",
                      true, {{"count", rep.count}});
    csv = "t,h,displacement\n";
    for (std::size_t i = 0; i < rep.grid_t.size(); ++i) {
      double lv = h_from_triangle_level(triangle_level(rep.grid_t[i], rep.grid_t[i]));
      csv += detail::sci(rep.grid_t[i]) + "," + detail::sci(lv) + "," +
             detail::sci(rep.grid_displacement[i]) + "\n";
    }
    std::printf("detected %d cycle(s) on a %d-point section grid\n", rep.count, resolution);
  }
  detail::write_artifact(a, out, csv);
  return 0;
}

inline int cmd_acceptance(int criterion, int scan_n, const Output& out) {
  json a = detail::make_artifact("acceptance");
  a["config"] = {{"criterion", criterion}, {"scan_n", scan_n}};
  a["criteria"] = json::array();
  std::string csv = "criterion,name,pass\n";
  bool all = true;
  for (int i = 1; i <= 8; ++i) {
    if (criterion != 0 && i != criterion) continue;
    acceptance::CriterionResult r =
        (i == 6) ? acceptance::criterion_6(scan_n) : acceptance::run_criterion(i);
    all = all && r.pass;
    json rec = {{"index", r.index}, {"name", r.name}, {"pass", r.pass}};
    rec["details"] = r.details;
    a["criteria"].push_back(rec);
    detail::add_check(a, "criterion " + std::to_string(r.index) + ": " + r.name, r.pass);
    csv += std::to_string(r.index) + "," + detail::csv_quote(r.name) + "," +
           (r.pass ? "true" : "false") + "\n";
    std::printf("criterion %d: %s (%s, %.1fs)\n", r.index, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds);
    for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
  }
  detail::write_artifact(a, out, csv);
  return all ? 0 : 1;
}

inline int cmd_report(const std::string& in_dir, const Output& out) {
  static const char* kKnown[] = {"oval",       "integrals",  "pf-check", "ratio-check",
                                 "poly-verify", "j-eval",     "count-zeros", "ect",
                                 "find-three", "scan",       "simulate", "acceptance"};
  json a = detail::make_artifact("report");
  a["config"]["in"] = in_dir;
  a["sources"] = json::array();
  std::string csv = "file,command,pass,checks\n";
  int found = 0;
  bool all = true;
  for (const char* name : kKnown) {
    std::string path = in_dir + "/" + std::string(name) + ".json";
    std::ifstream f(path);
    if (!f) continue;
    json src;
    try {
      f >> src;
    } catch (const std::exception& e) {
      throw std::runtime_error("unreadable artifact " + path + ": " + e.what());
    }
    ++found;
    bool pass = src.value("pass", false);
    all = all && pass;
    json rec = {{"file", std::string(name) + ".json"},
                {"command", src.value("command", std::string(name))},
                {"pass", pass}};
    json anchors = json::array();
    if (src.contains("checks")) {
      for (const auto& c : src["checks"]) {
        anchors.push_back({{"anchor", c.value("anchor", "")}, {"pass", c.value("pass", false)}});
      }
    }
    rec["checks"] = anchors;
    a["sources"].push_back(rec);
    csv += std::string(name) + ".json," + std::string(name) + "," + (pass ? "true" : "false") +
           "," + std::to_string(anchors.size()) + "\n";
  }
  if (found == 0) {
    throw std::runtime_error("no run artifacts found in " + in_dir);
  }
  detail::add_check(a, "every aggregated artifact reports pass", all, {{"aggregated", found}});
  std::printf("aggregated %d artifact(s), overall: %s\n", found, all ? "pass" : "FAIL");
  detail::write_artifact(a, out, csv);
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Argument wiring.

inline int dispatch(int argc, const char* const* argv) {
  CLI::App app{"verification toolkit for the cyclicity-three bound of the quadratic "
               "Hamiltonian triangle"};
  app.require_subcommand(1);

  Output out;
  app.add_option("--out", out.dir, "output directory for artifacts")
      ->envname("HAMTRI_OUT")
      ->capture_default_str();
  app.add_option("--format", out.format, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // Shared tolerance knobs; environment variables override the defaults and
  // explicit flags override both.
  double tol = 1e-12;
  double rtol = 1e-12;
  double delta1 = 1e-3, delta2 = 1e-6;
  app.add_option("--tol", tol, "quadrature / residual tolerance")
      ->envname("HAMTRI_TOL")
      ->capture_default_str();
  app.add_option("--rtol", rtol, "integrator relative tolerance")
      ->envname("HAMTRI_RTOL")
      ->capture_default_str();
  app.add_option("--delta1", delta1, "window margin at the center end")
      ->envname("HAMTRI_DELTA1")
      ->capture_default_str();
  app.add_option("--delta2", delta2, "window margin at the outer end")
      ->envname("HAMTRI_DELTA2")
      ->capture_default_str();

  double h = -2.0;
  std::vector<double> greek_v, mu_v, targets_v{-3.98, -3.95, -3.90}, eps_v;
  bool have_h = false;

  std::vector<CLI::App*> subs;
  // Single-char long options collide with the default "-h" help shorthand in
  // the bundled argument parser, so subcommands taking --h keep only --help.
  auto* oval = app.add_subcommand("oval", "level oval extent");
  subs.push_back(oval);
  oval->set_help_flag("--help", "print this help message and exit");
  oval->add_option("--h", h, "level in (-4, 0)")->required();

  auto* integrals = app.add_subcommand("integrals", "basis integrals and their reductions");
  subs.push_back(integrals);
  integrals->set_help_flag("--help", "print this help message and exit");
  integrals->add_option("--h", h, "level in (-4, 0)")->required();

  auto* pf = app.add_subcommand("pf-check", "derivative-system residuals");
  subs.push_back(pf);
  int pf_n = 200;
  pf->add_option("--grid-n", pf_n, "grid resolution")->capture_default_str();
  double pf_tol = 1e-6;
  pf->add_option("--res-tol", pf_tol, "acceptance residual bound")->capture_default_str();

  auto* ratio = app.add_subcommand("ratio-check", "derivative-ratio bounds and limits");
  subs.push_back(ratio);
  int ratio_n = 500;
  ratio->add_option("--grid-n", ratio_n, "grid resolution")->capture_default_str();

  auto* poly = app.add_subcommand("poly-verify", "exact polynomial identity battery");
  subs.push_back(poly);

  auto* jeval = app.add_subcommand("j-eval", "evaluate the principal displacement part");
  subs.push_back(jeval);
  jeval->set_help_flag("--help", "print this help message and exit");
  jeval->add_option("--greek", greek_v, "lambda,sigma,gamma,kappa")->delimiter(',');
  jeval->add_option("--mu", mu_v, "mu1,mu2,mu3,mu4")->delimiter(',');
  auto* jeval_h = jeval->add_option("--h", h, "single level to evaluate");
  int jeval_n = 100;
  jeval->add_option("--grid-n", jeval_n, "grid resolution when no level is given")
      ->capture_default_str();

  auto* cz = app.add_subcommand("count-zeros", "count zeros of the displacement part");
  subs.push_back(cz);
  cz->add_option("--greek", greek_v, "lambda,sigma,gamma,kappa")->delimiter(',');
  cz->add_option("--mu", mu_v, "mu1,mu2,mu3,mu4")->delimiter(',');
  int cz_n = 2000;
  cz->add_option("--grid-n", cz_n, "scan resolution")->capture_default_str();

  auto* ect = app.add_subcommand("ect", "determinant ladder on the empirical window");
  subs.push_back(ect);
  int ect_n = 400;
  double ect_margin = 0.01, ect_s1 = 0.01;
  ect->add_option("--n", ect_n, "grid resolution")->capture_default_str();
  ect->add_option("--margin", ect_margin, "window margin")->capture_default_str();
  ect->add_option("--s1", ect_s1, "step for the center-limit extrapolation")
      ->capture_default_str();

  auto* ft = app.add_subcommand("find-three", "construct a three-zero parameter direction");
  subs.push_back(ft);
  ft->add_option("--targets", targets_v, "three target levels in (-4, 0)")->delimiter(',');
  int ft_n = 4000;
  ft->add_option("--grid-n", ft_n, "verification resolution")->capture_default_str();

  auto* sc = app.add_subcommand("scan", "randomized zero-count scan over parameter strata");
  subs.push_back(sc);
  int sc_n = 10000;
  std::uint64_t sc_seed = 20240901ull;
  int sc_grid = 800;
  sc->add_option("--n", sc_n, "number of sampled directions")->capture_default_str();
  sc->add_option("--seed", sc_seed, "counter generator seed")->capture_default_str();
  sc->add_option("--grid-n", sc_grid, "zero-count resolution per sample")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "integrate the perturbed field and count cycles");
  subs.push_back(sim);
  sim->add_option("--eps", eps_v, "e0,e1,e2,e3,e4 perturbation coefficients")->delimiter(',');
  sim->add_option("--mu", mu_v, "mu1,mu2,mu3,mu4 target direction, realized via a gauge")
      ->delimiter(',');
  double sim_delta = 1e-2;
  sim->add_option("--delta", sim_delta, "realization scale when --mu is given")
      ->capture_default_str();
  auto* sim_t = sim->add_option("--t", h, "single section parameter in (0, 1/3)");
  int sim_res = 48;
  sim->add_option("--resolution", sim_res, "section grid for cycle counting")
      ->capture_default_str();

  auto* acc = app.add_subcommand("acceptance", "run the acceptance criteria");
  subs.push_back(acc);
  int acc_crit = 0;
  acc->add_option("--criterion", acc_crit, "run a single criterion 1..8 (default: all)")
      ->check(CLI::Range(1, 8));
  int acc_scan_n = 10000;
  acc->add_option("--scan-n", acc_scan_n, "sample count for the scan criterion")
      ->capture_default_str();

  auto* rep = app.add_subcommand("report", "aggregate prior run artifacts");
  subs.push_back(rep);
  std::string rep_in;
  rep->add_option("--in", rep_in, "directory holding artifacts (default: --out)");

  for (auto* s : subs) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto pick_greek = [&]() -> GreekParams {
    if (!greek_v.empty() && !mu_v.empty())
      throw std::invalid_argument("give either --greek or --mu, not both");
    if (!greek_v.empty()) {
      auto v = detail::parse_fixed(greek_v, 4, "--greek");
      return {v[0], v[1], v[2], v[3]};
    }
    if (!mu_v.empty()) {
      auto v = detail::parse_fixed(mu_v, 4, "--mu");
      return greek_from_mu({v[0], v[1], v[2], v[3]});
    }
    throw std::invalid_argument("a parameter direction is required: --greek or --mu");
  };

  try {
    if (oval->parsed()) return cmd_oval(h, out);
    if (integrals->parsed()) return cmd_integrals(h, tol, out);
    if (pf->parsed()) return cmd_pf_check(pf_n, pf_tol, out);
    if (ratio->parsed()) return cmd_ratio_check(ratio_n, out);
    if (poly->parsed()) return cmd_poly_verify(out);
    if (jeval->parsed()) {
      have_h = jeval_h->count() > 0;
      return cmd_j_eval(pick_greek(), have_h, h, jeval_n, out);
    }
    if (cz->parsed()) return cmd_count_zeros(pick_greek(), delta1, delta2, cz_n, out);
    if (ect->parsed()) return cmd_ect(ect_n, ect_margin, ect_s1, out);
    if (ft->parsed()) {
      auto v = detail::parse_fixed(targets_v, 3, "--targets");
      return cmd_find_three(v, delta1, delta2, ft_n, out);
    }
    if (sc->parsed()) return cmd_scan(sc_n, sc_seed, delta1, delta2, sc_grid, out);
    if (sim->parsed()) {
      EpsVector eps;
      if (!eps_v.empty() && !mu_v.empty())
        throw std::invalid_argument("give either --eps or --mu, not both");
      if (!eps_v.empty()) {
        auto v = detail::parse_fixed(eps_v, 5, "--eps");
        eps.e0 = v[0];
        eps.e1 = v[1];
        eps.e2 = v[2];
        eps.e3 = v[3];
        eps.e4 = v[4];
      } else if (!mu_v.empty()) {
        auto v = detail::parse_fixed(mu_v, 4, "--mu");
        eps = eps_from_mu({v[0], v[1], v[2], v[3]}, sim_delta);
      } else {
        throw std::invalid_argument("a perturbation is required: --eps or --mu");
      }
      return cmd_simulate(eps, sim_t->count() > 0, h, sim_res, rtol, out);
    }
    if (acc->parsed()) return cmd_acceptance(acc_crit, acc_scan_n, out);
    if (rep->parsed()) return cmd_report(rep_in.empty() ? out.dir : rep_in, out);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "error: no subcommand\n");
  return 2;
}

inline int dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("hamtri");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cli
}  // namespace hamtri
