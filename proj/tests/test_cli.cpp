#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamtri/cli.hpp"
#include "hamtri/cyclicity.hpp"

using namespace hamtri;
using json = nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("hamtri_cli_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load(const std::filesystem::path& p) { return json::parse(slurp(p)); }

int run(std::vector<std::string> args) { return cli::dispatch(std::move(args)); }

}  // namespace

TEST_CASE("oval subcommand writes a passing artifact with the closed-form roots") {
  auto dir = fresh_dir("oval");
  REQUIRE(run({"oval", "--h", "-2", "--out", dir.string()}) == 0);

  json a = load(dir / "oval.json");
  CHECK(a["schema_version"] == "1");
  CHECK(a["command"] == "oval");
  CHECK(a["pass"] == true);
  CHECK(a["x1"].get<double>() == Catch::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-12));
  CHECK(a["x2"].get<double>() == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(!a["checks"].empty());
  for (const auto& c : a["checks"]) {
    CHECK(!c["anchor"].get<std::string>().empty());
    CHECK(c["pass"] == true);
  }
}

TEST_CASE("identical configuration reproduces byte-identical artifacts") {
  auto d1 = fresh_dir("det1");
  auto d2 = fresh_dir("det2");
  std::vector<std::string> base = {"count-zeros", "--greek", "0,-144,0,0"};
  auto a1 = base;
  a1.insert(a1.end(), {"--out", d1.string()});
  auto a2 = base;
  a2.insert(a2.end(), {"--out", d2.string()});
  REQUIRE(run(a1) == 0);
  REQUIRE(run(a2) == 0);
  CHECK(slurp(d1 / "count-zeros.json") == slurp(d2 / "count-zeros.json"));

  json a = load(d1 / "count-zeros.json");
  CHECK(a["report"]["count"].get<int>() <= 3);
  CHECK(a["report"]["zeros"].is_array());
}

TEST_CASE("csv format writes a header row with full-precision scientific values") {
  auto dir = fresh_dir("csv");
  REQUIRE(run({"oval", "--h", "-2", "--format", "csv", "--out", dir.string()}) == 0);

  std::ifstream f(dir / "oval.csv");
  REQUIRE(f.good());
  std::string header, row;
  REQUIRE(std::getline(f, header));
  REQUIRE(std::getline(f, row));
  CHECK(header == "h,x1,x2,x3,height_mid");

  std::istringstream rs(row);
  std::vector<double> vals;
  std::string cell;
  while (std::getline(rs, cell, ',')) vals.push_back(std::stod(cell));
  REQUIRE(vals.size() == 5);
  CHECK(vals[0] == -2.0);
  CHECK(vals[1] == Catch::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-14));
  // A plain "%.17e" round-trips doubles exactly.
  CHECK(row.find("e+") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  auto dir = fresh_dir("usage");
  CHECK(run({"bogus"}) == 2);
  CHECK(run({"oval", "--out", dir.string()}) == 2);
  CHECK(run({"oval", "--h", "-5", "--out", dir.string()}) == 2);
  CHECK(run({"j-eval", "--greek", "1,2,3", "--out", dir.string()}) == 2);
  CHECK(run({"j-eval", "--greek", "1,0,0,0", "--mu", "1,0,0,0", "--h", "-2",
             "--out", dir.string()}) == 2);
  CHECK(run({"count-zeros", "--out", dir.string()}) == 2);
}

TEST_CASE("a failing check exits with code 1 and records pass false") {
  auto dir = fresh_dir("fail");
  CHECK(run({"pf-check", "--grid-n", "10", "--res-tol", "1e-30", "--out", dir.string()}) == 1);
  json a = load(dir / "pf-check.json");
  CHECK(a["pass"] == false);
}

TEST_CASE("j-eval accepts either parameter spelling and echoes the conversion") {
  auto dir = fresh_dir("jeval");
  REQUIRE(run({"j-eval", "--mu", "0,1,0,0", "--h", "-2", "--out", dir.string()}) == 0);
  json a = load(dir / "j-eval.json");

  GreekParams g = greek_from_mu({0.0, 1.0, 0.0, 0.0});
  CHECK(a["config"]["greek"]["lambda"].get<double>() == Catch::Approx(g.lambda));
  CHECK(a["config"]["greek"]["kappa"].get<double>() == Catch::Approx(g.kappa));
  CHECK(a["mu_equivalent"]["mu2"].get<double>() == Catch::Approx(1.0));

  REQUIRE(a["grid"].size() == 1);
  double v = a["grid"][0]["J"].get<double>();
  CHECK(v == Catch::Approx(J_eval(-2.0, g)).epsilon(1e-12));
}

TEST_CASE("report aggregates artifacts and errors when the directory has none") {
  auto dir = fresh_dir("report");
  REQUIRE(run({"oval", "--h", "-2", "--out", dir.string()}) == 0);
  REQUIRE(run({"poly-verify", "--out", dir.string()}) == 0);
  REQUIRE(run({"report", "--in", dir.string(), "--out", dir.string()}) == 0);

  json a = load(dir / "report.json");
  CHECK(a["schema_version"] == "1");
  REQUIRE(a["sources"].size() == 2);
  for (const auto& s : a["sources"]) {
    CHECK(s["pass"] == true);
    for (const auto& c : s["checks"]) CHECK(!c["anchor"].get<std::string>().empty());
  }

  auto empty = fresh_dir("report_empty");
  CHECK(run({"report", "--in", empty.string(), "--out", empty.string()}) == 1);
}

TEST_CASE("output directory honors the environment override") {
  auto dir = fresh_dir("envout");
  setenv("HAMTRI_OUT", dir.string().c_str(), 1);
  int rc = run({"oval", "--h", "-2"});
  unsetenv("HAMTRI_OUT");
  REQUIRE(rc == 0);
  CHECK(std::filesystem::exists(dir / "oval.json"));
}

TEST_CASE("scan summary records per-stratum maxima and the three-zero witness") {
  auto dir = fresh_dir("scan");
  REQUIRE(run({"scan", "--n", "200", "--out", dir.string()}) == 0);
  json a = load(dir / "scan.json");
  REQUIRE(a["strata"].is_array());
  bool saw_witness = false;
  int global_max = 0;
  for (const auto& s : a["strata"]) {
    int m = s["max_count"].get<int>();
    global_max = std::max(global_max, m);
    if (m == 3) saw_witness = true;
    CHECK(s["suspects"].get<int>() == 0);
  }
  CHECK(global_max <= 3);
  CHECK(saw_witness);
}
