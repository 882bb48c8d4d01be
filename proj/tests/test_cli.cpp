#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lagtori/cli.hpp"
#include "lagtori/grid_io.hpp"

using namespace lagtori;
namespace fs = std::filesystem;

namespace {

RunConfig config(const std::string& command, std::vector<int> ns, int d) {
  RunConfig c;
  c.command = command;
  c.n_list = std::move(ns);
  c.d = d;
  return c;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("lagtori_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("toy command") {
  std::ostringstream out, err;
  CHECK(run(config("toy", {1, 2, 4, 8}, 1), out, err) == kExitOk);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,resolution,min_dphi,max_dphi,lhs,rhs,satisfied,c0_phi,holder_phi");
  std::getline(in, line);
  CHECK(line.rfind("1,256,-1.4999999", 0) == 0);
  CHECK(out.str().find("# slope(c0_phi) target -1") != std::string::npos);

  std::ostringstream o2, e2;
  CHECK(run(config("toy", {}, 1), o2, e2) == kExitUsage);
  CHECK(e2.str().find("usage error") != std::string::npos);

  auto js = config("toy", {1}, 1);
  js.format = "json";
  std::ostringstream o3, e3;
  CHECK(run(js, o3, e3) == kExitOk);
  const auto j = nlohmann::json::parse(o3.str());
  CHECK(j["rows"][0]["satisfied"] == true);
  CHECK(j["slopes"][0]["measured"].is_null());
}

TEST_CASE("toy c0 slope over n = 2..256") {
  std::ostringstream out, err;
  CHECK(run(config("toy", {2, 4, 8, 16, 32, 64, 128, 256}, 1), out, err) == kExitOk);
  CHECK(out.str().find("# slope(c0_phi) target -1 measured -1.00") != std::string::npos);
  CHECK(out.str().find("tol 0.05 pass") != std::string::npos);
}

TEST_CASE("usage errors") {
  std::ostringstream out, err;
  auto c = config("toy", {1}, 1);
  c.format = "xml";
  CHECK(run(c, out, err) == kExitUsage);
  c = config("toy", {0}, 1);
  CHECK(run(c, out, err) == kExitUsage);
  c = config("sweep", {8}, 2);
  c.resolution = 100;
  CHECK(run(c, out, err) == kExitUsage);
  CHECK(run(config("graphsearch", {1}, 2), out, err) == kExitUsage);
  CHECK(run(config("bogus", {1}, 1), out, err) == kExitUsage);
  c = config("sweep", {8}, 2);
  c.eps = 0.3;
  CHECK(run(c, out, err) == kExitUsage);
}

TEST_CASE("sweep command") {
  SUBCASE("single n gives NaN slopes and a warning") {
    auto c = config("sweep", {8}, 2);
    c.resolution = 256;
    std::ostringstream out, err;
    CHECK(run(c, out, err) == kExitOk);
    CHECK(err.str().find("warning") != std::string::npos);
    CHECK(out.str().find("measured nan") != std::string::npos);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "n,m,N,resolution,R_n,minus_amplitude,cr_T_10,max_p,min_p,cr_p_0,cr_p_1,cr_p_2,cr_p_3,"
          "cr_psi_0,cr_psi_1,cr_psi_2,cr_psi_3,lhs,rhs,satisfied,asymptotic_satisfied");
  }
  SUBCASE("unreachable sigma is a numerical failure") {
    auto c = config("sweep", {8}, 2);
    c.resolution = 256;
    c.sigma = 1e-12;
    std::ostringstream out, err;
    CHECK(run(c, out, err) == kExitNumerical);
  }
  SUBCASE("json and file output") {
    auto c = config("sweep", {8, 4}, 2);
    c.resolution = 256;
    c.format = "json";
    c.out = scratch("sweep") / "s.json";
    std::ostringstream out, err;
    CHECK(run(c, out, err) == kExitOk);
    CHECK(out.str().empty());
    std::ifstream f(c.out);
    const auto j = nlohmann::json::parse(f);
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0]["n"] == 4);
    CHECK(j["rows"][1]["n"] == 8);
  }
}

TEST_CASE("construct command") {
  auto c = config("construct", {4}, 2);
  c.resolution = 256;
  c.out = scratch("construct");
  std::ostringstream out, err;
  const int code = run(c, out, err);
  std::ifstream f(c.out / "criterion.json");
  REQUIRE(f);
  const auto j = nlohmann::json::parse(f);
  CHECK(code == (j["satisfied"].get<bool>() ? kExitOk : kExitUnsatisfied));
  CHECK(j["construction"]["resolution"] == 256);
  for (const char* name : {"t_tilde", "p_tilde", "psi_tilde"}) {
    CHECK(fs::exists(c.out / (std::string(name) + ".csv")));
    const auto g = load_binary(c.out / (std::string(name) + ".bin"));
    CHECK(g.resolution() == 256);
    CHECK(g.dims() == 2);
  }
  CHECK(out.str().rfind(CriterionReport::csv_header(), 0) == 0);

  c.n_list = {4, 8};
  CHECK(run(c, out, err) == kExitUsage);
}

TEST_CASE("graphsearch command") {
  auto c = config("graphsearch", {1}, 1);
  c.omegas = 4;
  c.format = "json";
  std::ostringstream out, err;
  CHECK(run(c, out, err) == kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["reports"].size() == 4);
  CHECK(j["summary"]["converged"] == 0);
  CHECK(j["summary"]["exceeding_mm"] == 4);
  CHECK(j["control"]["converged"] == true);

  c.format = "csv";
  std::ostringstream o2;
  CHECK(run(c, o2, err) == kExitOk);
  CHECK(o2.str().find("# summary attempted 4 converged 0 exceeding_mm 4") != std::string::npos);
}

TEST_CASE("sweep output is reproducible") {
  auto c = config("sweep", {4, 8}, 2);
  c.resolution = 256;
  std::ostringstream a, b, err;
  CHECK(run(c, a, err) == kExitOk);
  CHECK(run(c, b, err) == kExitOk);
  CHECK(a.str() == b.str());
}
