#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "support/tempdir.hpp"

using nonml::testing::TempDir;
namespace fs = std::filesystem;

namespace {

const fs::path toy_dir = NONML_TOY_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + NONML_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string arg(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string common(const TempDir& out, const std::string& spec) {
  return "--manifest " + arg(toy_dir / "manifest.json") + " --spec " + arg(spec) + " --out " + arg(out.path());
}

}  // namespace

TEST_CASE("transform writes the labelled toy matrices") {
  TempDir out;
  REQUIRE(run("transform --manifest " + arg(toy_dir / "manifest.json") + " --out " + arg(out.path())) == 0);
  CHECK(slurp(out.path() / "W.csv") == ",s|u,s|v,u|v\ni,1,0,1\nj,1,1,0\nk,0,1,0\n");
  CHECK(slurp(out.path() / "Y.csv") == ",i,j,k\ni,0,1,0\nj,1,0,1\nk,0,1,0\n");
  CHECK(slurp(out.path() / "Q.csv") == ",s|u,s|v,u|v\ns|u,0,1,1\ns|v,1,0,1\nu|v,1,1,0\n");
  CHECK(slurp(out.path() / "D.csv") == "pair,D\ns|u,1\ns|v,0\nu|v,0\n");
  const auto log = nlohmann::json::parse(slurp(out.path() / "run_log.json"));
  CHECK(log["status"] == "ok");
  CHECK(log["exit_code"] == 0);
}

TEST_CASE("stats agree between a manifest and a transform directory") {
  TempDir a, b, net;
  const auto spec = (toy_dir / "stats.json").string();
  REQUIRE(run("transform --manifest " + arg(toy_dir / "manifest.json") + " --out " + arg(net.path())) == 0);
  REQUIRE(run("stats " + common(a, spec)) == 0);
  REQUIRE(run("stats --manifest " + arg(net.path()) + " --spec " + arg(spec) + " --out " + arg(b.path())) == 0);
  CHECK(first_line(a.path() / "stats.csv") == "statistic,value");
  CHECK(slurp(a.path() / "stats.csv") == slurp(b.path() / "stats.csv"));
}

TEST_CASE("failures return coded exits and still log") {
  TempDir out;
  const auto empty = out.write("empty.json", "[]");
  CHECK(run("stats " + common(out, empty.string())) == 20);
  auto log = nlohmann::json::parse(slurp(out.path() / "run_log.json"));
  CHECK(log["status"] == "error");
  CHECK(log["exit_code"] == 20);
  CHECK(log["error"]["message"].get<std::string>().find("no statistics requested") != std::string::npos);

  CHECK(run("simulate " + common(out, (toy_dir / "model.json").string())) == 20);
  CHECK(run("stats --manifest " + arg(out.path() / "absent.json") + " --spec " + arg(toy_dir / "stats.json") + " --out " +
            arg(out.path())) == 10);
  CHECK(run("frobnicate --out " + arg(out.path())) == 2);
  log = nlohmann::json::parse(slurp(out.path() / "run_log.json"));
  CHECK(log["exit_code"] == 2);
}

TEST_CASE("simulate is reproducible across thread counts") {
  TempDir a, b, c;
  const auto spec = a.write("model.json", R"({"effects": [{"name": "XEdge", "theta": -0.5}, {"name": "EdgeA", "theta": 0.2}],
    "free_layers": ["W", "Y"], "M": 50, "chains": 4})");
  REQUIRE(run("simulate " + common(a, spec.string()) + " --seed 11 --threads 1") == 0);
  REQUIRE(run("simulate " + common(b, spec.string()) + " --seed 11 --threads 4") == 0);
  REQUIRE(run("simulate " + common(c, spec.string()) + " --seed 12 --threads 1") == 0);
  const auto first = slurp(a.path() / "stat_matrix.csv");
  CHECK(first_line(a.path() / "stat_matrix.csv") == "XEdge,EdgeA");
  CHECK(first == slurp(b.path() / "stat_matrix.csv"));
  CHECK(first != slurp(c.path() / "stat_matrix.csv"));
}

TEST_CASE("estimate feeds gof") {
  TempDir est, fit;
  REQUIRE(run("estimate " + common(est, (toy_dir / "model.json").string()) + " --seed 3") == 0);
  CHECK(first_line(est.path() / "estimates.csv") == "effect,parameter,stderr,significant");
  const auto result = nlohmann::json::parse(slurp(est.path() / "fit.json"));
  CHECK(result["effects"].size() == 2);
  CHECK(result.contains("converged"));
  const auto fitted = nlohmann::json::parse(slurp(est.path() / "fitted_spec.json"));
  CHECK(fitted["effects"][0]["theta"] == result["effects"][0]["theta_hat"]);

  REQUIRE(run("gof " + common(fit, (est.path() / "fitted_spec.json").string()) + " --seed 5 --samples 200") == 0);
  CHECK(first_line(fit.path() / "gof.csv") == "statistic,observed,mean,sd,t-ratio");
}

TEST_CASE("direct writes multiplex and ALAAM tables") {
  TempDir out;
  REQUIRE(run("direct " + common(out, (toy_dir / "model.json").string())) == 0);
  CHECK(first_line(out.path() / "multiplex.csv") ==
        "reporter_i,reporter_j,entrainment,exchange,entrainment_gated,exchange_gated");
  CHECK(first_line(out.path() / "alaam.csv") == "pair,reporter,observed,probability");
}
