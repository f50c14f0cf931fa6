#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"
#include "frf/divergences.hpp"
#include "frf/presets.hpp"

using namespace frf;
using frf::cli::RunConfig;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "frf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("frf_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::vector<double>> parse_rows(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("config json round trip") {
  RunConfig c;
  c.command = "geodesic";
  c.n = 128;
  c.alpha = {0.25, -1.0};
  c.t_final = 0.3;
  c.u0 = "trig:0,0.1";
  c.theta = {0.1};
  c.seed = 7;
  CHECK(cli::config_from_json(nlohmann::json::parse(cli::config_to_json(c).dump())) == c);
  // A full sidecar is accepted as well.
  nlohmann::json sidecar = {{"schema", 1}, {"config", cli::config_to_json(c)}};
  CHECK(cli::config_from_json(sidecar) == c);
}

TEST_CASE("config json rejects unknown keys and bad types") {
  CHECK_THROWS_AS(cli::config_from_json(nlohmann::json{{"bogus", 1}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(nlohmann::json{{"n", "many"}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(nlohmann::json::array()), cli::ConfigError);
}

TEST_CASE("resolve fills defaults and rejects bad values") {
  RunConfig c;
  c.command = "divergence";
  CHECK_THROWS_AS(cli::resolve(c), cli::ConfigError);  // densities are required
  c.rho1 = "bump";
  c.rho2 = "tilt";
  const RunConfig r = cli::resolve(c);
  CHECK(r.n == 256);
  CHECK(r.alpha == std::vector<double>{-1.0, 0.0, 1.0});
  c.alpha = {1.5};
  CHECK_THROWS_AS(cli::resolve(c), cli::ConfigError);
  RunConfig g;
  g.command = "geodesic";
  g.method = "closed-form";
  g.alpha = {0.5};
  CHECK_THROWS_AS(cli::resolve(g), cli::ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"divergence", "--n", "64", "--rho1", "bump", "--rho2", "tilt"}).code ==
        cli::kExitOk);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
  CHECK(invoke({}).code == cli::kExitConfig);
  CHECK(invoke({"divergence", "--frobnicate"}).code == cli::kExitConfig);
  const Result bad_alpha = invoke({"divergence", "--alpha", "2", "--rho1", "bump", "--rho2", "tilt"});
  CHECK(bad_alpha.code == cli::kExitConfig);
  CHECK(bad_alpha.err.find("alpha") != std::string::npos);
  CHECK(invoke({"validate", "--suite", "nope"}).code == cli::kExitConfig);
  CHECK(invoke({"geodesic", "--u0", "trig:1,x"}).code == cli::kExitConfig);
  // A valid configuration whose closed form degenerates during the run.
  const Result degenerate = invoke({"geodesic", "--alpha", "1", "--method", "closed-form",
                                    "--a", "trig:0,40", "--t-final", "0.5"});
  CHECK(degenerate.code == cli::kExitFailure);
  CHECK_FALSE(degenerate.err.empty());
}

TEST_CASE("divergence output matches the library bit for bit") {
  const Result r = invoke({"divergence", "--n", "64", "--rho1", "bump", "--rho2", "tilt",
                           "--alpha", "-1,0.5,1"});
  REQUIRE(r.code == 0);
  const auto rows = parse_rows(r.out);
  REQUIRE(rows.size() == 3);
  const PeriodicGrid g(64);
  const Density p = parse_density_spec("bump", g), q = parse_density_spec("tilt", g);
  for (const auto& row : rows) {
    CHECK(row[1] == alpha_divergence(p, q, AlphaParam(row[0])));
  }
}

TEST_CASE("geodesic from zero data stays at zero") {
  const Result r = invoke({"geodesic", "--n", "32", "--u0", "zero", "--t-final", "0.1",
                           "--dt", "0.01"});
  REQUIRE(r.code == 0);
  const auto rows = parse_rows(r.out);
  REQUIRE_FALSE(rows.empty());
  for (const auto& row : rows) CHECK(row.back() == 0.0);
}

TEST_CASE("alpha = 1 integration agrees with the closed form") {
  const Result r = invoke({"geodesic", "--alpha", "1", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("closed_form_max_abs_du").get<double>() <= 1e-5);
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("data").at("rows").size() > 0);
}

TEST_CASE("rerunning from a sidecar reproduces the output") {
  const auto dir = scratch_dir();
  const std::string first = (dir / "first.csv").string();
  const std::string second = (dir / "second.csv").string();
  REQUIRE(invoke({"geodesic", "--alpha", "0.5", "--n", "64", "--t-final", "0.2", "--out",
                  first})
              .code == 0);
  REQUIRE(std::filesystem::exists(first + ".json"));
  REQUIRE(invoke({"geodesic", "--config", first + ".json", "--out", second}).code == 0);
  CHECK(slurp(first) == slurp(second));
  const auto sidecar = nlohmann::json::parse(slurp(first + ".json"));
  CHECK(sidecar.at("config").at("alpha") == nlohmann::json::array({0.5}));
  // A config for another command is refused.
  CHECK(invoke({"divergence", "--config", first + ".json"}).code == cli::kExitConfig);
  std::filesystem::remove_all(dir);
}

TEST_CASE("the installed binary runs end to end") {
  const std::string cmd = std::string("\"") + FRF_BINARY +
                          "\" divergence --n 32 --alpha 0 --rho1 uniform --rho2 uniform";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) text += buf;
  CHECK(::pclose(pipe) == 0);
  CHECK(text == "alpha,divergence\n0,0\n");
}
