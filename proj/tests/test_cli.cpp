#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "radint/cli.hpp"

using Catch::Approx;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "radint");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = radint::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(RADINT_SAMPLES_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("radint_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) { std::ofstream(path) << text; }

// Runs the installed executable through the shell; returns its exit status.
int run_binary(const std::string& args, const std::filesystem::path& stdout_file) {
  const std::string cmd = std::string(RADINT_CLI_PATH) + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("verify runs a suite and reports success", "[cli][verify]") {
  const Run r = run({"verify", "--suite", "homological", "--n-points", "50", "--no-timestamp"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["config"]["n_points"] == 50);
  CHECK_FALSE(j.contains("timestamp"));
}

TEST_CASE("verify rejects bad arguments with the usage status", "[cli][verify]") {
  CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
  CHECK(run({"verify", "--n-points", "0"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify reports are reproducible", "[cli][verify]") {
  const std::vector<std::string> args{"verify", "--suite", "brackets", "--n-points", "40", "--seed", "9"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = args;
    a.insert(a.end(), extra.begin(), extra.end());
    return run(a);
  };
  const Run one = with({"--no-timestamp", "--jobs", "1"});
  const Run four = with({"--no-timestamp", "--jobs", "4"});
  CHECK(one.out == four.out);
  CHECK(json::parse(with({}).out).contains("timestamp"));
}

TEST_CASE("verify reads a TOML configuration", "[cli][verify]") {
  const auto cfg = scratch("verify.toml");
  write_file(cfg, "[verify]\nsuite = \"averages\"\nn-points = 20\nseed = 3\nno-timestamp = true\n");
  const Run r = run({"--config", cfg.string(), "verify"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["config"]["suite"] == "averages");
  CHECK(j["config"]["n_points"] == 20);
  CHECK(j["seed"] == 3);
}

TEST_CASE("propagate a circular Kepler orbit from the sample file", "[cli][propagate]") {
  const Run r = run({"propagate", "--state", sample("circular_kepler.json"), "--periods", "2", "--samples", "21"});
  REQUIRE(r.code == 0);
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,x,y,z,vx,vy,vz,H,Theta,N");
  int rows = 0;
  double worst = 0;
  while (std::getline(csv, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 10);
    worst = std::max(worst, std::abs(std::hypot(v[1], v[2], v[3]) - 1.2));
    ++rows;
  }
  CHECK(rows == 21);
  CHECK(worst < 1e-10);
}

TEST_CASE("propagate conserves energy on the LEO orbit", "[cli][propagate]") {
  const Run r = run({"propagate", "--state", sample("leo.json"), "--periods", "10", "--output", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["energy_drift"].get<double>() <= 1e-10);
  CHECK(r.err.find("ok") != std::string::npos);
}

TEST_CASE("propagate the intermediary", "[cli][propagate]") {
  const Run r = run({"propagate", "--model", "intermediary", "--order", "3", "--state", sample("molniya_delaunay.json"),
                     "--periods", "2", "--output", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["Theta_drift"].get<double>() <= 1e-11);
}

TEST_CASE("propagate diagnoses missing and malformed state files", "[cli][propagate]") {
  const Run missing = run({"propagate", "--state", "/nonexistent/state.json"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/nonexistent/state.json") != std::string::npos);

  const auto bad = scratch("bad.json");
  write_file(bad, "{\n  \"keplerian\": {\"a\": 1.1,\n  \"e\": }\n}\n");
  const Run malformed = run({"propagate", "--state", bad.string()});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("line 3") != std::string::npos);

  const auto incomplete = scratch("incomplete.json");
  write_file(incomplete, R"({"keplerian": {"a": 1.1, "e": 0.1, "i_deg": 30, "raan_deg": 0, "argp_deg": 0}})");
  const Run field = run({"propagate", "--state", incomplete.string()});
  CHECK(field.code == 2);
  CHECK(field.err.find("keplerian.M_deg") != std::string::npos);
}

TEST_CASE("compare needs at least two sweep values", "[cli][compare]") {
  CHECK(run({"compare", "--c20", "1e-3"}).code == 2);
  CHECK(run({"compare", "--orders", "3"}).code == 2);
}

TEST_CASE("compare at first order recovers the quadratic error law", "[cli][compare]") {
  const Run r = run({"compare", "--orders", "1", "--c20", "1e-3,1e-4,1e-5", "--periods", "10", "--no-timestamp"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["fits"].size() == 1);
  CHECK(j["fits"][0]["order"] == 1);
  CHECK(j["fits"][0]["exponent"].get<double>() == Approx(2.0).margin(0.2));
  CHECK(j["cells"].size() == 3);
  CHECK(j["metadata"]["orders"] == json::array({1}));
}

TEST_CASE("compare with two orders emits one fit per order", "[cli][compare]") {
  const Run r = run({"compare", "--orders", "1,2", "--c20", "1e-3,1e-4", "--periods", "1", "--no-timestamp"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["fits"].size() == 2);
  CHECK(j["fits"][0]["order"] == 1);
  CHECK(j["fits"][1]["order"] == 2);
  CHECK(j["cells"].size() == 4);
}

TEST_CASE("terms dumps the registry", "[cli][terms]") {
  const Run all = run({"terms"});
  REQUIRE(all.code == 0);
  CHECK(json::parse(all.out).size() == 29);
  const Run main = run({"terms", "--family", "MAIN"});
  for (const auto& t : json::parse(main.out)) CHECK(t["family"] == "MAIN");
  const Run csv = run({"terms", "--family", "PERIGEE", "--order", "2", "--output", "csv"});
  CHECK(csv.out.rfind("name,family,order,kind,chart\n", 0) == 0);
}

TEST_CASE("average matches the closed forms", "[cli][average]") {
  const Run h = run({"average", "--term", "Htilde01", "--a", "1.3", "--e", "0.2", "--i-deg", "50"});
  REQUIRE(h.code == 0);
  const json jh = json::parse(h.out);
  CHECK(jh["value"].get<double>() == Approx(jh["closed_form"].get<double>()).epsilon(1e-12));

  const Run chi = run({"average", "--term", "CHI_BROUWER", "--a", "1.3", "--e", "0.3", "--i-deg", "45",
                       "--argp-deg", "40", "--nodes", "256"});
  REQUIRE(chi.code == 0);
  const json jc = json::parse(chi.out);
  CHECK(jc["value"].get<double>() == Approx(jc["closed_form"].get<double>()).epsilon(1e-10));
  CHECK(run({"average", "--term", "W1_NEUTRAL_POLAR"}).code == 2);
  CHECK(run({"average", "--term", "NOPE"}).code == 2);
}

TEST_CASE("the executable honours the exit-code contract", "[cli][binary]") {
  const auto out = scratch("stdout.txt");
  CHECK(run_binary("--config " + sample("verify.toml") + " verify --n-points 100", out) == 0);
  CHECK(json::parse(slurp(out))["passed"] == true);
  CHECK(run_binary("verify --suite nonsense", out) == 2);
  CHECK(run_binary("propagate --state /nonexistent.json", out) == 2);

  const auto out2 = scratch("stdout2.txt");
  CHECK(run_binary("verify --suite averages --n-points 30 --no-timestamp --jobs 1", out) == 0);
  CHECK(run_binary("verify --suite averages --n-points 30 --no-timestamp --jobs 3", out2) == 0);
  CHECK(slurp(out) == slurp(out2));
}
