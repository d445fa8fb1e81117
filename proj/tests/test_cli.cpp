#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gossip/cli.hpp"

using namespace gossip;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = fs::path("cli_cases") / name;
  fs::create_directories(p.parent_path());
  std::ofstream(p) << body;
  return p;
}

const char* kMinimal = R"({"n": 100, "m": 2, "T": 10, "algorithm": "disc-adopt", "beta": 0.5,
  "reward": "bernoulli", "means": [0.8, 0.3], "seed": 4, "seeds": 2})";

}  // namespace

TEST_CASE("run writes one CSV per seed with T+1 rows") {
  const auto cfg = write_config("minimal.json", kMinimal);
  fs::remove_all("cli_out/minimal");
  const auto r = cli({"run", "--config", cfg.string(), "--output", "cli_out/minimal"});
  REQUIRE(r.code == 0);
  std::vector<fs::path> csvs;
  for (const auto& e : fs::directory_iterator("cli_out/minimal")) {
    if (e.path().filename() != "summary.csv") csvs.push_back(e.path());
  }
  REQUIRE(csvs.size() == 2);
  for (const auto& p : csvs) {
    const auto rows = lines(slurp(p));
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == run_csv_header(2));
    CHECK(rows[0] == "run_id,seed,t,p_0,p_1,q_0,q_1,reward_dot_p,inst_regret,cum_regret,l1_pq");
    for (const auto& row : rows) CHECK(fields(row) == fields(rows[0]));
  }
  const auto summary = lines(slurp("cli_out/minimal/summary.csv"));
  REQUIRE(summary.size() == 2);
  CHECK(summary[0] == kSummaryHeader);
  CHECK(fields(summary[1]) == fields(kSummaryHeader));
}

TEST_CASE("runs are byte-identical for the same seed") {
  const auto cfg = write_config("coupled.json", R"({"n": 300, "m": 3, "T": 20, "tau": 5,
    "couple": true, "algorithm": "softmax-compare", "beta": 1, "reward": "bernoulli",
    "means_range": [0.85, 0.25], "seed": 11, "seeds": 3})");
  fs::remove_all("cli_out/a");
  fs::remove_all("cli_out/b");
  REQUIRE(cli({"run", "-c", cfg.string(), "-o", "cli_out/a"}).code == 0);
  REQUIRE(cli({"run", "-c", cfg.string(), "-o", "cli_out/b"}).code == 0);
  int compared = 0;
  for (const auto& e : fs::directory_iterator("cli_out/a")) {
    CHECK(slurp(e.path()) == slurp(fs::path("cli_out/b") / e.path().filename()));
    ++compared;
  }
  CHECK(compared == 4);
}

TEST_CASE("config errors exit 2 and name the key") {
  const auto r = cli({"run", "--set", "m=2", "--set", "T=5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("\"n\"") != std::string::npos);

  const auto bad = write_config("bad.json", "{ not json");
  CHECK(cli({"run", "-c", bad.string()}).code == 2);

  const auto cfg = write_config("minimal2.json", kMinimal);
  CHECK(cli({"run", "-c", cfg.string(), "--set", "couple=true", "--set", "tau=3"}).code == 2);
  CHECK(cli({"run", "-c", cfg.string(), "--set", "algorithm=guess"}).code == 2);
  CHECK(cli({"run", "-c", cfg.string(), "--set", "colour=blue"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("runtime failures exit 1") {
  const auto cfg = write_config("short_schedule.json", R"({"n": 50, "m": 2, "T": 5,
    "algorithm": "softmax-compare", "beta": 1, "reward": "adversarial",
    "schedule": [[1, -1], [1, -1]], "output": "cli_out/short"})");
  const auto r = cli({"run", "-c", cfg.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("schedule") != std::string::npos);
}

TEST_CASE("sweep expands the grid") {
  const auto cfg = write_config("sweep.json", R"({"n": 200, "m": 4, "T": 10,
    "algorithm": "sigmoid-adopt", "beta": 2, "reward": "bernoulli",
    "means_range": {"4": [0.85, 0.25], "8": [0.85, 0.15], "16": [0.85, 0.1]},
    "seeds": 15, "grid": {"m": [4, 8, 16]}})");
  fs::remove_all("cli_out/sweep");
  const auto r = cli({"sweep", "-c", cfg.string(), "-o", "cli_out/sweep"});
  REQUIRE(r.code == 0);
  std::size_t runs = 0;
  for (const auto& e : fs::directory_iterator("cli_out/sweep")) {
    if (e.path().filename() != "summary.csv") ++runs;
  }
  CHECK(runs == 45);
  CHECK(lines(slurp("cli_out/sweep/summary.csv")).size() == 4);

  CHECK(cli({"sweep", "-c", cfg.string(), "--set", "grid.m=[]"}).code == 2);
  CHECK(cli({"run", "-c", cfg.string()}).code == 2);
}

TEST_CASE("gradient rewards fill the convex error column") {
  const auto cfg = write_config("convex.json", R"({"n": 300, "m": 3, "T": 10,
    "algorithm": "softmax-compare", "beta": 1, "reward": "gradient",
    "convex_preset": "benchmark", "noise_sd": 1, "clip": 10, "seeds": 2,
    "output": "cli_out/convex"})");
  REQUIRE(cli({"run", "-c", cfg.string()}).code == 0);
  const auto summary = lines(slurp("cli_out/convex/summary.csv"));
  REQUIRE(summary.size() == 2);
  CHECK(summary[1].back() != ',');
}

TEST_CASE("bound command") {
  const auto r = cli({"bound", "--alpha1", "0.25", "--rho", "0.125", "--n", "100000", "--m", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("stationary_bound 49.9066") != std::string::npos);
  CHECK(r.out.find("mass_survival_horizon 37") != std::string::npos);
  CHECK(r.out.find("adversarial_bound") != std::string::npos);

  CHECK(cli({"bound", "--alpha1", "0.3", "--alpha2", "0.2", "--rho", "0.5"}).code == 2);
  CHECK(cli({"bound", "--alpha1", "0.2", "--rho", "0.5", "--n", "8", "--m", "4"}).code == 2);
  const auto epoch = cli({"bound", "--alpha1", "0.1", "--m", "4", "--n", "1e6", "--T", "50", "--tau", "10"});
  CHECK(epoch.code == 0);
  CHECK(epoch.out.find("epoch_bound") != std::string::npos);
}

TEST_CASE("verify command") {
  CHECK(cli({"verify", "--tier", "quick"}).code == 0);
  const auto bad = cli({"verify", "--flip-potential-sign"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL zero-sum") != std::string::npos);
}

TEST_CASE("thread cap") {
  CHECK(worker_count(1) == 1);
  CHECK(worker_count(3) <= 3);
}
