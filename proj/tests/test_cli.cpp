#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

#include "cli_app.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "beamband");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = beamband::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("beamband_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("run writes csv and meta, byte-identical on rerun") {
  const fs::path dir = scratch("run");
  const std::vector<std::string> base{"run",   "--scenario", "1",      "--policy",       "ucb1", "--policy",
                                      "ts",    "--policy",   "random", "--realizations", "3",    "--slots",
                                      "40",    "--seed",     "42",     "--threads",      "2"};
  auto a_args = base;
  a_args.insert(a_args.end(), {"--out", (dir / "a").string()});
  auto b_args = base;
  b_args.insert(b_args.end(), {"--out", (dir / "sub" / "b").string()});
  const Result a = cli(a_args);
  REQUIRE_MESSAGE(a.code == 0, a.err);
  REQUIRE(cli(b_args).code == 0);

  const std::string csv = slurp(dir / "a.csv");
  CHECK(csv == slurp(dir / "sub" / "b.csv"));
  const auto rows = lines(csv);
  CHECK(rows.size() == 1 + 3 * 3 * 40);
  CHECK(rows[0].rfind("policy_label,realization_id,slot_index,period_ms,num_sectors,R,", 0) == 0);

  const auto meta = nlohmann::json::parse(slurp(dir / "a.meta"));
  CHECK(meta["seed"] == 42);
  CHECK(meta["overrides"]["slots"] == 40);
  CHECK(meta["policies"].size() == 3);
  CHECK(meta["static_arms"].size() == 5);
  CHECK(meta.contains("genius"));
}

TEST_CASE("scenario 3 with two ratios gives two labeled trace sets per policy") {
  const fs::path dir = scratch("s3");
  const Result r = cli({"run", "--scenario", "3", "--policy", "mcts", "--ratio", "1/2", "--ratio", "1", "--slots", "12",
                        "--realizations", "2", "--out", (dir / "s3").string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  std::set<std::string> labels;
  for (const auto& l : lines(slurp(dir / "s3.csv"))) labels.insert(l.substr(0, l.find(',')));
  CHECK(labels == std::set<std::string>{"policy_label", "mcts R=1/2", "mcts R=1"});
}

TEST_CASE("baselines names genius and worst") {
  const Result r = cli({"baselines", "--scenario", "1", "--seed", "42", "--realizations", "2", "--slots", "20"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("genius:") != std::string::npos);
  CHECK(r.out.find("worst:") != std::string::npos);
}

TEST_CASE("bad input exits with 2") {
  CHECK(cli({"run", "--bogus"}).code == 2);
  CHECK(cli({"run", "--scenario", "5"}).code == 2);
  CHECK(cli({"run", "--policy", "greedy"}).code == 2);
  CHECK(cli({}).code == 2);
  const Result ratio = cli({"run", "--ratio", "0.3", "--slots", "2", "--realizations", "1"});
  CHECK(ratio.code == 2);
  CHECK(ratio.err.find("ratios[0]") != std::string::npos);

  const fs::path dir = scratch("cfg");
  std::ofstream(dir / "bad.json") << R"({"env": {"block_prob": 1.5}})";
  const Result cfg = cli({"run", "--config", (dir / "bad.json").string()});
  CHECK(cfg.code == 2);
  CHECK(cfg.err.find("env.block_prob") != std::string::npos);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(cli({"run", "--config", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("config file values apply and flags override them") {
  const fs::path dir = scratch("cfg2");
  std::ofstream(dir / "c.json") << R"({"scenario": 2, "slots": 7, "realizations": 1, "sector_counts": [16, 32]})";
  const Result r = cli({"run", "--config", (dir / "c.json").string(), "--slots", "5", "--policy", "flat", "--out",
                        (dir / "o").string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(lines(slurp(dir / "o.csv")).size() == 1 + 5);
  const auto meta = nlohmann::json::parse(slurp(dir / "o.meta"));
  CHECK(meta["config"]["slots"] == 5);
  CHECK(meta["static_arms"].size() == 10);
}

TEST_CASE("thread count from the environment") {
  ::setenv("BEAMBAND_THREADS", "abc", 1);
  CHECK(cli({"run", "--slots", "2", "--realizations", "1"}).code == 2);
  ::setenv("BEAMBAND_THREADS", "2", 1);
  CHECK(cli({"run", "--slots", "2", "--realizations", "2", "--policy", "random"}).code == 0);
  ::unsetenv("BEAMBAND_THREADS");
}

TEST_CASE("installed binary exit codes") {
  CHECK(WEXITSTATUS(std::system(BEAMBAND_CLI_PATH " schema > /dev/null")) == 0);
  CHECK(WEXITSTATUS(std::system(BEAMBAND_CLI_PATH " run --nope 2> /dev/null")) == 2);
}
