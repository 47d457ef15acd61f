#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ipd/config.hpp"
#include "ipd/error.hpp"
#include "ipd/experiment.hpp"
#include "ipd/report_io.hpp"
#include "ipd/sha256.hpp"
#include "ipd/tournament.hpp"
#include "json.hpp"

using namespace ipd;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("ipd_report_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

SimParams tiny_params(int rounds, int runs, int players = 2) {
  SimParams p;
  p.agent.memory = 1;
  p.agent.game.players = players;
  p.agent.game.rounds = rounds;
  p.runs = runs;
  p.seed = 2026;
  p.workers = 1;
  return p;
}

/// Clears IPD_WORKERS for the scope and restores the previous value.
struct WorkersEnvGuard {
  std::string saved;
  bool had = false;

  WorkersEnvGuard() {
    if (const char* v = std::getenv("IPD_WORKERS")) {
      saved = v;
      had = true;
    }
    ::unsetenv("IPD_WORKERS");
  }
  ~WorkersEnvGuard() {
    if (had)
      ::setenv("IPD_WORKERS", saved.c_str(), 1);
    else
      ::unsetenv("IPD_WORKERS");
  }
};

std::string expect_config_error(const std::string& json_text) {
  try {
    parse_config(json_text);
    FAIL("expected ConfigError for: " << json_text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("numbers render with nine significant digits") {
  CHECK(format9(0.0) == "0");
  CHECK(format9(1.0) == "1");
  CHECK(format9(0.6) == "0.6");
  CHECK(format9(-0.5) == "-0.5");
  CHECK(format9(1.0 / 3.0) == "0.333333333");
  CHECK(format9(123456789.0) == "123456789");
  CHECK(format9(0.000123456789123) == "0.000123456789");

  CHECK(round9(0.6) == 0.6);
  CHECK(round9(1.0 / 3.0) == 0.333333333);
  const double noisy = 0.1 + 0.2;  // 0.30000000000000004
  CHECK(round9(noisy) == 0.3);
  CHECK(round9(round9(noisy)) == round9(noisy));
}

TEST_CASE("measure columns appear in a fixed order") {
  CHECK(measure_names() ==
        std::vector<std::string>{"individual", "collective", "relative", "cooperation"});
}

TEST_CASE("pairwise matrices.csv is written measure-major") {
  TempDir dir;
  TournamentReport report =
      round_robin({SeatSpec::named("Coop"), SeatSpec::named("Dfct")}, tiny_params(3, 2));
  const std::string path = dir.file("matrices.csv");
  write_matrices_csv(path, report);

  const std::string expected =
      "row_agent,col_agent,measure,value\n"
      "Coop,Coop,individual,0.6\n"
      "Coop,Dfct,individual,0\n"
      "Dfct,Coop,individual,1\n"
      "Dfct,Dfct,individual,0.2\n"
      "Coop,Coop,collective,1.2\n"
      "Coop,Dfct,collective,1\n"
      "Dfct,Coop,collective,1\n"
      "Dfct,Dfct,collective,0.4\n"
      "Coop,Coop,relative,0\n"
      "Coop,Dfct,relative,-0.5\n"
      "Dfct,Coop,relative,0.5\n"
      "Dfct,Dfct,relative,0\n"
      "Coop,Coop,cooperation,1\n"
      "Coop,Dfct,cooperation,1\n"
      "Dfct,Coop,cooperation,0\n"
      "Dfct,Dfct,cooperation,0\n";
  CHECK(read_file(path) == expected);
}

TEST_CASE("triple matrices.csv joins the other seats with '+'") {
  TempDir dir;
  TournamentReport report = run_triples({"TS"}, {"LinUCB"}, {"QL"}, tiny_params(2, 1, 3));
  const std::string path = dir.file("matrices.csv");
  write_matrices_csv(path, report);

  std::vector<std::string> lines = lines_of(read_file(path));
  REQUIRE(lines.size() == 1 + 4 * 3);  // one match, three seats, four measures
  CHECK(lines[0] == "row_agent,col_agent,measure,value");
  CHECK(lines[1].rfind("TS,LinUCB+QL,individual,", 0) == 0);
  CHECK(lines[2].rfind("LinUCB,TS+QL,individual,", 0) == 0);
  CHECK(lines[3].rfind("QL,TS+LinUCB,individual,", 0) == 0);
  CHECK(lines[4].rfind("TS,LinUCB+QL,collective,", 0) == 0);
}

TEST_CASE("series.csv lists every round of every run in fixed order") {
  TempDir dir;
  TournamentReport report =
      round_robin({SeatSpec::named("Coop"), SeatSpec::named("Dfct")}, tiny_params(2, 1));
  const std::string path = dir.file("series.csv");
  write_series_csv(path, report);

  const std::string expected =
      "match,run,round,seat,action,reward,reward_norm\n"
      "0,0,0,0,C,3,0.6\n"
      "0,0,0,1,C,3,0.6\n"
      "0,0,1,0,C,3,0.6\n"
      "0,0,1,1,C,3,0.6\n"
      "1,0,0,0,C,0,0\n"
      "1,0,0,1,D,5,1\n"
      "1,0,1,0,C,0,0\n"
      "1,0,1,1,D,5,1\n"
      "2,0,0,0,D,1,0.2\n"
      "2,0,0,1,D,1,0.2\n"
      "2,0,1,0,D,1,0.2\n"
      "2,0,1,1,D,1,0.2\n";
  CHECK(read_file(path) == expected);
}

TEST_CASE("demonstration curves are written with one-based rounds") {
  TempDir dir;
  BcdrReport report;
  report.agent_curve = {1.0, 0.5};
  report.teacher_curve = {0.25, 0.75};
  report.coverage = {2, 2};
  const std::string path = dir.file("curves.csv");
  write_bcdr_curves_csv(path, report);
  CHECK(read_file(path) ==
        "round,agent_rate,teacher_rate\n"
        "1,1,0.25\n"
        "2,0.5,0.75\n");
}

TEST_CASE("plot extracts cover heatmaps and per-match timeseries") {
  TempDir dir;
  TournamentReport report =
      round_robin({SeatSpec::named("Coop"), SeatSpec::named("Dfct")}, tiny_params(2, 1));
  const std::string plots = dir.file("plots");
  write_plot_data(plots, report);

  for (const std::string& m : measure_names())
    CHECK(std::filesystem::exists(plots + "/heatmap_" + m + ".csv"));
  for (int m = 0; m < 3; ++m)
    CHECK(std::filesystem::exists(plots + "/timeseries_match_" + std::to_string(m) + ".csv"));

  CHECK(read_file(plots + "/heatmap_individual.csv") ==
        "row_agent,col_agent,value\n"
        "Coop,Coop,0.6\n"
        "Coop,Dfct,0\n"
        "Dfct,Coop,1\n"
        "Dfct,Dfct,0.2\n");
  // Match 1 is Coop vs Dfct: normalized rewards 0 and 1, cooperation 1 and 0.
  CHECK(read_file(plots + "/timeseries_match_1.csv") ==
        "round,seat,label,mean_reward,coop_rate\n"
        "0,0,Coop,0,1\n"
        "0,1,Dfct,1,0\n"
        "1,0,Coop,0,1\n"
        "1,1,Dfct,1,0\n");
}

TEST_CASE("triple plot extracts skip the heatmaps") {
  TempDir dir;
  TournamentReport report = run_triples({"TS"}, {"LinUCB"}, {"QL"}, tiny_params(2, 1, 3));
  const std::string plots = dir.file("plots");
  write_plot_data(plots, report);
  CHECK_FALSE(std::filesystem::exists(plots + "/heatmap_individual.csv"));
  CHECK(std::filesystem::exists(plots + "/timeseries_match_0.csv"));
}

TEST_CASE("a minimal pairwise config takes every default") {
  ExperimentConfig cfg = parse_config(R"({"mode": "pairwise"})");
  CHECK(cfg.mode == ExperimentConfig::Mode::Pairwise);
  CHECK(cfg.roster.size() == 14);
  CHECK(cfg.payoff == PayoffMatrix::classical());
  CHECK(cfg.memory == 1);
  CHECK(cfg.rounds == 60);
  CHECK(cfg.runs == 100);
  CHECK(cfg.seed == 2026);
  CHECK(cfg.workers == 1);
  CHECK(cfg.plots == false);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.split_threshold == SplitThreshold::mean());
  CHECK(cfg.t4t_rule == "any");
}

TEST_CASE("config keys are strictly validated") {
  CHECK(expect_config_error(R"({})").find("mode") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "pairwise", "memroy": 2})").find("memroy") !=
        std::string::npos);
  CHECK(expect_config_error(R"({"mode": "pairwise", "teacher": "Coop"})")
            .find("not valid in mode") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "dueling"})").find("dueling") != std::string::npos);
  CHECK(expect_config_error("not json").find("JSON") != std::string::npos);
  CHECK(expect_config_error(R"([1, 2])").find("object") != std::string::npos);
}

TEST_CASE("config values are type- and range-checked") {
  expect_config_error(R"({"mode": "pairwise", "memory": "two"})");
  expect_config_error(R"({"mode": "pairwise", "memory": 0})");
  expect_config_error(R"({"mode": "pairwise", "rounds": 0})");
  expect_config_error(R"({"mode": "pairwise", "runs": -1})");
  expect_config_error(R"({"mode": "pairwise", "seed": -1})");
  expect_config_error(R"({"mode": "pairwise", "epsilon": 1.5})");
  expect_config_error(R"({"mode": "pairwise", "gamma": -0.1})");
  expect_config_error(R"({"mode": "pairwise", "linucb_alpha": -1})");
  expect_config_error(R"({"mode": "pairwise", "plots": 1})");
  expect_config_error(R"({"mode": "pairwise", "t4t_rule": "sometimes"})");
  expect_config_error(R"({"mode": "pairwise", "roster": []})");
  expect_config_error(R"({"mode": "pairwise", "roster": ["Coop", "Pavlov"]})");
}

TEST_CASE("payoffs parse from the preset name or an explicit object") {
  ExperimentConfig preset = parse_config(R"({"mode": "pairwise", "payoffs": "classical"})");
  CHECK(preset.payoff == PayoffMatrix::classical());

  ExperimentConfig custom = parse_config(
      R"({"mode": "pairwise", "payoffs": {"T": 10, "R": 6, "P": 5, "S": 0}})");
  CHECK(custom.payoff.T() == 10.0);
  CHECK(custom.payoff.S() == 0.0);

  CHECK(expect_config_error(R"({"mode": "pairwise", "payoffs": "donation"})").find("preset") !=
        std::string::npos);
  CHECK(expect_config_error(
            R"({"mode": "pairwise", "payoffs": {"T": 5, "R": 3, "P": 1, "S": 0, "X": 9}})")
            .find("payoffs.X") != std::string::npos);
  expect_config_error(R"({"mode": "pairwise", "payoffs": {"T": 5, "R": 3, "P": 1}})");

  // A transposed matrix is a payoff-ordering problem, not a key problem.
  CHECK_THROWS_AS(
      parse_config(R"({"mode": "pairwise", "payoffs": {"T": 3, "R": 5, "P": 1, "S": 0}})"),
      PayoffError);
}

TEST_CASE("split threshold accepts mean, none, or a number") {
  CHECK(parse_config(R"({"mode": "pairwise", "split_threshold": "mean"})").split_threshold ==
        SplitThreshold::mean());
  CHECK(parse_config(R"({"mode": "pairwise", "split_threshold": "none"})").split_threshold ==
        SplitThreshold::none());
  CHECK(parse_config(R"({"mode": "pairwise", "split_threshold": 2.5})").split_threshold ==
        SplitThreshold::at(2.5));
  expect_config_error(R"({"mode": "pairwise", "split_threshold": "median"})");
}

TEST_CASE("mode-specific keys and their defaults") {
  ExperimentConfig triple = parse_config(R"({"mode": "triple"})");
  CHECK(triple.mab_pool.size() == 5);
  CHECK(triple.cb_pool.size() == 4);
  CHECK(triple.rl_pool.size() == 4);

  ExperimentConfig mental = parse_config(R"({"mode": "mental"})");
  CHECK(mental.pool == "RL");
  CHECK(mental.profiles.size() == 10);
  ExperimentConfig two = parse_config(R"({"mode": "mental", "profiles": ["Standard", "PD"]})");
  REQUIRE(two.profiles.size() == 2);
  CHECK(two.profiles[0] == Profile::Standard);
  CHECK(two.profiles[1] == Profile::PD);
  expect_config_error(R"({"mode": "mental", "pool": "XX"})");
  expect_config_error(R"({"mode": "mental", "profiles": ["Anxiety"]})");

  ExperimentConfig bcdr =
      parse_config(R"({"mode": "bcdr-train-eval", "data": "d.csv", "train_count": 5})");
  CHECK(bcdr.split_threshold == SplitThreshold::none());  // mode-specific default
  CHECK(bcdr.min_history == 9);
  CHECK(bcdr.passes == 1);
  CHECK(bcdr.agents == std::vector<std::string>{"LinUCB", "eGreedy"});
  CHECK(expect_config_error(R"({"mode": "bcdr-train-eval", "train_count": 5})").find("data") !=
        std::string::npos);
  CHECK(expect_config_error(R"({"mode": "bcdr-train-eval", "data": "d.csv"})")
            .find("train_count") != std::string::npos);

  ExperimentConfig synth = parse_config(R"({"mode": "synth-data"})");
  CHECK(synth.teacher == "Tit4Tat");
  CHECK(synth.opponent == "Random");
  CHECK(synth.count == 1000);
  CHECK(synth.horizon == 10);
  CHECK(synth.output == "trajectories.csv");
  expect_config_error(R"({"mode": "synth-data", "teacher": "Pavlov"})");
}

TEST_CASE("the canonical config rendering is a fixed point") {
  const std::vector<std::string> inputs = {
      R"({"mode": "pairwise", "memory": 2, "roster": ["Coop", "Dfct"]})",
      R"({"mode": "triple", "rounds": 10})",
      R"({"mode": "mental", "pool": "MAB", "profiles": ["AD"]})",
      R"({"mode": "bcdr-train-eval", "data": "d.csv", "train_count": 3})",
      R"({"mode": "synth-data", "count": 7})",
  };
  for (const std::string& input : inputs) {
    CAPTURE(input);
    const std::string canonical = config_to_json(parse_config(input));
    CHECK(config_to_json(parse_config(canonical)) == canonical);
    json j = json::parse(canonical);
    CHECK(j.contains("rounds"));  // defaults are explicit
    CHECK(j.contains("seed"));
  }
}

TEST_CASE("load_config reports unreadable paths") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("worker resolution prefers the environment variable") {
  WorkersEnvGuard guard;
  CHECK(resolve_worker_count(4) == 4);
  ::setenv("IPD_WORKERS", "6", 1);
  CHECK(resolve_worker_count(4) == 6);
  ::setenv("IPD_WORKERS", "abc", 1);
  CHECK_THROWS_AS(resolve_worker_count(4), ConfigError);
  ::setenv("IPD_WORKERS", "", 1);
  CHECK(resolve_worker_count(3) == 3);
}

TEST_CASE("run_experiment writes the full artifact set with valid checksums") {
  WorkersEnvGuard guard;
  TempDir dir;
  ExperimentConfig cfg = parse_config(R"({
    "mode": "pairwise", "roster": ["Coop", "Dfct", "TS"],
    "rounds": 5, "runs": 2, "plots": true
  })");
  RunOptions opts;
  opts.out_override = dir.file("run");
  RunSummary summary = run_experiment(cfg, opts);

  CHECK(summary.out_dir == dir.file("run"));
  for (const std::string& f : summary.files)
    CHECK(std::filesystem::exists(summary.out_dir + "/" + f));
  for (const std::string& required : {"matrices.csv", "series.csv", "summary.json",
                                      "manifest.json", "plots/heatmap_individual.csv"})
    CHECK(std::count(summary.files.begin(), summary.files.end(), required) == 1);

  json manifest = json::parse(read_file(summary.out_dir + "/manifest.json"));
  CHECK(manifest["version"] == kArtifactVersion);
  CHECK(manifest["seed"] == 2026);
  CHECK(manifest["out_override"] == dir.file("run"));
  CHECK(manifest["duration_ms"].is_number());
  CHECK(manifest["config"] == json::parse(config_to_json(cfg)));
  for (const auto& [file, digest] : manifest["checksums"].items())
    CHECK(digest.get<std::string>() == Sha256::of_file(summary.out_dir + "/" + file));
  CHECK(manifest["checksums"].contains("series.csv"));
  CHECK_FALSE(manifest["checksums"].contains("manifest.json"));

  json s = json::parse(read_file(summary.out_dir + "/summary.json"));
  CHECK(s["design"] == "pairwise");
  CHECK(s["labels"] == json::array({"Coop", "Dfct", "TS"}));
  CHECK(s["measures"].contains("individual"));
  CHECK(s["class_means"].contains("HANDCRAFTED"));
  CHECK(s["class_means"].contains("MAB"));
  CHECK(s["curves"]["labels"].is_array());
}

TEST_CASE("identical configs reproduce the data artifacts byte for byte") {
  WorkersEnvGuard guard;
  TempDir dir;
  ExperimentConfig cfg = parse_config(R"({
    "mode": "pairwise", "roster": ["TS", "QL", "LinUCB"],
    "rounds": 8, "runs": 3, "memory": 1
  })");
  RunOptions a;
  a.out_override = dir.file("a");
  RunOptions b;
  b.out_override = dir.file("b");
  run_experiment(cfg, a);
  run_experiment(cfg, b);
  for (const std::string& f : {"matrices.csv", "series.csv", "summary.json"})
    CHECK(read_file(dir.file("a") + "/" + f) == read_file(dir.file("b") + "/" + f));
}

TEST_CASE("the synth and demonstration modes run end to end") {
  WorkersEnvGuard guard;
  TempDir dir;
  ExperimentConfig synth = parse_config(R"({
    "mode": "synth-data", "teacher": "Coop", "opponent": "Random",
    "count": 30, "horizon": 10, "output": "demo.csv"
  })");
  RunOptions synth_opts;
  synth_opts.out_override = dir.file("synth");
  run_experiment(synth, synth_opts);
  json synth_summary = json::parse(read_file(dir.file("synth") + "/summary.json"));
  CHECK(synth_summary["trajectories"] == 30);
  CHECK(synth_summary["focal_cooperation_rate"] == 1.0);

  const std::string data = dir.file("synth") + "/demo.csv";
  ExperimentConfig bcdr = parse_config(
      R"({"mode": "bcdr-train-eval", "data": ")" + data +
      R"(", "train_count": 25, "agents": ["eGreedy"]})");
  RunOptions bcdr_opts;
  bcdr_opts.out_override = dir.file("bcdr");
  RunSummary summary = run_experiment(bcdr, bcdr_opts);
  CHECK(std::count(summary.files.begin(), summary.files.end(), "curves_eGreedy.csv") == 1);
  CHECK(std::count(summary.files.begin(), summary.files.end(), "curves_replayer.csv") == 1);

  json s = json::parse(read_file(dir.file("bcdr") + "/summary.json"));
  CHECK(s["train_count"] == 25);
  CHECK(s["test_count"] == 5);
  CHECK(s["agents"]["replayer"]["prediction_error"] == 0.0);
  CHECK(s["agents"]["replayer"]["match_rate"] == 1.0);
  CHECK(s["agents"]["eGreedy"]["match_rate"].get<double>() > 0.8);
}
