#include "ipd/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "ipd/bcdr.hpp"
#include "ipd/error.hpp"
#include "ipd/report_io.hpp"
#include "ipd/sha256.hpp"
#include "ipd/tournament.hpp"
#include "json.hpp"

namespace ipd {
namespace {

using nlohmann::json;

AgentConfig agent_config_of(const ExperimentConfig& cfg) {
  AgentConfig a;
  a.game.players = cfg.mode == ExperimentConfig::Mode::Triple ? 3 : 2;
  a.game.payoff = cfg.payoff;
  a.game.rounds = cfg.rounds;
  a.memory = cfg.memory;
  a.gamma = cfg.gamma;
  a.epsilon = cfg.epsilon;
  a.exp3_gamma = cfg.exp3_gamma;
  a.exp4_gamma = cfg.exp4_gamma;
  a.linucb_alpha = cfg.linucb_alpha;
  a.cts_v = cfg.cts_v;
  a.split_threshold = cfg.split_threshold;
  a.t4t_rule = cfg.t4t_rule;
  return a;
}

SimParams sim_params_of(const ExperimentConfig& cfg) {
  SimParams p;
  p.agent = agent_config_of(cfg);
  p.runs = cfg.runs;
  p.seed = cfg.seed;
  p.workers = resolve_worker_count(cfg.workers);
  return p;
}

json matrix_to_json(const TournamentReport& report, const std::vector<double>& matrix) {
  json rows = json::array();
  const int n = report.n();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(round9(report.cell(matrix, i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json curve_to_json(const std::vector<double>& curve) {
  json out = json::array();
  for (double v : curve) out.push_back(round9(v));
  return out;
}

json tournament_summary(const TournamentReport& report) {
  json j;
  switch (report.design) {
    case TournamentReport::Design::Pairwise: j["design"] = "pairwise"; break;
    case TournamentReport::Design::Triple: j["design"] = "triple"; break;
    case TournamentReport::Design::Mental: j["design"] = "mental"; break;
  }
  j["labels"] = report.labels;
  if (report.design == TournamentReport::Design::Triple) {
    json matches = json::array();
    for (const MatchResult& match : report.matches) {
      json m;
      m["seats"] = match.seat_labels;
      m["individual"] = curve_to_json(match.agg.individual);
      m["collective"] = round9(match.agg.collective);
      m["relative"] = curve_to_json(match.agg.relative);
      m["cooperation"] = curve_to_json(match.agg.coop);
      matches.push_back(std::move(m));
    }
    j["matches"] = std::move(matches);
  } else {
    j["measures"] = {{"individual", matrix_to_json(report, report.individual_matrix)},
                     {"collective", matrix_to_json(report, report.collective_matrix)},
                     {"relative", matrix_to_json(report, report.relative_matrix)},
                     {"cooperation", matrix_to_json(report, report.coop_matrix)}};
  }
  if (report.design == TournamentReport::Design::Pairwise) {
    json means;
    std::map<AgentClass, bool> present;
    for (const std::string& label : report.labels) present[agent_class_of(label)] = true;
    for (const auto& [cls, _] : present)
      means[agent_class_name(cls)] = round9(class_mean(report, report.individual_matrix, cls));
    j["class_means"] = std::move(means);
  }
  json curves;
  curves["labels"] = report.curve_labels;
  json reward = json::array();
  json coop = json::array();
  for (const std::vector<double>& c : report.curve_reward) reward.push_back(curve_to_json(c));
  for (const std::vector<double>& c : report.curve_coop) coop.push_back(curve_to_json(c));
  curves["reward"] = std::move(reward);
  curves["cooperation"] = std::move(coop);
  j["curves"] = std::move(curves);
  return j;
}

json bcdr_report_json(const BcdrReport& report) {
  json j;
  j["horizon"] = report.horizon();
  j["prediction_error"] = round9(report.prediction_error);
  j["match_rate"] = round9(report.match_rate);
  j["agent_curve"] = curve_to_json(report.agent_curve);
  j["teacher_curve"] = curve_to_json(report.teacher_curve);
  j["coverage"] = report.coverage;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("IoError", "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw DataError("IoError", "write to " + path + " failed");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Collects plot files written under dir/plots relative to dir, in sorted
/// order so the manifest enumeration is stable.
std::vector<std::string> list_plot_files(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir + "/plots"))
    if (entry.is_regular_file()) files.push_back("plots/" + entry.path().filename().string());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int resolve_worker_count(int config_workers) {
  const char* env = std::getenv("IPD_WORKERS");
  if (env == nullptr || *env == '\0') return config_workers;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0')
    throw ConfigError("IPD_WORKERS must be an integer, got \"" + std::string(env) + "\"");
  return static_cast<int>(v);
}

RunSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto started = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.out_dir = opts.out_override.value_or(cfg.out_dir);

  std::error_code ec;
  std::filesystem::create_directories(summary.out_dir, ec);
  if (ec)
    throw DataError("IoError", "cannot create " + summary.out_dir + ": " + ec.message());
  const std::string dir = summary.out_dir + "/";

  json result_summary;
  switch (cfg.mode) {
    case ExperimentConfig::Mode::Pairwise:
    case ExperimentConfig::Mode::Triple:
    case ExperimentConfig::Mode::Mental: {
      const SimParams params = sim_params_of(cfg);
      TournamentReport report;
      if (cfg.mode == ExperimentConfig::Mode::Pairwise) {
        std::vector<SeatSpec> pool;
        for (const std::string& name : cfg.roster) pool.push_back(SeatSpec::named(name));
        report = round_robin(pool, params);
      } else if (cfg.mode == ExperimentConfig::Mode::Triple) {
        report = run_triples(cfg.mab_pool, cfg.cb_pool, cfg.rl_pool, params);
      } else {
        const AgentClass cls = cfg.pool == "MAB"  ? AgentClass::MAB
                               : cfg.pool == "CB" ? AgentClass::CB
                                                  : AgentClass::RL;
        report = run_mental_pool(cls, cfg.profiles, params);
      }
      write_matrices_csv(dir + "matrices.csv", report);
      summary.files.push_back("matrices.csv");
      write_series_csv(dir + "series.csv", report);
      summary.files.push_back("series.csv");
      result_summary = tournament_summary(report);
      if (cfg.plots) {
        write_plot_data(dir + "plots", report);
        for (const std::string& f : list_plot_files(summary.out_dir))
          summary.files.push_back(f);
      }
      break;
    }
    case ExperimentConfig::Mode::Synth: {
      const std::vector<Trajectory> trajectories = synth_trajectories(
          cfg.teacher, cfg.opponent, cfg.count, cfg.horizon, agent_config_of(cfg), cfg.seed);
      write_trajectories(dir + cfg.output, trajectories);
      summary.files.push_back(cfg.output);
      long long focal_c = 0;
      long long total = 0;
      for (const Trajectory& t : trajectories) {
        for (const TrajectoryRecord& r : t.records) {
          focal_c += r.focal == Action::C ? 1 : 0;
          ++total;
        }
      }
      result_summary["teacher"] = cfg.teacher;
      result_summary["opponent"] = cfg.opponent;
      result_summary["trajectories"] = static_cast<long long>(trajectories.size());
      result_summary["horizon"] = cfg.horizon;
      result_summary["output"] = cfg.output;
      result_summary["focal_cooperation_rate"] =
          round9(total == 0 ? 0.0 : static_cast<double>(focal_c) / static_cast<double>(total));
      break;
    }
    case ExperimentConfig::Mode::Bcdr: {
      const std::vector<Trajectory> all = load_trajectories(cfg.data, cfg.min_history);
      auto [trainset, testset] = split_train_test(all, cfg.train_count, cfg.seed);
      result_summary["data"] = cfg.data;
      result_summary["min_history"] = cfg.min_history;
      result_summary["train_count"] = static_cast<long long>(trainset.size());
      result_summary["test_count"] = static_cast<long long>(testset.size());
      result_summary["passes"] = cfg.passes;
      json agents_json;
      const AgentConfig agent_cfg = agent_config_of(cfg);
      for (const std::string& name : cfg.agents) {
        std::unique_ptr<Agent> agent = make_agent(name, agent_cfg);
        bcdr_train(*agent, trainset, BcdrTrainParams{cfg.passes, cfg.seed});
        const BcdrReport report = bcdr_eval(*agent, testset);
        const std::string curve_file = "curves_" + name + ".csv";
        write_bcdr_curves_csv(dir + curve_file, report);
        summary.files.push_back(curve_file);
        agents_json[name] = bcdr_report_json(report);
      }
      const BcdrReport replay = bcdr_eval_replay(testset);
      write_bcdr_curves_csv(dir + "curves_replayer.csv", replay);
      summary.files.push_back("curves_replayer.csv");
      agents_json["replayer"] = bcdr_report_json(replay);
      result_summary["agents"] = std::move(agents_json);
      break;
    }
  }

  write_json(dir + "summary.json", result_summary);
  summary.files.push_back("summary.json");

  json manifest;
  manifest["version"] = kArtifactVersion;
  manifest["config"] = json::parse(config_to_json(cfg));
  manifest["seed"] = cfg.seed;
  manifest["out_dir"] = summary.out_dir;
  manifest["out_override"] = opts.out_override ? json(*opts.out_override) : json(nullptr);
  json checksums;
  for (const std::string& file : summary.files)
    checksums[file] = Sha256::of_file(dir + file);
  manifest["checksums"] = std::move(checksums);
  const auto elapsed = std::chrono::steady_clock::now() - started;
  manifest["duration_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  write_json(dir + "manifest.json", manifest);
  summary.files.push_back("manifest.json");
  return summary;
}

}  // namespace ipd
