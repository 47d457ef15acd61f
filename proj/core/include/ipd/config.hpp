#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipd/payoff.hpp"
#include "ipd/split.hpp"

namespace ipd {

/// One experiment, fully described by a flat JSON object. Every key is
/// optional unless noted; unknown keys and keys that do not belong to the
/// selected mode are rejected by name. The player count is fixed by the
/// mode (3 for cross-class triples, 2 otherwise).
struct ExperimentConfig {
  enum class Mode { Pairwise, Triple, Mental, Bcdr, Synth };

  Mode mode = Mode::Pairwise;  // "mode" is required

  // Game and learner settings, shared by all modes.
  PayoffMatrix payoff = PayoffMatrix::classical();
  int memory = 1;
  int rounds = 60;
  int runs = 100;
  std::uint64_t seed = 2026;
  double gamma = 0.95;
  double epsilon = 0.05;
  double exp3_gamma = 0.1;
  double exp4_gamma = 0.1;
  double linucb_alpha = 1.0;
  double cts_v = 0.25;
  SplitThreshold split_threshold = SplitThreshold::mean();  // bcdr defaults to none
  std::string t4t_rule = "any";

  // Execution and output.
  int workers = 1;  // <= 0 selects hardware concurrency; env IPD_WORKERS wins
  bool plots = false;
  std::string out_dir = "out";

  // pairwise
  std::vector<std::string> roster;  // empty selects the default 14-agent pool

  // triple (empty selects the default class pools)
  std::vector<std::string> mab_pool;
  std::vector<std::string> cb_pool;
  std::vector<std::string> rl_pool;

  // mental
  std::string pool = "RL";  // "MAB" | "CB" | "RL"
  std::vector<Profile> profiles;  // empty selects all ten rows

  // bcdr
  std::string data;                                     // required
  std::vector<std::string> agents = {"LinUCB", "eGreedy"};
  int train_count = 0;                                  // required, >= 1
  int passes = 1;
  int min_history = 9;  // 0 disables the horizon filter

  // synth
  std::string teacher = "Tit4Tat";
  std::string opponent = "Random";
  int count = 1000;
  int horizon = 10;
  std::string output = "trajectories.csv";
};

const std::string& mode_name(ExperimentConfig::Mode mode);

/// Parses and validates a config from JSON text. Throws ConfigError naming
/// the offending key on unknown keys, type mismatches, out-of-range values,
/// or missing mode-required keys; payoff problems surface as PayoffError.
ExperimentConfig parse_config(const std::string& json_text);

/// parse_config over the contents of `path`.
/// Throws ConfigError if the file cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON rendering of a parsed config (sorted keys, every default
/// made explicit); embedded in the run manifest so a run can be reproduced
/// from its outputs alone.
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace ipd
