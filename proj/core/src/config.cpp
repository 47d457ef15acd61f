#include "ipd/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ipd/agent.hpp"
#include "ipd/error.hpp"
#include "json.hpp"

namespace ipd {
namespace {

using nlohmann::json;

const std::set<std::string> kCommonKeys = {
    "mode",        "payoffs",    "memory",          "rounds",   "runs",
    "seed",        "gamma",      "epsilon",         "exp3_gamma",
    "exp4_gamma",  "linucb_alpha", "cts_v",         "split_threshold",
    "t4t_rule",    "workers",    "plots",           "out_dir"};

const std::set<std::string>& mode_keys(ExperimentConfig::Mode mode) {
  static const std::set<std::string> pairwise = {"roster"};
  static const std::set<std::string> triple = {"mab_pool", "cb_pool", "rl_pool"};
  static const std::set<std::string> mental = {"pool", "profiles"};
  static const std::set<std::string> bcdr = {"data", "agents", "train_count", "passes",
                                             "min_history"};
  static const std::set<std::string> synth = {"teacher", "opponent", "count", "horizon",
                                              "output"};
  switch (mode) {
    case ExperimentConfig::Mode::Pairwise: return pairwise;
    case ExperimentConfig::Mode::Triple: return triple;
    case ExperimentConfig::Mode::Mental: return mental;
    case ExperimentConfig::Mode::Bcdr: return bcdr;
    default: return synth;
  }
}

bool known_anywhere(const std::string& key) {
  static const std::set<ExperimentConfig::Mode> modes = {
      ExperimentConfig::Mode::Pairwise, ExperimentConfig::Mode::Triple,
      ExperimentConfig::Mode::Mental, ExperimentConfig::Mode::Bcdr,
      ExperimentConfig::Mode::Synth};
  if (kCommonKeys.count(key)) return true;
  return std::any_of(modes.begin(), modes.end(),
                     [&](ExperimentConfig::Mode m) { return mode_keys(m).count(key) > 0; });
}

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
  throw ConfigError("config key \"" + key + "\" must be " + expected);
}

double get_double(const json& j, const std::string& key) {
  if (!j.is_number() || j.is_boolean()) bad_type(key, "a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad_type(key, "an integer");
  return j.get<int>();
}

int get_int_min(const json& j, const std::string& key, int min) {
  const int v = get_int(j, key);
  if (v < min)
    throw ConfigError("config key \"" + key + "\" must be >= " + std::to_string(min));
  return v;
}

std::uint64_t get_seed(const json& j, const std::string& key) {
  if (!j.is_number_unsigned()) bad_type(key, "a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) bad_type(key, "a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) bad_type(key, "a boolean");
  return j.get<bool>();
}

std::vector<std::string> get_string_array(const json& j, const std::string& key) {
  if (!j.is_array()) bad_type(key, "an array of strings");
  std::vector<std::string> out;
  for (const json& item : j) {
    if (!item.is_string()) bad_type(key, "an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

double get_unit(const json& j, const std::string& key) {
  const double v = get_double(j, key);
  if (v < 0.0 || v > 1.0) throw ConfigError("config key \"" + key + "\" must be in [0, 1]");
  return v;
}

double get_nonneg(const json& j, const std::string& key) {
  const double v = get_double(j, key);
  if (v < 0.0) throw ConfigError("config key \"" + key + "\" must be >= 0");
  return v;
}

ExperimentConfig::Mode parse_mode(const std::string& text) {
  if (text == "pairwise") return ExperimentConfig::Mode::Pairwise;
  if (text == "triple") return ExperimentConfig::Mode::Triple;
  if (text == "mental") return ExperimentConfig::Mode::Mental;
  if (text == "bcdr-train-eval") return ExperimentConfig::Mode::Bcdr;
  if (text == "synth-data") return ExperimentConfig::Mode::Synth;
  throw ConfigError(
      "config key \"mode\" must be one of pairwise, triple, mental, bcdr-train-eval, "
      "synth-data; got \"" +
      text + "\"");
}

PayoffMatrix parse_payoffs(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "classical") return PayoffMatrix::classical();
    throw ConfigError("config key \"payoffs\" names an unknown preset \"" +
                      j.get<std::string>() + "\"; only \"classical\" is defined");
  }
  if (!j.is_object()) bad_type("payoffs", "\"classical\" or an object with keys T, R, P, S");
  for (const auto& [key, value] : j.items()) {
    if (key != "T" && key != "R" && key != "P" && key != "S")
      throw ConfigError("unknown config key \"payoffs." + key + "\"");
    (void)value;
  }
  for (const char* key : {"T", "R", "P", "S"}) {
    if (!j.contains(key))
      throw ConfigError("config key \"payoffs\" is missing entry \"" + std::string(key) + "\"");
  }
  return PayoffMatrix::validate(
      get_double(j.at("T"), "payoffs.T"), get_double(j.at("R"), "payoffs.R"),
      get_double(j.at("P"), "payoffs.P"), get_double(j.at("S"), "payoffs.S"));
}

SplitThreshold parse_split_threshold(const json& j) {
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (text == "mean") return SplitThreshold::mean();
    if (text == "none") return SplitThreshold::none();
    throw ConfigError(
        "config key \"split_threshold\" must be \"mean\", \"none\", or a number; got \"" + text +
        "\"");
  }
  if (j.is_number() && !j.is_boolean()) return SplitThreshold::at(j.get<double>());
  bad_type("split_threshold", "\"mean\", \"none\", or a number");
}

void check_agent_names(const std::vector<std::string>& names, const std::string& key) {
  if (names.empty())
    throw ConfigError("config key \"" + key + "\" must list at least one agent");
  for (const std::string& name : names) agent_class_of(name);  // throws on unknown names
}

json threshold_to_json(const SplitThreshold& th) {
  switch (th.kind) {
    case SplitThreshold::Kind::Mean: return "mean";
    case SplitThreshold::Kind::None: return "none";
    default: return th.value;
  }
}

}  // namespace

const std::string& mode_name(ExperimentConfig::Mode mode) {
  static const std::string names[] = {"pairwise", "triple", "mental", "bcdr-train-eval",
                                      "synth-data"};
  return names[static_cast<int>(mode)];
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  if (!j.contains("mode")) throw ConfigError("config key \"mode\" is required");

  ExperimentConfig cfg;
  cfg.mode = parse_mode(get_string(j.at("mode"), "mode"));
  if (cfg.mode == ExperimentConfig::Mode::Bcdr) cfg.split_threshold = SplitThreshold::none();

  const std::set<std::string>& extra = mode_keys(cfg.mode);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (kCommonKeys.count(key) || extra.count(key)) continue;
    if (known_anywhere(key))
      throw ConfigError("config key \"" + key + "\" is not valid in mode \"" +
                        mode_name(cfg.mode) + "\"");
    throw ConfigError("unknown config key \"" + key + "\"");
  }

  if (j.contains("payoffs")) cfg.payoff = parse_payoffs(j.at("payoffs"));

  if (j.contains("memory")) cfg.memory = get_int_min(j.at("memory"), "memory", 1);
  if (j.contains("rounds")) cfg.rounds = get_int_min(j.at("rounds"), "rounds", 1);
  if (j.contains("runs")) cfg.runs = get_int_min(j.at("runs"), "runs", 1);
  if (j.contains("seed")) cfg.seed = get_seed(j.at("seed"), "seed");
  if (j.contains("gamma")) cfg.gamma = get_unit(j.at("gamma"), "gamma");
  if (j.contains("epsilon")) cfg.epsilon = get_unit(j.at("epsilon"), "epsilon");
  if (j.contains("exp3_gamma")) cfg.exp3_gamma = get_unit(j.at("exp3_gamma"), "exp3_gamma");
  if (j.contains("exp4_gamma")) cfg.exp4_gamma = get_unit(j.at("exp4_gamma"), "exp4_gamma");
  if (j.contains("linucb_alpha")) cfg.linucb_alpha = get_nonneg(j.at("linucb_alpha"), "linucb_alpha");
  if (j.contains("cts_v")) cfg.cts_v = get_nonneg(j.at("cts_v"), "cts_v");
  if (j.contains("split_threshold"))
    cfg.split_threshold = parse_split_threshold(j.at("split_threshold"));
  if (j.contains("t4t_rule")) {
    cfg.t4t_rule = get_string(j.at("t4t_rule"), "t4t_rule");
    if (cfg.t4t_rule != "any" && cfg.t4t_rule != "majority")
      throw ConfigError("config key \"t4t_rule\" must be \"any\" or \"majority\"");
  }
  if (j.contains("workers")) cfg.workers = get_int(j.at("workers"), "workers");
  if (j.contains("plots")) cfg.plots = get_bool(j.at("plots"), "plots");
  if (j.contains("out_dir")) cfg.out_dir = get_string(j.at("out_dir"), "out_dir");

  switch (cfg.mode) {
    case ExperimentConfig::Mode::Pairwise:
      cfg.roster = j.contains("roster") ? get_string_array(j.at("roster"), "roster")
                                        : default_pairwise_roster();
      check_agent_names(cfg.roster, "roster");
      break;
    case ExperimentConfig::Mode::Triple:
      cfg.mab_pool = j.contains("mab_pool") ? get_string_array(j.at("mab_pool"), "mab_pool")
                                            : default_mab_pool();
      cfg.cb_pool = j.contains("cb_pool") ? get_string_array(j.at("cb_pool"), "cb_pool")
                                          : default_cb_pool();
      cfg.rl_pool = j.contains("rl_pool") ? get_string_array(j.at("rl_pool"), "rl_pool")
                                          : default_rl_pool();
      check_agent_names(cfg.mab_pool, "mab_pool");
      check_agent_names(cfg.cb_pool, "cb_pool");
      check_agent_names(cfg.rl_pool, "rl_pool");
      break;
    case ExperimentConfig::Mode::Mental:
      if (j.contains("pool")) {
        cfg.pool = get_string(j.at("pool"), "pool");
        if (cfg.pool != "MAB" && cfg.pool != "CB" && cfg.pool != "RL")
          throw ConfigError("config key \"pool\" must be \"MAB\", \"CB\", or \"RL\"");
      }
      if (j.contains("profiles")) {
        cfg.profiles.clear();
        for (const std::string& name : get_string_array(j.at("profiles"), "profiles"))
          cfg.profiles.push_back(profile_from_name(name));
        if (cfg.profiles.empty())
          throw ConfigError("config key \"profiles\" must list at least one profile");
      } else {
        cfg.profiles.assign(kAllProfiles.begin(), kAllProfiles.end());
      }
      break;
    case ExperimentConfig::Mode::Bcdr:
      if (!j.contains("data"))
        throw ConfigError("config key \"data\" is required in mode \"bcdr-train-eval\"");
      cfg.data = get_string(j.at("data"), "data");
      if (!j.contains("train_count"))
        throw ConfigError("config key \"train_count\" is required in mode \"bcdr-train-eval\"");
      cfg.train_count = get_int_min(j.at("train_count"), "train_count", 1);
      if (j.contains("agents")) cfg.agents = get_string_array(j.at("agents"), "agents");
      check_agent_names(cfg.agents, "agents");
      if (j.contains("passes")) cfg.passes = get_int_min(j.at("passes"), "passes", 1);
      if (j.contains("min_history"))
        cfg.min_history = get_int_min(j.at("min_history"), "min_history", 0);
      break;
    case ExperimentConfig::Mode::Synth:
      if (j.contains("teacher")) cfg.teacher = get_string(j.at("teacher"), "teacher");
      if (j.contains("opponent")) cfg.opponent = get_string(j.at("opponent"), "opponent");
      agent_class_of(cfg.teacher);
      agent_class_of(cfg.opponent);
      if (j.contains("count")) cfg.count = get_int_min(j.at("count"), "count", 1);
      if (j.contains("horizon")) cfg.horizon = get_int_min(j.at("horizon"), "horizon", 1);
      if (j.contains("output")) cfg.output = get_string(j.at("output"), "output");
      break;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["mode"] = mode_name(cfg.mode);
  j["payoffs"] = json{{"T", cfg.payoff.T()}, {"R", cfg.payoff.R()},
                      {"P", cfg.payoff.P()}, {"S", cfg.payoff.S()}};
  j["memory"] = cfg.memory;
  j["rounds"] = cfg.rounds;
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  j["gamma"] = cfg.gamma;
  j["epsilon"] = cfg.epsilon;
  j["exp3_gamma"] = cfg.exp3_gamma;
  j["exp4_gamma"] = cfg.exp4_gamma;
  j["linucb_alpha"] = cfg.linucb_alpha;
  j["cts_v"] = cfg.cts_v;
  j["split_threshold"] = threshold_to_json(cfg.split_threshold);
  j["t4t_rule"] = cfg.t4t_rule;
  j["workers"] = cfg.workers;
  j["plots"] = cfg.plots;
  j["out_dir"] = cfg.out_dir;
  switch (cfg.mode) {
    case ExperimentConfig::Mode::Pairwise:
      j["roster"] = cfg.roster;
      break;
    case ExperimentConfig::Mode::Triple:
      j["mab_pool"] = cfg.mab_pool;
      j["cb_pool"] = cfg.cb_pool;
      j["rl_pool"] = cfg.rl_pool;
      break;
    case ExperimentConfig::Mode::Mental: {
      j["pool"] = cfg.pool;
      std::vector<std::string> names;
      for (Profile p : cfg.profiles) names.push_back(profile_name(p));
      j["profiles"] = names;
      break;
    }
    case ExperimentConfig::Mode::Bcdr:
      j["data"] = cfg.data;
      j["agents"] = cfg.agents;
      j["train_count"] = cfg.train_count;
      j["passes"] = cfg.passes;
      j["min_history"] = cfg.min_history;
      break;
    case ExperimentConfig::Mode::Synth:
      j["teacher"] = cfg.teacher;
      j["opponent"] = cfg.opponent;
      j["count"] = cfg.count;
      j["horizon"] = cfg.horizon;
      j["output"] = cfg.output;
      break;
  }
  return j.dump(2) + "\n";
}

}  // namespace ipd
