#include "ipd/bcdr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "ipd/error.hpp"
#include "ipd/history.hpp"
#include "ipd/report_io.hpp"
#include "ipd/tournament.hpp"

namespace ipd {

namespace {

constexpr std::uint64_t kSynthSalt = 4;
constexpr std::uint64_t kBcdrSalt = 5;

const std::vector<std::string>& schema_columns() {
  static const std::vector<std::string> cols = {"trajectory_id", "round_index", "focal_action",
                                               "opponent_action", "T", "R", "P", "S", "source"};
  return cols;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& token, int line, int column) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError("ParseError", "expected a number, got \"" + token + "\"", line, column);
  }
}

int parse_round_index(const std::string& token, int line, int column) {
  const double v = parse_number(token, line, column);
  const int i = static_cast<int>(v);
  if (v != i || i < 1) {
    throw DataError("ParseError", "round_index must be a positive integer, got \"" + token + "\"",
                    line, column);
  }
  return i;
}

void shuffle_indices(std::vector<int>& idx, Rng& rng) {
  for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i) {
    std::swap(idx[i], idx[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
  }
}

/// One teacher-forced pass over a trajectory: the agent selects at the
/// recorded context, earns the 0/1 match reward, and the RECORDED joint
/// action (not the agent's) advances the window.
struct StepOutcome {
  Action agent_action;
  Action focal_action;
};

template <typename PerRound>
void teacher_forced_run(Agent& agent, const Trajectory& traj, HistoryWindow& window,
                        PerRound&& per_round) {
  window.clear();
  for (int t = 0; t < traj.horizon(); ++t) {
    const Observation obs{window.encode_context(), window.encode_state(), t};
    const Action a = agent.select_action(obs);
    const TrajectoryRecord& rec = traj.records[t];
    const double r_e = a == rec.focal ? 1.0 : 0.0;
    window.push(JointRecord{rec.focal, {rec.opponent}});
    Feedback fb;
    fb.chosen = a;
    fb.reward = r_e;
    fb.reward_norm = r_e;
    fb.next = Observation{window.encode_context(), window.encode_state(), t + 1};
    agent.observe(fb);
    per_round(t, StepOutcome{a, rec.focal});
  }
}

void require_two_player(const Agent& agent) {
  if (agent.config().game.players != 2) {
    throw ConfigError("demonstration trajectories are two-player; agent config has players = " +
                      std::to_string(agent.config().game.players));
  }
}

}  // namespace

std::vector<Trajectory> load_trajectories(const std::string& path, int min_history) {
  std::ifstream in(path);
  if (!in) throw DataError("IoError", "cannot open \"" + path + "\"");

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw DataError("SchemaError", "missing header row", 1);
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_fields(line);
  std::vector<int> col(schema_columns().size(), -1);
  for (std::size_t f = 0; f < header.size(); ++f) {
    const auto& cols = schema_columns();
    const auto it = std::find(cols.begin(), cols.end(), header[f]);
    if (it == cols.end()) {
      throw DataError("SchemaError", "unknown column \"" + header[f] + "\"", 1,
                      static_cast<int>(f + 1));
    }
    col[static_cast<std::size_t>(it - cols.begin())] = static_cast<int>(f);
  }
  for (std::size_t c = 0; c < col.size(); ++c) {
    if (col[c] < 0) throw DataError("SchemaError", "missing column \"" + schema_columns()[c] + "\"", 1);
  }

  std::vector<Trajectory> trajectories;
  std::unordered_set<std::string> finished;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != schema_columns().size()) {
      throw DataError("ParseError",
                      "expected " + std::to_string(schema_columns().size()) + " fields, got " +
                          std::to_string(fields.size()),
                      line_no);
    }
    auto field = [&](int c) -> const std::string& { return fields[static_cast<std::size_t>(col[c])]; };
    auto field_col = [&](int c) { return col[c] + 1; };  // 1-based for error reports

    const std::string& id = field(0);
    const int round = parse_round_index(field(1), line_no, field_col(1));
    TrajectoryRecord rec;
    rec.focal = parse_action(field(2), line_no, field_col(2));
    rec.opponent = parse_action(field(3), line_no, field_col(3));
    const double T = parse_number(field(4), line_no, field_col(4));
    const double R = parse_number(field(5), line_no, field_col(5));
    const double P = parse_number(field(6), line_no, field_col(6));
    const double S = parse_number(field(7), line_no, field_col(7));

    if (!trajectories.empty() && trajectories.back().id == id) {
      Trajectory& cur = trajectories.back();
      if (round != cur.horizon() + 1) {
        throw DataError("ParseError",
                        "round_index " + std::to_string(round) + " breaks the 1,2,... sequence of "
                            "trajectory \"" + id + "\"",
                        line_no, field_col(1));
      }
      if (T != cur.payoff.T() || R != cur.payoff.R() || P != cur.payoff.P() ||
          S != cur.payoff.S()) {
        throw DataError("SchemaError", "payoffs change within trajectory \"" + id + "\"", line_no);
      }
      cur.records.push_back(rec);
    } else {
      if (finished.count(id) > 0) {
        throw DataError("ParseError", "rows of trajectory \"" + id + "\" are not contiguous",
                        line_no);
      }
      if (!trajectories.empty()) finished.insert(trajectories.back().id);
      if (round != 1) {
        throw DataError("ParseError",
                        "trajectory \"" + id + "\" must start at round_index 1, got " +
                            std::to_string(round),
                        line_no, field_col(1));
      }
      Trajectory traj;
      traj.id = id;
      traj.source = field(8);
      try {
        traj.payoff = PayoffMatrix::validate(T, R, P, S);
      } catch (const PayoffError& e) {
        throw DataError("SchemaError", std::string("trajectory \"") + id + "\": " + e.what(),
                        line_no);
      }
      traj.records.push_back(rec);
      trajectories.push_back(std::move(traj));
    }
  }

  if (min_history > 0) {
    std::erase_if(trajectories,
                  [min_history](const Trajectory& t) { return t.horizon() < min_history; });
  }
  return trajectories;
}

void write_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories) {
  std::ofstream out(path);
  if (!out) throw DataError("IoError", "cannot write \"" + path + "\"");
  out << "trajectory_id,round_index,focal_action,opponent_action,T,R,P,S,source\n";
  for (const Trajectory& traj : trajectories) {
    for (int t = 0; t < traj.horizon(); ++t) {
      const TrajectoryRecord& rec = traj.records[t];
      out << traj.id << ',' << t + 1 << ',' << action_char(rec.focal) << ','
          << action_char(rec.opponent) << ',' << format9(traj.payoff.T()) << ','
          << format9(traj.payoff.R()) << ',' << format9(traj.payoff.P()) << ','
          << format9(traj.payoff.S()) << ',' << traj.source << '\n';
    }
  }
  if (!out) throw DataError("IoError", "write to \"" + path + "\" failed");
}

std::vector<Trajectory> synth_trajectories(const std::string& teacher, const std::string& opponent,
                                           int count, int horizon, const AgentConfig& agent_cfg,
                                           std::uint64_t seed) {
  if (count < 1) throw ConfigError("synthetic trajectory count must be >= 1");
  if (horizon < 1) throw ConfigError("synthetic trajectory horizon must be >= 1");

  SimParams params;
  params.agent = agent_cfg;
  params.agent.game.players = 2;
  params.agent.game.rounds = horizon;
  params.runs = count;
  params.seed = seed;
  params.workers = 1;
  const MatchResult match =
      run_match({SeatSpec::named(teacher), SeatSpec::named(opponent)}, params, kSynthSalt);

  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int run = 0; run < count; ++run) {
    Trajectory traj;
    traj.id = "synth-" + std::to_string(run);
    traj.source = teacher + "-vs-" + opponent;
    traj.payoff = params.agent.game.payoff;
    traj.records.reserve(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
      traj.records.push_back(
          TrajectoryRecord{match.series.action(run, t, 0), match.series.action(run, t, 1)});
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::pair<std::vector<Trajectory>, std::vector<Trajectory>> split_train_test(
    const std::vector<Trajectory>& trajectories, int train_count, std::uint64_t seed) {
  const int total = static_cast<int>(trajectories.size());
  if (train_count < 0 || train_count >= total) {
    throw DomainError("CountExceedsTotal", "train_count " + std::to_string(train_count) +
                                               " must lie in [0, " + std::to_string(total) + ")");
  }
  std::vector<int> idx(trajectories.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed(seed, {kBcdrSalt, 2}));
  shuffle_indices(idx, rng);

  std::vector<bool> in_train(trajectories.size(), false);
  for (int i = 0; i < train_count; ++i) in_train[static_cast<std::size_t>(idx[i])] = true;

  std::pair<std::vector<Trajectory>, std::vector<Trajectory>> out;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    (in_train[i] ? out.first : out.second).push_back(trajectories[i]);
  }
  return out;
}

void bcdr_train(Agent& agent, const std::vector<Trajectory>& trainset,
                const BcdrTrainParams& params) {
  require_two_player(agent);
  if (params.passes < 1) throw ConfigError("training passes must be >= 1");

  agent.reset(derive_seed(params.seed, {kBcdrSalt, 0}));
  Rng order_rng(derive_seed(params.seed, {kBcdrSalt, 1}));
  std::vector<int> order(trainset.size());
  std::iota(order.begin(), order.end(), 0);

  HistoryWindow window(agent.config().memory, 2);
  for (int pass = 0; pass < params.passes; ++pass) {
    shuffle_indices(order, order_rng);
    for (int oi : order) {
      teacher_forced_run(agent, trainset[static_cast<std::size_t>(oi)], window,
                         [](int, const StepOutcome&) {});
    }
  }
}

BcdrReport bcdr_eval(Agent& agent, const std::vector<Trajectory>& testset) {
  require_two_player(agent);
  if (testset.empty()) throw DomainError("EmptyTestSet", "evaluation needs at least one trajectory");

  int max_h = 0;
  for (const Trajectory& t : testset) max_h = std::max(max_h, t.horizon());

  std::vector<long long> agent_coop(max_h, 0);
  std::vector<long long> teacher_coop(max_h, 0);
  std::vector<long long> coverage(max_h, 0);
  long long matched = 0;
  long long rounds_total = 0;

  const bool was_frozen = agent.frozen();
  agent.set_frozen(true);
  HistoryWindow window(agent.config().memory, 2);
  for (const Trajectory& traj : testset) {
    teacher_forced_run(agent, traj, window, [&](int t, const StepOutcome& step) {
      agent_coop[t] += step.agent_action == Action::C ? 1 : 0;
      teacher_coop[t] += step.focal_action == Action::C ? 1 : 0;
      coverage[t] += 1;
      matched += step.agent_action == step.focal_action ? 1 : 0;
      rounds_total += 1;
    });
  }
  agent.set_frozen(was_frozen);

  BcdrReport report;
  report.agent_curve.resize(max_h);
  report.teacher_curve.resize(max_h);
  report.coverage = coverage;
  double gap_sum = 0.0;
  for (int t = 0; t < max_h; ++t) {
    report.agent_curve[t] = static_cast<double>(agent_coop[t]) / coverage[t];
    report.teacher_curve[t] = static_cast<double>(teacher_coop[t]) / coverage[t];
    gap_sum += std::abs(report.agent_curve[t] - report.teacher_curve[t]);
  }
  report.prediction_error = gap_sum / max_h;
  report.match_rate = static_cast<double>(matched) / rounds_total;
  return report;
}

BcdrReport bcdr_eval_replay(const std::vector<Trajectory>& testset) {
  if (testset.empty()) throw DomainError("EmptyTestSet", "evaluation needs at least one trajectory");

  int max_h = 0;
  for (const Trajectory& t : testset) max_h = std::max(max_h, t.horizon());
  std::vector<long long> teacher_coop(max_h, 0);
  std::vector<long long> coverage(max_h, 0);
  long long rounds_total = 0;
  for (const Trajectory& traj : testset) {
    for (int t = 0; t < traj.horizon(); ++t) {
      teacher_coop[t] += traj.records[static_cast<std::size_t>(t)].focal == Action::C ? 1 : 0;
      coverage[t] += 1;
      rounds_total += 1;
    }
  }

  BcdrReport report;
  report.agent_curve.resize(max_h);
  report.teacher_curve.resize(max_h);
  double gap_sum = 0.0;
  for (int t = 0; t < max_h; ++t) {
    report.teacher_curve[t] = static_cast<double>(teacher_coop[t]) / coverage[t];
    report.agent_curve[t] = report.teacher_curve[t];
    gap_sum += std::abs(report.agent_curve[t] - report.teacher_curve[t]);
  }
  report.prediction_error = gap_sum / max_h;
  report.match_rate = 1.0;
  report.coverage = std::move(coverage);
  return report;
}

}  // namespace ipd
