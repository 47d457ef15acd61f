#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipd/agent.hpp"

namespace ipd {

/// Simulation-wide parameters. Rounds and players live in agent.game; one
/// AgentConfig serves every seat.
struct SimParams {
  AgentConfig agent;
  int runs = 100;
  std::uint64_t seed = 2026;
  int workers = 1;  // <= 0 picks hardware concurrency
};

/// One seat of a match: which agent plays there, an optional profile override
/// (mental pools), and the label used in reports (defaults to the agent name).
struct SeatSpec {
  std::string agent;
  std::optional<Profile> profile;
  std::string label;

  static SeatSpec named(std::string name) {
    SeatSpec s;
    s.label = name;
    s.agent = std::move(name);
    return s;
  }
  static SeatSpec profiled(std::string name, Profile p) {
    SeatSpec s;
    s.agent = std::move(name);
    s.profile = p;
    s.label = profile_name(p);
    return s;
  }
};

/// Flat per-round record storage, indexed [run][round][seat].
struct MatchSeries {
  int runs = 0;
  int rounds = 0;
  int players = 0;
  std::vector<Action> actions;
  std::vector<double> rewards;       // raw payoff units
  std::vector<double> rewards_norm;  // in [0,1]

  std::size_t index(int run, int round, int seat) const {
    return (static_cast<std::size_t>(run) * rounds + round) * players + seat;
  }
  Action action(int run, int round, int seat) const { return actions[index(run, round, seat)]; }
  double reward(int run, int round, int seat) const { return rewards[index(run, round, seat)]; }
  double reward_norm(int run, int round, int seat) const {
    return rewards_norm[index(run, round, seat)];
  }
};

/// Per-seat measures aggregated over runs. `individual` is the mean per-round
/// normalized reward; `collective` is the exact sum of the per-seat
/// individuals; `relative` subtracts the seat mean of the individuals.
struct MatchAggregates {
  std::vector<double> individual;
  std::vector<double> individual_sd;
  std::vector<double> coop;
  std::vector<double> coop_sd;
  double collective = 0.0;
  std::vector<double> relative;
  std::vector<std::vector<double>> round_reward;  // [seat][round] mean over runs
  std::vector<std::vector<double>> round_coop;    // [seat][round] fraction cooperating
};

struct MatchResult {
  std::vector<std::string> seat_labels;
  std::vector<std::string> seat_agents;
  MatchSeries series;
  MatchAggregates agg;
};

/// Fraction of C in a non-empty action sequence.
/// Throws DomainError("EmptySeries") on an empty one.
double cooperation_rate(std::span<const Action> actions);

struct CollectiveRelative {
  double collective = 0.0;
  std::vector<double> relative;
};

/// collective = sum of rewards (seat order); relative_i = reward_i - mean.
CollectiveRelative collective_and_relative(std::span<const double> rewards);

/// Plays `runs` independent repetitions of one match. Every run resets each
/// agent with derive_seed(params.seed, {match_key, run, seat}), so a seat's
/// stream depends only on those coordinates. Agents see simultaneous-move
/// semantics: all seats commit before any feedback is delivered.
MatchResult run_match(std::span<Agent* const> agents, const SimParams& params,
                      std::uint64_t match_key);

/// Convenience overload that constructs the agents from seat specs.
MatchResult run_match(const std::vector<SeatSpec>& seats, const SimParams& params,
                      std::uint64_t match_key);

struct TournamentReport {
  enum class Design { Pairwise, Triple, Mental };

  Design design = Design::Pairwise;
  std::vector<std::string> labels;
  std::vector<MatchResult> matches;  // fixed enumeration order

  /// Long-format square matrices [row * n + col], filled for Pairwise and
  /// Mental designs: cell (i, j) holds label i's measure when playing label j
  /// (both seats of one match fill their own cells; the diagonal averages the
  /// two seats of the self-pair). The collective matrix carries the match
  /// value in both cells.
  std::vector<double> individual_matrix;
  std::vector<double> collective_matrix;
  std::vector<double> relative_matrix;
  std::vector<double> coop_matrix;

  /// Per-round mean curves grouped by agent class (Pairwise, Triple) or by
  /// profile label (Mental).
  std::vector<std::string> curve_labels;
  std::vector<std::vector<double>> curve_reward;  // [group][round]
  std::vector<std::vector<double>> curve_coop;

  int n() const { return static_cast<int>(labels.size()); }
  double cell(const std::vector<double>& m, int row, int col) const {
    return m[static_cast<std::size_t>(row) * labels.size() + col];
  }
};

/// All unordered pairs of the pool including self-pairs, in (i, j<=i..n)
/// lexicographic order. Match keys derive from pool positions, so appending
/// agents to the pool never changes existing matches.
TournamentReport round_robin(const std::vector<SeatSpec>& pool, const SimParams& params);

/// Cartesian product of the three class pools as 3-player matches.
/// params.agent.game.players must be 3.
TournamentReport run_triples(const std::vector<std::string>& mab_pool,
                             const std::vector<std::string>& cb_pool,
                             const std::vector<std::string>& rl_pool, const SimParams& params);

/// Round-robin over one split agent instantiated per profile, labeled by
/// profile abbreviation. `cls` picks the agent: MAB -> HBTS, CB -> SCTS,
/// RL -> SQL.
TournamentReport run_mental_pool(AgentClass cls, const std::vector<Profile>& profiles,
                                 const SimParams& params);

/// Mean of a matrix measure over the rows whose label belongs to `cls`,
/// excluding nothing else; used for the class-ordering summary.
double class_mean(const TournamentReport& report, const std::vector<double>& matrix,
                  AgentClass cls);

}  // namespace ipd
