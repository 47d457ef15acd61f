#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ipd/agent.hpp"
#include "ipd/payoff.hpp"

namespace ipd {

/// One recorded round of a two-player demonstration.
struct TrajectoryRecord {
  Action focal = Action::C;
  Action opponent = Action::C;
};

/// A teacher demonstration: the focal seat's actions with the opponent's,
/// plus the payoff matrix the game was played under.
struct Trajectory {
  std::string id;
  std::vector<TrajectoryRecord> records;
  PayoffMatrix payoff = PayoffMatrix::classical();
  std::string source;

  int horizon() const { return static_cast<int>(records.size()); }
};

/// Reads the trajectory CSV (UTF-8, header required; columns trajectory_id,
/// round_index, focal_action, opponent_action, T, R, P, S, source in any
/// order). Rows of one trajectory must be contiguous with round_index
/// counting 1, 2, ... and constant payoffs; the payoffs must satisfy the
/// dilemma inequalities. min_history > 0 keeps only trajectories with at
/// least that many rounds (9 reproduces the original selection).
/// Throws DataError: SchemaError (header problems, inconsistent payoffs),
/// ParseError (malformed rows, with line/column), ActionCodeError,
/// IoError (unreadable file).
std::vector<Trajectory> load_trajectories(const std::string& path, int min_history = 0);

/// Writes trajectories in the schema load_trajectories reads.
void write_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories);

/// Plays `count` seeded runs of teacher vs opponent and records the teacher
/// seat as focal. Runs are independent (distinct derived seeds).
std::vector<Trajectory> synth_trajectories(const std::string& teacher, const std::string& opponent,
                                           int count, int horizon, const AgentConfig& agent_cfg,
                                           std::uint64_t seed);

/// Seed-reproducible uniform split without replacement.
/// Throws DomainError("CountExceedsTotal") unless 0 <= train_count < total.
std::pair<std::vector<Trajectory>, std::vector<Trajectory>> split_train_test(
    const std::vector<Trajectory>& trajectories, int train_count, std::uint64_t seed);

struct BcdrTrainParams {
  int passes = 1;
  std::uint64_t seed = 2026;
};

/// Demonstration-reward training. Each round the observation is built from
/// the RECORDED focal/opponent actions (teacher forcing), the agent selects,
/// and it observes r_e = 1 if its action matched the focal action else 0
/// (fed as both raw and normalized reward). Trajectories are presented in a
/// seeded random order, reshuffled per pass; the agent is reset once at the
/// start from the same seed.
void bcdr_train(Agent& agent, const std::vector<Trajectory>& trainset,
                const BcdrTrainParams& params);

/// Held-out evaluation result. Curves are indexed by round (0-based), each
/// averaged over the trajectories that reach that round; coverage counts
/// them. prediction_error is the mean absolute curve gap over all rounds;
/// match_rate the fraction of (trajectory, round) pairs where the agent
/// reproduced the focal action.
struct BcdrReport {
  std::vector<double> agent_curve;
  std::vector<double> teacher_curve;
  std::vector<long long> coverage;
  double prediction_error = 0.0;
  double match_rate = 0.0;

  int horizon() const { return static_cast<int>(agent_curve.size()); }
};

/// Frozen evaluation: learning is disabled for the duration (the previous
/// frozen flag is restored), histories reset between trajectories, and
/// observations are teacher-forced exactly as in training.
/// Throws DomainError("EmptyTestSet") on an empty test set.
BcdrReport bcdr_eval(Agent& agent, const std::vector<Trajectory>& testset);

/// The teacher-replayer baseline: an oracle that plays the recorded focal
/// action every round. Its prediction error is 0 by construction; any
/// positive value in this path is a pipeline bug.
BcdrReport bcdr_eval_replay(const std::vector<Trajectory>& testset);

}  // namespace ipd
