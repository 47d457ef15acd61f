#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ipd/bandits.hpp"
#include "ipd/history.hpp"
#include "ipd/linear.hpp"
#include "ipd/payoff.hpp"
#include "ipd/rng.hpp"
#include "ipd/split.hpp"
#include "ipd/tabular.hpp"

namespace ipd {

/// What an agent sees before choosing: the context encoding and state id of
/// its own history window, plus the 0-based round index within the run.
struct Observation {
  ContextVector context;
  StateId state = 0;
  int round = 0;
};

/// Round outcome delivered after all seats have committed. `chosen` is the
/// action credited with the reward (the agent's own play), `next` the
/// observation after this round entered the window.
struct Feedback {
  Action chosen = Action::C;
  double reward = 0.0;       // raw payoff units
  double reward_norm = 0.0;  // payoff mapped into [0,1]
  Observation next;
};

enum class AgentClass { Handcrafted, MAB, CB, RL };

const std::string& agent_class_name(AgentClass c);

/// Shared hyperparameters. One config serves every agent type; each type
/// reads only the fields it uses.
struct AgentConfig {
  GameSpec game;
  int memory = 1;  // history window length n

  double gamma = 0.95;    // RL discount
  double epsilon = 0.05;  // e-greedy exploration, also used by tabular RL
  double exp3_gamma = 0.1;
  double exp4_gamma = 0.1;
  double linucb_alpha = 1.0;  // UCB exploration scale
  double cts_v = 0.25;        // posterior scale for CTS / SCTS

  Profile profile = Profile::Standard;               // split agents only
  SplitThreshold split_threshold = SplitThreshold::mean();
  std::string t4t_rule = "any";  // "any" or "majority", k > 2 only

  int context_dim() const { return memory * (1 << game.players); }
  StateId table_rows() const;  // (2^k)^memory + 1; throws ConfigError over the cap
};

/// Uniform agent lifecycle. A match round is select_action(obs) for every
/// seat, then observe(feedback) for every seat; observe always refers to the
/// observation passed to the latest select_action. reset(seed) restores the
/// initial state and reseeds the private stream, so equal seeds give equal
/// trajectories.
class Agent {
 public:
  Agent(std::string name, AgentClass cls, const AgentConfig& cfg)
      : cfg_(cfg), name_(std::move(name)), class_(cls) {}
  virtual ~Agent() = default;

  const std::string& name() const { return name_; }
  AgentClass agent_class() const { return class_; }
  const AgentConfig& config() const { return cfg_; }

  virtual Action select_action(const Observation& obs) = 0;

  /// Applies feedback unless learning is frozen.
  void observe(const Feedback& fb) {
    if (!frozen_) do_observe(fb);
  }

  void reset(std::uint64_t seed) {
    rng_.seed(seed);
    do_reset();
  }

  void set_frozen(bool frozen) { frozen_ = frozen; }
  bool frozen() const { return frozen_; }

  /// Fingerprint of the learned state only: value tables, accumulators,
  /// linear models. Excludes the RNG stream and selection bookkeeping, so a
  /// frozen agent keeps a constant hash while still acting.
  virtual std::uint64_t learned_state_hash() const = 0;

 protected:
  virtual void do_observe(const Feedback& fb) = 0;
  virtual void do_reset() = 0;

  AgentConfig cfg_;
  Rng rng_;

 private:
  std::string name_;
  AgentClass class_;
  bool frozen_ = false;
};

/// Joint-action code of the newest round in a context encoding, or -1 before
/// any round has been played (all-zero context).
int latest_joint_code(const ContextVector& ctx);

/// Number of opponents who defected in a joint code (own bit excluded).
int opponent_defections(int code, int players);

/// Dense copy of a context for the linear learners.
Eigen::VectorXd context_to_vector(const ContextVector& ctx);

// Handcrafted policies.

class CoopAgent final : public Agent {
 public:
  explicit CoopAgent(const AgentConfig& cfg) : Agent("Coop", AgentClass::Handcrafted, cfg) {}
  Action select_action(const Observation&) override { return Action::C; }
  std::uint64_t learned_state_hash() const override { return 0; }

 protected:
  void do_observe(const Feedback&) override {}
  void do_reset() override {}
};

class DfctAgent final : public Agent {
 public:
  explicit DfctAgent(const AgentConfig& cfg) : Agent("Dfct", AgentClass::Handcrafted, cfg) {}
  Action select_action(const Observation&) override { return Action::D; }
  std::uint64_t learned_state_hash() const override { return 0; }

 protected:
  void do_observe(const Feedback&) override {}
  void do_reset() override {}
};

/// Uniform coin-flip policy; handy as a maximally unpredictable opponent.
class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(const AgentConfig& cfg) : Agent("Random", AgentClass::Handcrafted, cfg) {}
  Action select_action(const Observation&) override {
    return action_from_code(rng_.uniform_int(kNumActions));
  }
  std::uint64_t learned_state_hash() const override { return 0; }

 protected:
  void do_observe(const Feedback&) override {}
  void do_reset() override {}
};

/// Cooperates first, then mirrors the opponents' newest move as read from the
/// context encoding. With more than one opponent, rule "any" defects when at
/// least one opponent defected, "majority" when strictly more than half did.
class Tit4TatAgent final : public Agent {
 public:
  explicit Tit4TatAgent(const AgentConfig& cfg);
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override { return 0; }

 protected:
  void do_observe(const Feedback&) override {}
  void do_reset() override {}

 private:
  bool majority_;
};

// Context-free bandits. All consume normalized rewards.

class TsAgent final : public Agent {
 public:
  explicit TsAgent(const AgentConfig& cfg) : Agent("TS", AgentClass::MAB, cfg) { do_reset(); }
  Action select_action(const Observation&) override;
  std::uint64_t learned_state_hash() const override;
  const ThompsonBandit& bandit() const { return bandit_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override { bandit_.reset(kNumActions); }

 private:
  ThompsonBandit bandit_;
};

class Ucb1Agent final : public Agent {
 public:
  explicit Ucb1Agent(const AgentConfig& cfg) : Agent("UCB1", AgentClass::MAB, cfg) { do_reset(); }
  Action select_action(const Observation&) override;
  std::uint64_t learned_state_hash() const override;
  const Ucb1Bandit& bandit() const { return bandit_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override { bandit_.reset(kNumActions); }

 private:
  Ucb1Bandit bandit_;
};

class EgreedyAgent final : public Agent {
 public:
  explicit EgreedyAgent(const AgentConfig& cfg) : Agent("eGreedy", AgentClass::MAB, cfg) {
    do_reset();
  }
  Action select_action(const Observation&) override;
  std::uint64_t learned_state_hash() const override;
  const EpsilonGreedyBandit& bandit() const { return bandit_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override { bandit_.reset(kNumActions); }

 private:
  EpsilonGreedyBandit bandit_;
};

class Exp3Agent final : public Agent {
 public:
  explicit Exp3Agent(const AgentConfig& cfg) : Agent("EXP3", AgentClass::MAB, cfg) { do_reset(); }
  Action select_action(const Observation&) override;
  std::uint64_t learned_state_hash() const override;
  const Exp3Bandit& bandit() const { return bandit_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  Exp3Bandit bandit_;
  std::vector<double> last_probs_;  // distribution the last action was drawn from
};

/// Split Thompson sampling over positive/negative accumulators; profile
/// jitter is sampled once per reset from the agent's own stream.
class HbtsAgent final : public Agent {
 public:
  explicit HbtsAgent(const AgentConfig& cfg) : Agent("HBTS", AgentClass::MAB, cfg) { do_reset(); }
  Action select_action(const Observation&) override;
  std::uint64_t learned_state_hash() const override;
  const HbtsBandit& bandit() const { return bandit_; }
  const SplitParams& params() const { return params_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  HbtsBandit bandit_;
  SplitParams params_;
};

// Contextual bandits over the one-hot history encoding. All consume
// normalized rewards except SCTS, which splits the raw payoff.

class LinUcbAgent final : public Agent {
 public:
  explicit LinUcbAgent(const AgentConfig& cfg) : Agent("LinUCB", AgentClass::CB, cfg) {
    do_reset();
  }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const LinUcbCore& core() const { return core_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  LinUcbCore core_;
  Eigen::VectorXd last_x_;
};

class CtsAgent final : public Agent {
 public:
  explicit CtsAgent(const AgentConfig& cfg) : Agent("CTS", AgentClass::CB, cfg) { do_reset(); }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const CtsCore& core() const { return core_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  CtsCore core_;
  Eigen::VectorXd last_x_;
};

/// EXP4 over the four memory-1 reactive experts: always-C, always-D, mirror
/// the opponents' newest move, invert it. Each expert emits a point-mass
/// advice row; before any history the rows are C, D, C, D.
class Exp4Agent final : public Agent {
 public:
  static constexpr int kExperts = 4;

  explicit Exp4Agent(const AgentConfig& cfg) : Agent("EXP4", AgentClass::CB, cfg) { do_reset(); }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const Exp4Core& core() const { return core_; }

  /// Advice matrix for a context; exposed for direct formula checks.
  std::vector<std::vector<double>> advice_for(const ContextVector& ctx) const;

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  Exp4Core core_;
  std::vector<std::vector<double>> last_advice_;
  std::vector<double> last_probs_;
};

class SctsAgent final : public Agent {
 public:
  explicit SctsAgent(const AgentConfig& cfg) : Agent("SCTS", AgentClass::CB, cfg) { do_reset(); }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const SctsCore& core() const { return core_; }
  const SplitParams& params() const { return params_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  SctsCore core_;
  SplitParams params_;
  Eigen::VectorXd last_x_;
};

// Tabular RL over the state-id encoding. All consume raw payoffs and select
// e-greedily over their value tables.

class QlAgent final : public Agent {
 public:
  explicit QlAgent(const AgentConfig& cfg) : Agent("QL", AgentClass::RL, cfg) { do_reset(); }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const QlCore& core() const { return core_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  QlCore core_;
  StateId last_state_ = 0;
};

class DqlAgent final : public Agent {
 public:
  explicit DqlAgent(const AgentConfig& cfg) : Agent("DQL", AgentClass::RL, cfg) { do_reset(); }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const DqlCore& core() const { return core_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  DqlCore core_;
  StateId last_state_ = 0;
};

/// SARSA commits its next action when the feedback arrives (consuming the
/// selection draw there) and replays it on the matching select_action call.
class SarsaAgent final : public Agent {
 public:
  explicit SarsaAgent(const AgentConfig& cfg) : Agent("SARSA", AgentClass::RL, cfg) {
    do_reset();
  }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const SarsaCore& core() const { return core_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  struct Pending {
    StateId state;
    Action action;
  };
  SarsaCore core_;
  StateId last_state_ = 0;
  std::optional<Pending> pending_;
};

class SqlAgent final : public Agent {
 public:
  explicit SqlAgent(const AgentConfig& cfg) : Agent("SQL", AgentClass::RL, cfg) { do_reset(); }
  Action select_action(const Observation& obs) override;
  std::uint64_t learned_state_hash() const override;
  const SqlCore& core() const { return core_; }
  const SplitParams& params() const { return params_; }

 protected:
  void do_observe(const Feedback& fb) override;
  void do_reset() override;

 private:
  SqlCore core_;
  SplitParams params_;
  StateId last_state_ = 0;
};

/// Builds an agent by its roster name. Throws ConfigError for unknown names.
std::unique_ptr<Agent> make_agent(const std::string& name, const AgentConfig& cfg);

/// Class of a roster name without constructing the agent.
AgentClass agent_class_of(const std::string& name);

/// The 14 agents of the default pairwise tournament: the full zoo minus the
/// two split variants HBTS and SCTS, which run in the mental-profile pools.
const std::vector<std::string>& default_pairwise_roster();

/// Class pools used by the three-agent tournaments.
const std::vector<std::string>& default_mab_pool();  // TS, UCB1, eGreedy, EXP3, HBTS
const std::vector<std::string>& default_cb_pool();   // CTS, LinUCB, EXP4, SCTS
const std::vector<std::string>& default_rl_pool();   // QL, DQL, SARSA, SQL

/// The split agent representing a learner class in the mental-profile pools.
const std::string& mental_agent_for(AgentClass cls);  // MAB->HBTS, CB->SCTS, RL->SQL

}  // namespace ipd
