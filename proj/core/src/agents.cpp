#include "ipd/agent.hpp"

#include <array>
#include <bit>

#include "ipd/error.hpp"

namespace ipd {

namespace {

// Generous guard against accidental (2^k)^n blow-ups; a cap failure is a
// configuration problem, not a runtime one.
constexpr StateId kMaxTableRows = StateId{1} << 22;

void check_context_dim(const ContextVector& ctx, const AgentConfig& cfg) {
  if (ctx.dimension() != cfg.context_dim()) {
    throw DomainError("DimensionMismatch",
                      "context has dimension " + std::to_string(ctx.dimension()) +
                          ", agent expects " + std::to_string(cfg.context_dim()));
  }
}

void check_observed_x(const Eigen::VectorXd& x, const AgentConfig& cfg) {
  if (static_cast<int>(x.size()) != cfg.context_dim()) {
    throw DomainError("DimensionMismatch", "observe called before select_action");
  }
}

void add_span(StateHash& h, std::span<const double> values) {
  for (double v : values) h.add(v);
}

void add_matrix(StateHash& h, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) h.add(m.data()[i]);
}

void add_vector(StateHash& h, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) h.add(v[i]);
}

void add_params(StateHash& h, const SplitParams& p) {
  h.add(p.lambda_pos);
  h.add(p.w_pos);
  h.add(p.lambda_neg);
  h.add(p.w_neg);
}

void add_model(StateHash& h, const LinearModel& m) {
  add_matrix(h, m.A);
  add_vector(h, m.b);
}

}  // namespace

const std::string& agent_class_name(AgentClass c) {
  static const std::array<std::string, 4> names = {"HANDCRAFTED", "MAB", "CB", "RL"};
  return names[static_cast<int>(c)];
}

StateId AgentConfig::table_rows() const {
  StateId rows = 1;
  const StateId width = StateId{1} << game.players;
  for (int i = 0; i < memory; ++i) {
    rows *= width;
    if (rows > kMaxTableRows) {
      throw ConfigError("state table too large: (2^" + std::to_string(game.players) + ")^" +
                        std::to_string(memory) + " exceeds " + std::to_string(kMaxTableRows) +
                        " states; reduce memory or players");
    }
  }
  return rows + 1;  // extra row for the pre-game state
}

int latest_joint_code(const ContextVector& ctx) {
  if (ctx.memory <= 0) return -1;
  const int width = 1 << ctx.players;
  const int base = (ctx.memory - 1) * width;
  for (int i = 0; i < width; ++i) {
    if (ctx.values[base + i] != 0.0) return i;
  }
  return -1;
}

int opponent_defections(int code, int players) {
  const int opp_mask = (1 << (players - 1)) - 1;
  return std::popcount(static_cast<unsigned>(code & opp_mask));
}

Eigen::VectorXd context_to_vector(const ContextVector& ctx) {
  return Eigen::Map<const Eigen::VectorXd>(ctx.values.data(), ctx.dimension());
}

Tit4TatAgent::Tit4TatAgent(const AgentConfig& cfg)
    : Agent("Tit4Tat", AgentClass::Handcrafted, cfg) {
  if (cfg.t4t_rule != "any" && cfg.t4t_rule != "majority") {
    throw ConfigError("t4t_rule must be \"any\" or \"majority\", got \"" + cfg.t4t_rule + "\"");
  }
  majority_ = cfg.t4t_rule == "majority";
}

Action Tit4TatAgent::select_action(const Observation& obs) {
  check_context_dim(obs.context, cfg_);
  const int code = latest_joint_code(obs.context);
  if (code < 0) return Action::C;
  const int defectors = opponent_defections(code, cfg_.game.players);
  const int opponents = cfg_.game.players - 1;
  const bool retaliate = majority_ ? 2 * defectors > opponents : defectors > 0;
  return retaliate ? Action::D : Action::C;
}

Action TsAgent::select_action(const Observation&) {
  return action_from_code(bandit_.select(rng_));
}

void TsAgent::do_observe(const Feedback& fb) {
  bandit_.update(action_code(fb.chosen), fb.reward_norm);
}

std::uint64_t TsAgent::learned_state_hash() const {
  StateHash h;
  add_span(h, bandit_.alphas());
  add_span(h, bandit_.betas());
  return h.digest();
}

Action Ucb1Agent::select_action(const Observation&) {
  return action_from_code(bandit_.select());
}

void Ucb1Agent::do_observe(const Feedback& fb) {
  bandit_.update(action_code(fb.chosen), fb.reward_norm);
}

std::uint64_t Ucb1Agent::learned_state_hash() const {
  StateHash h;
  add_span(h, bandit_.means());
  for (int c : bandit_.counts()) h.add(static_cast<std::uint64_t>(c));
  h.add(static_cast<std::uint64_t>(bandit_.total_pulls()));
  return h.digest();
}

Action EgreedyAgent::select_action(const Observation&) {
  return action_from_code(bandit_.select(cfg_.epsilon, rng_));
}

void EgreedyAgent::do_observe(const Feedback& fb) {
  bandit_.update(action_code(fb.chosen), fb.reward_norm);
}

std::uint64_t EgreedyAgent::learned_state_hash() const {
  StateHash h;
  add_span(h, bandit_.means());
  for (int c : bandit_.counts()) h.add(static_cast<std::uint64_t>(c));
  return h.digest();
}

void Exp3Agent::do_reset() {
  bandit_.reset(kNumActions);
  last_probs_.clear();
}

Action Exp3Agent::select_action(const Observation&) {
  last_probs_ = bandit_.probabilities(cfg_.exp3_gamma);
  return action_from_code(sample_discrete(last_probs_, rng_));
}

void Exp3Agent::do_observe(const Feedback& fb) {
  if (last_probs_.empty()) last_probs_ = bandit_.probabilities(cfg_.exp3_gamma);
  const int arm = action_code(fb.chosen);
  bandit_.update(arm, fb.reward_norm, cfg_.exp3_gamma, last_probs_[arm]);
}

std::uint64_t Exp3Agent::learned_state_hash() const {
  StateHash h;
  for (int k = 0; k < bandit_.arms(); ++k) h.add(bandit_.weight(k));
  return h.digest();
}

void HbtsAgent::do_reset() {
  bandit_.reset(kNumActions);
  params_ = profile_params(cfg_.profile, rng_);
}

Action HbtsAgent::select_action(const Observation&) {
  return action_from_code(bandit_.select(rng_));
}

void HbtsAgent::do_observe(const Feedback& fb) {
  const SplitReward r = split_reward(fb.reward, cfg_.split_threshold, cfg_.game.payoff);
  bandit_.update(action_code(fb.chosen), r, params_);
}

std::uint64_t HbtsAgent::learned_state_hash() const {
  StateHash h;
  add_span(h, bandit_.positives());
  add_span(h, bandit_.negatives());
  add_params(h, params_);
  return h.digest();
}

void LinUcbAgent::do_reset() {
  core_.reset(kNumActions, cfg_.context_dim());
  last_x_.resize(0);
}

Action LinUcbAgent::select_action(const Observation& obs) {
  check_context_dim(obs.context, cfg_);
  last_x_ = context_to_vector(obs.context);
  return action_from_code(core_.select(last_x_, cfg_.linucb_alpha));
}

void LinUcbAgent::do_observe(const Feedback& fb) {
  check_observed_x(last_x_, cfg_);
  core_.update(action_code(fb.chosen), last_x_, fb.reward_norm);
}

std::uint64_t LinUcbAgent::learned_state_hash() const {
  StateHash h;
  for (int k = 0; k < core_.arms(); ++k) add_model(h, core_.model(k));
  return h.digest();
}

void CtsAgent::do_reset() {
  core_.reset(kNumActions, cfg_.context_dim());
  last_x_.resize(0);
}

Action CtsAgent::select_action(const Observation& obs) {
  check_context_dim(obs.context, cfg_);
  last_x_ = context_to_vector(obs.context);
  return action_from_code(core_.select(last_x_, cfg_.cts_v, rng_));
}

void CtsAgent::do_observe(const Feedback& fb) {
  check_observed_x(last_x_, cfg_);
  core_.update(action_code(fb.chosen), last_x_, fb.reward_norm);
}

std::uint64_t CtsAgent::learned_state_hash() const {
  StateHash h;
  for (int k = 0; k < core_.arms(); ++k) add_model(h, core_.model(k));
  return h.digest();
}

void Exp4Agent::do_reset() {
  core_.reset(kExperts, kNumActions);
  last_advice_.clear();
  last_probs_.clear();
}

std::vector<std::vector<double>> Exp4Agent::advice_for(const ContextVector& ctx) const {
  const int code = latest_joint_code(ctx);
  const bool opp_defected = code >= 0 && opponent_defections(code, cfg_.game.players) > 0;
  auto point = [](Action a) {
    std::vector<double> row(kNumActions, 0.0);
    row[action_code(a)] = 1.0;
    return row;
  };
  return {point(Action::C), point(Action::D), point(opp_defected ? Action::D : Action::C),
          point(opp_defected ? Action::C : Action::D)};
}

Action Exp4Agent::select_action(const Observation& obs) {
  check_context_dim(obs.context, cfg_);
  last_advice_ = advice_for(obs.context);
  last_probs_ = core_.probabilities(last_advice_, cfg_.exp4_gamma);
  return action_from_code(sample_discrete(last_probs_, rng_));
}

void Exp4Agent::do_observe(const Feedback& fb) {
  if (last_probs_.empty()) {
    throw DomainError("DimensionMismatch", "observe called before select_action");
  }
  const int arm = action_code(fb.chosen);
  core_.update(last_advice_, arm, fb.reward_norm, cfg_.exp4_gamma, last_probs_[arm]);
}

std::uint64_t Exp4Agent::learned_state_hash() const {
  StateHash h;
  for (int e = 0; e < core_.experts(); ++e) h.add(core_.weight(e));
  return h.digest();
}

void SctsAgent::do_reset() {
  core_.reset(kNumActions, cfg_.context_dim());
  params_ = profile_params(cfg_.profile, rng_);
  last_x_.resize(0);
}

Action SctsAgent::select_action(const Observation& obs) {
  check_context_dim(obs.context, cfg_);
  last_x_ = context_to_vector(obs.context);
  return action_from_code(core_.select(last_x_, cfg_.cts_v, params_, rng_));
}

void SctsAgent::do_observe(const Feedback& fb) {
  check_observed_x(last_x_, cfg_);
  const SplitReward r = split_reward(fb.reward, cfg_.split_threshold, cfg_.game.payoff);
  core_.update(action_code(fb.chosen), last_x_, r, params_);
}

std::uint64_t SctsAgent::learned_state_hash() const {
  StateHash h;
  for (int k = 0; k < core_.arms(); ++k) {
    add_model(h, core_.positive(k));
    add_model(h, core_.negative(k));
  }
  add_params(h, params_);
  return h.digest();
}

void QlAgent::do_reset() {
  core_.reset(cfg_.table_rows(), kNumActions);
  last_state_ = 0;
}

Action QlAgent::select_action(const Observation& obs) {
  last_state_ = obs.state;
  return action_from_code(egreedy_select(core_.action_values(obs.state), cfg_.epsilon, rng_));
}

void QlAgent::do_observe(const Feedback& fb) {
  core_.update(last_state_, action_code(fb.chosen), fb.reward, fb.next.state, cfg_.gamma);
}

std::uint64_t QlAgent::learned_state_hash() const {
  StateHash h;
  add_span(h, core_.q().data());
  for (long long n : core_.counts().data()) h.add(static_cast<std::uint64_t>(n));
  return h.digest();
}

void DqlAgent::do_reset() {
  core_.reset(cfg_.table_rows(), kNumActions);
  last_state_ = 0;
}

Action DqlAgent::select_action(const Observation& obs) {
  last_state_ = obs.state;
  return action_from_code(egreedy_select(core_.action_values(obs.state), cfg_.epsilon, rng_));
}

void DqlAgent::do_observe(const Feedback& fb) {
  core_.update(last_state_, action_code(fb.chosen), fb.reward, fb.next.state, cfg_.gamma, rng_);
}

std::uint64_t DqlAgent::learned_state_hash() const {
  StateHash h;
  add_span(h, core_.q1().data());
  add_span(h, core_.q2().data());
  for (long long n : core_.counts().data()) h.add(static_cast<std::uint64_t>(n));
  return h.digest();
}

void SarsaAgent::do_reset() {
  core_.reset(cfg_.table_rows(), kNumActions);
  last_state_ = 0;
  pending_.reset();
}

Action SarsaAgent::select_action(const Observation& obs) {
  last_state_ = obs.state;
  if (!frozen() && pending_ && pending_->state == obs.state) {
    const Action a = pending_->action;
    pending_.reset();
    return a;
  }
  pending_.reset();
  return action_from_code(egreedy_select(core_.action_values(obs.state), cfg_.epsilon, rng_));
}

void SarsaAgent::do_observe(const Feedback& fb) {
  const int next_a = egreedy_select(core_.action_values(fb.next.state), cfg_.epsilon, rng_);
  core_.update(last_state_, action_code(fb.chosen), fb.reward, fb.next.state, next_a, cfg_.gamma);
  pending_ = Pending{fb.next.state, action_from_code(next_a)};
}

std::uint64_t SarsaAgent::learned_state_hash() const {
  StateHash h;
  add_span(h, core_.q().data());
  for (long long n : core_.counts().data()) h.add(static_cast<std::uint64_t>(n));
  return h.digest();
}

void SqlAgent::do_reset() {
  core_.reset(cfg_.table_rows(), kNumActions);
  params_ = profile_params(cfg_.profile, rng_);
  last_state_ = 0;
}

Action SqlAgent::select_action(const Observation& obs) {
  last_state_ = obs.state;
  return action_from_code(egreedy_select(core_.action_values(obs.state), cfg_.epsilon, rng_));
}

void SqlAgent::do_observe(const Feedback& fb) {
  const SplitReward r = split_reward(fb.reward, cfg_.split_threshold, cfg_.game.payoff);
  core_.update(last_state_, action_code(fb.chosen), r, fb.next.state, cfg_.gamma, params_);
}

std::uint64_t SqlAgent::learned_state_hash() const {
  StateHash h;
  add_span(h, core_.positive().data());
  add_span(h, core_.negative().data());
  for (long long n : core_.counts().data()) h.add(static_cast<std::uint64_t>(n));
  add_params(h, params_);
  return h.digest();
}

std::unique_ptr<Agent> make_agent(const std::string& name, const AgentConfig& cfg) {
  if (name == "Coop") return std::make_unique<CoopAgent>(cfg);
  if (name == "Dfct") return std::make_unique<DfctAgent>(cfg);
  if (name == "Random") return std::make_unique<RandomAgent>(cfg);
  if (name == "Tit4Tat") return std::make_unique<Tit4TatAgent>(cfg);
  if (name == "TS") return std::make_unique<TsAgent>(cfg);
  if (name == "UCB1") return std::make_unique<Ucb1Agent>(cfg);
  if (name == "eGreedy") return std::make_unique<EgreedyAgent>(cfg);
  if (name == "EXP3") return std::make_unique<Exp3Agent>(cfg);
  if (name == "HBTS") return std::make_unique<HbtsAgent>(cfg);
  if (name == "CTS") return std::make_unique<CtsAgent>(cfg);
  if (name == "LinUCB") return std::make_unique<LinUcbAgent>(cfg);
  if (name == "EXP4") return std::make_unique<Exp4Agent>(cfg);
  if (name == "SCTS") return std::make_unique<SctsAgent>(cfg);
  if (name == "QL") return std::make_unique<QlAgent>(cfg);
  if (name == "DQL") return std::make_unique<DqlAgent>(cfg);
  if (name == "SARSA") return std::make_unique<SarsaAgent>(cfg);
  if (name == "SQL") return std::make_unique<SqlAgent>(cfg);
  throw ConfigError("unknown agent \"" + name + "\"");
}

AgentClass agent_class_of(const std::string& name) {
  if (name == "Coop" || name == "Dfct" || name == "Random" || name == "Tit4Tat") {
    return AgentClass::Handcrafted;
  }
  if (name == "TS" || name == "UCB1" || name == "eGreedy" || name == "EXP3" || name == "HBTS") {
    return AgentClass::MAB;
  }
  if (name == "CTS" || name == "LinUCB" || name == "EXP4" || name == "SCTS") {
    return AgentClass::CB;
  }
  if (name == "QL" || name == "DQL" || name == "SARSA" || name == "SQL") {
    return AgentClass::RL;
  }
  throw ConfigError("unknown agent \"" + name + "\"");
}

const std::vector<std::string>& default_pairwise_roster() {
  static const std::vector<std::string> roster = {
      "Coop", "Dfct", "Tit4Tat", "TS",  "UCB1", "eGreedy", "EXP3",
      "CTS",  "LinUCB", "EXP4",  "QL", "DQL",  "SARSA",   "SQL"};
  return roster;
}

const std::vector<std::string>& default_mab_pool() {
  static const std::vector<std::string> pool = {"TS", "UCB1", "eGreedy", "EXP3", "HBTS"};
  return pool;
}

const std::vector<std::string>& default_cb_pool() {
  static const std::vector<std::string> pool = {"CTS", "LinUCB", "EXP4", "SCTS"};
  return pool;
}

const std::vector<std::string>& default_rl_pool() {
  static const std::vector<std::string> pool = {"QL", "DQL", "SARSA", "SQL"};
  return pool;
}

const std::string& mental_agent_for(AgentClass cls) {
  static const std::string hbts = "HBTS", scts = "SCTS", sql = "SQL";
  switch (cls) {
    case AgentClass::MAB:
      return hbts;
    case AgentClass::CB:
      return scts;
    case AgentClass::RL:
      return sql;
    case AgentClass::Handcrafted:
      break;
  }
  throw ConfigError("no mental-pool agent for class " + agent_class_name(cls));
}

}  // namespace ipd
