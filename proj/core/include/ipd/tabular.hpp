#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ipd/history.hpp"
#include "ipd/rng.hpp"
#include "ipd/split.hpp"

namespace ipd {

/// Per-(state, action) learning rate 1 / n^0.8, where n counts visits
/// including the current one (first visit gives 1.0).
inline double visit_alpha(long long n, double exponent = 0.8) {
  return 1.0 / std::pow(static_cast<double>(n), exponent);
}

/// Dense action-value table indexed by state id. The caller sizes it with one
/// extra row when a distinguished pre-game state is in play. Out-of-range
/// access throws DomainError("UnknownState").
class QTable {
 public:
  QTable() = default;
  QTable(StateId rows, int actions) { reset(rows, actions); }
  void reset(StateId rows, int actions);

  StateId rows() const { return rows_; }
  int actions() const { return actions_; }

  double get(StateId s, int a) const { return data_[index(s, a)]; }
  void set(StateId s, int a, double v) { data_[index(s, a)] = v; }
  std::span<const double> row(StateId s) const;
  double row_max(StateId s) const;
  int row_argmax(StateId s) const;  // lowest index on ties
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t index(StateId s, int a) const;

  StateId rows_ = 0;
  int actions_ = 0;
  std::vector<double> data_;
};

/// Visit counts shared by one learner (one count per state-action pair even
/// when the learner keeps two value tables).
class VisitCounts {
 public:
  void reset(StateId rows, int actions);
  /// Increments and returns the post-increment count.
  long long bump(StateId s, int a);
  long long get(StateId s, int a) const;
  const std::vector<long long>& data() const { return data_; }

 private:
  StateId rows_ = 0;
  int actions_ = 0;
  std::vector<long long> data_;
};

/// Q-learning: Q(s,a) += alpha (r + gamma max_a' Q(s',a') - Q(s,a)).
class QlCore {
 public:
  void reset(StateId rows, int actions);
  std::span<const double> action_values(StateId s) const { return q_.row(s); }
  void update(StateId s, int a, double reward, StateId next, double gamma);

  const QTable& q() const { return q_; }
  const VisitCounts& counts() const { return n_; }

 private:
  QTable q_;
  VisitCounts n_;
};

/// SARSA: Q(s,a) += alpha (r + gamma Q(s',a') - Q(s,a)) with the action a'
/// actually selected at s'.
class SarsaCore {
 public:
  void reset(StateId rows, int actions);
  std::span<const double> action_values(StateId s) const { return q_.row(s); }
  void update(StateId s, int a, double reward, StateId next, int next_action, double gamma);

  const QTable& q() const { return q_; }
  const VisitCounts& counts() const { return n_; }

 private:
  QTable q_;
  VisitCounts n_;
};

/// Double Q-learning: a fair coin picks which table to update; the updated
/// table chooses the bootstrap action, the other one evaluates it. Both
/// tables share one visit schedule and selection uses their sum.
class DqlCore {
 public:
  void reset(StateId rows, int actions);
  /// Q1(s,.) + Q2(s,.), materialized for selection.
  std::vector<double> action_values(StateId s) const;
  void update(StateId s, int a, double reward, StateId next, double gamma, Rng& rng);

  const QTable& q1() const { return q1_; }
  const QTable& q2() const { return q2_; }
  const VisitCounts& counts() const { return n_; }

 private:
  QTable q1_;
  QTable q2_;
  VisitCounts n_;
};

/// Split Q-learning: independent positive and negative value streams with
/// profile weights applied to the stored value and the incoming reward:
///   Qhat = lambda Q(s,a)
///   Q(s,a) <- Qhat + alpha (w r + gamma max_a' Q(s',a') - Qhat)
/// The negative stream sees r_neg as-is (<= 0). Selection uses Qpos + Qneg;
/// with the Standard profile and an unsplit reward this reproduces QlCore
/// exactly.
class SqlCore {
 public:
  void reset(StateId rows, int actions);
  std::vector<double> action_values(StateId s) const;
  void update(StateId s, int a, SplitReward r, StateId next, double gamma,
              const SplitParams& params);

  const QTable& positive() const { return pos_; }
  const QTable& negative() const { return neg_; }
  const VisitCounts& counts() const { return n_; }

 private:
  QTable pos_;
  QTable neg_;
  VisitCounts n_;
};

}  // namespace ipd
