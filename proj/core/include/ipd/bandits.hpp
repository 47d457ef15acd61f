#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ipd/rng.hpp"
#include "ipd/split.hpp"

namespace ipd {

/// Index of the first maximal value (deterministic lowest-index tie-break).
int argmax_first(std::span<const double> values);

/// Uniform-random pick among all maximal values. Consumes one draw only when
/// the argmax is tied.
int argmax_uniform(std::span<const double> values, Rng& rng);

/// Epsilon-greedy selection over arbitrary values: explore uniformly with
/// probability eps, otherwise exploit with uniform tie-breaking.
int egreedy_select(std::span<const double> values, double eps, Rng& rng);

/// Sample-mean bandit used by eGreedy. Unpulled arms count as mean 0.
class EpsilonGreedyBandit {
 public:
  explicit EpsilonGreedyBandit(int arms = 2) { reset(arms); }
  void reset(int arms);

  int select(double eps, Rng& rng) const { return egreedy_select(means_, eps, rng); }
  void update(int arm, double reward);

  const std::vector<double>& means() const { return means_; }
  const std::vector<int>& counts() const { return counts_; }

 private:
  mutable std::vector<double> means_;  // mutable: select reads only
  std::vector<int> counts_;
};

/// UCB1 index: mean + sqrt(2 ln t / n).
inline double ucb1_index(double mean, double pulls, double total) {
  return mean + std::sqrt(2.0 * std::log(total) / pulls);
}

class Ucb1Bandit {
 public:
  explicit Ucb1Bandit(int arms = 2) { reset(arms); }
  void reset(int arms);

  /// Unpulled arms first (lowest index), then argmax of the UCB1 index with
  /// lowest-index tie-break.
  int select() const;
  void update(int arm, double reward);

  const std::vector<double>& means() const { return means_; }
  const std::vector<int>& counts() const { return counts_; }
  int total_pulls() const { return total_; }

 private:
  std::vector<double> means_;
  std::vector<int> counts_;
  int total_ = 0;
};

/// Beta-Bernoulli Thompson sampling with fractional updates for rewards in
/// [0,1]: alpha += r, beta += 1 - r.
class ThompsonBandit {
 public:
  explicit ThompsonBandit(int arms = 2) { reset(arms); }
  void reset(int arms);

  int select(Rng& rng) const;
  void update(int arm, double reward);

  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& betas() const { return betas_; }

 private:
  std::vector<double> alphas_;
  std::vector<double> betas_;
};

/// Draws an index from a discrete distribution (values sum to 1).
int sample_discrete(std::span<const double> probs, Rng& rng);

/// EXP3 with log-domain weights:
///   p_k = (1 - gamma) w_k / sum(w) + gamma / K
///   w_chosen *= exp(gamma * (r / p_chosen) / K)
class Exp3Bandit {
 public:
  explicit Exp3Bandit(int arms = 2) { reset(arms); }
  void reset(int arms);

  /// Current sampling distribution; valid (non-negative, sums to 1).
  std::vector<double> probabilities(double gamma) const;
  /// Importance-weighted update for the chosen arm at the probability it was
  /// played with.
  void update(int arm, double reward, double gamma, double played_prob);

  double weight(int arm) const { return std::exp(log_weights_[arm]); }
  int arms() const { return static_cast<int>(log_weights_.size()); }

 private:
  std::vector<double> log_weights_;
};

/// EXP4: exponential weights over experts, each giving a probability row over
/// arms for the current context. The played mixture is
///   p = (1 - gamma) * (normalized expert weights)^T advice + gamma / K.
class Exp4Core {
 public:
  Exp4Core(int experts = 0, int arms = 2) { reset(experts, arms); }
  void reset(int experts, int arms);

  /// Mixture distribution for an advice matrix (one row per expert).
  /// Throws DomainError("MalformedAdvice") if a row is not a distribution
  /// within 1e-9.
  std::vector<double> probabilities(const std::vector<std::vector<double>>& advice,
                                    double gamma) const;
  /// w_e *= exp(gamma * (advice_e[arm] * r / p_arm) / K)
  void update(const std::vector<std::vector<double>>& advice, int arm, double reward,
              double gamma, double played_prob);

  double weight(int expert) const { return std::exp(log_weights_[expert]); }
  int experts() const { return static_cast<int>(log_weights_.size()); }
  int arms() const { return arms_; }

 private:
  std::vector<double> log_weights_;
  int arms_ = 2;
};

/// Human-based Thompson sampling: separate positive/negative accumulators
/// with profile weights, sampled as Beta(1 + S_k, 1 + F_k).
class HbtsBandit {
 public:
  explicit HbtsBandit(int arms = 2) { reset(arms); }
  void reset(int arms);

  int select(Rng& rng) const;
  /// S_k <- max(0, lambda+ S_k + w+ r_pos), F_k <- max(0, lambda- F_k + w- |r_neg|).
  void update(int arm, const SplitReward& r, const SplitParams& params);

  const std::vector<double>& positives() const { return pos_; }
  const std::vector<double>& negatives() const { return neg_; }

 private:
  std::vector<double> pos_;
  std::vector<double> neg_;
};

}  // namespace ipd
