#include "ipd/bandits.hpp"

#include <algorithm>
#include <cassert>

namespace ipd {

int argmax_first(std::span<const double> values) {
  assert(!values.empty());
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

int argmax_uniform(std::span<const double> values, Rng& rng) {
  const int first = argmax_first(values);
  const double best = values[first];
  int ties = 0;
  for (double v : values) {
    if (v == best) ++ties;
  }
  if (ties == 1) return first;
  int pick = rng.uniform_int(ties);
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (values[i] == best && pick-- == 0) return i;
  }
  return first;  // unreachable
}

int egreedy_select(std::span<const double> values, double eps, Rng& rng) {
  if (eps > 0.0 && rng.uniform01() < eps) {
    return rng.uniform_int(static_cast<int>(values.size()));
  }
  return argmax_uniform(values, rng);
}

void EpsilonGreedyBandit::reset(int arms) {
  means_.assign(arms, 0.0);
  counts_.assign(arms, 0);
}

void EpsilonGreedyBandit::update(int arm, double reward) {
  counts_[arm] += 1;
  means_[arm] += (reward - means_[arm]) / counts_[arm];
}

void Ucb1Bandit::reset(int arms) {
  means_.assign(arms, 0.0);
  counts_.assign(arms, 0);
  total_ = 0;
}

int Ucb1Bandit::select() const {
  for (int i = 0; i < static_cast<int>(counts_.size()); ++i) {
    if (counts_[i] == 0) return i;
  }
  std::vector<double> index(counts_.size());
  for (int i = 0; i < static_cast<int>(counts_.size()); ++i) {
    index[i] = ucb1_index(means_[i], counts_[i], total_);
  }
  return argmax_first(index);
}

void Ucb1Bandit::update(int arm, double reward) {
  counts_[arm] += 1;
  total_ += 1;
  means_[arm] += (reward - means_[arm]) / counts_[arm];
}

void ThompsonBandit::reset(int arms) {
  alphas_.assign(arms, 1.0);
  betas_.assign(arms, 1.0);
}

int ThompsonBandit::select(Rng& rng) const {
  std::vector<double> samples(alphas_.size());
  for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
    samples[i] = rng.beta(alphas_[i], betas_[i]);
  }
  return argmax_first(samples);
}

void ThompsonBandit::update(int arm, double reward) {
  alphas_[arm] += reward;
  betas_[arm] += 1.0 - reward;
}

int sample_discrete(std::span<const double> probs, Rng& rng) {
  double u = rng.uniform01();
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

void Exp3Bandit::reset(int arms) { log_weights_.assign(arms, 0.0); }

std::vector<double> Exp3Bandit::probabilities(double gamma) const {
  const int k = static_cast<int>(log_weights_.size());
  // Max-shifted so long runs cannot overflow exp().
  const double shift = *std::max_element(log_weights_.begin(), log_weights_.end());
  std::vector<double> p(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    p[i] = std::exp(log_weights_[i] - shift);
    total += p[i];
  }
  for (int i = 0; i < k; ++i) {
    p[i] = (1.0 - gamma) * p[i] / total + gamma / k;
  }
  return p;
}

void Exp3Bandit::update(int arm, double reward, double gamma, double played_prob) {
  const int k = static_cast<int>(log_weights_.size());
  log_weights_[arm] += gamma * (reward / played_prob) / k;
}

void Exp4Core::reset(int experts, int arms) {
  log_weights_.assign(experts, 0.0);
  arms_ = arms;
}

std::vector<double> Exp4Core::probabilities(const std::vector<std::vector<double>>& advice,
                                            double gamma) const {
  const int n_experts = experts();
  for (int e = 0; e < n_experts; ++e) {
    double row_sum = 0.0;
    for (double v : advice[e]) row_sum += v;
    if (std::abs(row_sum - 1.0) > 1e-9) {
      throw DomainError("MalformedAdvice",
                        "expert " + std::to_string(e) + " advice row sums to " + std::to_string(row_sum));
    }
  }
  const double shift = *std::max_element(log_weights_.begin(), log_weights_.end());
  std::vector<double> u(n_experts);
  double total = 0.0;
  for (int e = 0; e < n_experts; ++e) {
    u[e] = std::exp(log_weights_[e] - shift);
    total += u[e];
  }
  std::vector<double> p(arms_, 0.0);
  for (int e = 0; e < n_experts; ++e) {
    for (int a = 0; a < arms_; ++a) p[a] += (u[e] / total) * advice[e][a];
  }
  for (int a = 0; a < arms_; ++a) p[a] = (1.0 - gamma) * p[a] + gamma / arms_;
  return p;
}

void Exp4Core::update(const std::vector<std::vector<double>>& advice, int arm, double reward,
                      double gamma, double played_prob) {
  const double estimate = reward / played_prob;
  for (int e = 0; e < experts(); ++e) {
    log_weights_[e] += gamma * (advice[e][arm] * estimate) / arms_;
  }
}

void HbtsBandit::reset(int arms) {
  pos_.assign(arms, 0.0);
  neg_.assign(arms, 0.0);
}

int HbtsBandit::select(Rng& rng) const {
  std::vector<double> samples(pos_.size());
  for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
    samples[i] = rng.beta(1.0 + pos_[i], 1.0 + neg_[i]);
  }
  return argmax_first(samples);
}

void HbtsBandit::update(int arm, const SplitReward& r, const SplitParams& params) {
  pos_[arm] = std::max(0.0, params.lambda_pos * pos_[arm] + params.w_pos * r.pos);
  neg_[arm] = std::max(0.0, params.lambda_neg * neg_[arm] + params.w_neg * std::abs(r.neg));
}

}  // namespace ipd
