#include "ipd/tabular.hpp"

#include <string>

#include "ipd/bandits.hpp"
#include "ipd/error.hpp"

namespace ipd {

void QTable::reset(StateId rows, int actions) {
  rows_ = rows;
  actions_ = actions;
  data_.assign(static_cast<std::size_t>(rows) * actions, 0.0);
}

std::size_t QTable::index(StateId s, int a) const {
  if (s < 0 || s >= rows_ || a < 0 || a >= actions_) {
    throw DomainError("UnknownState", "state " + std::to_string(s) + ", action " +
                                          std::to_string(a) + " outside table of " +
                                          std::to_string(rows_) + " x " +
                                          std::to_string(actions_));
  }
  return static_cast<std::size_t>(s) * actions_ + a;
}

std::span<const double> QTable::row(StateId s) const {
  const std::size_t base = index(s, 0);
  return {data_.data() + base, static_cast<std::size_t>(actions_)};
}

double QTable::row_max(StateId s) const {
  const auto r = row(s);
  double best = r[0];
  for (double v : r) best = v > best ? v : best;
  return best;
}

int QTable::row_argmax(StateId s) const { return argmax_first(row(s)); }

void VisitCounts::reset(StateId rows, int actions) {
  rows_ = rows;
  actions_ = actions;
  data_.assign(static_cast<std::size_t>(rows) * actions, 0);
}

long long VisitCounts::bump(StateId s, int a) {
  if (s < 0 || s >= rows_ || a < 0 || a >= actions_) {
    throw DomainError("UnknownState", "visit count for state " + std::to_string(s) +
                                          " outside table of " + std::to_string(rows_) + " rows");
  }
  return ++data_[static_cast<std::size_t>(s) * actions_ + a];
}

long long VisitCounts::get(StateId s, int a) const {
  return data_[static_cast<std::size_t>(s) * actions_ + a];
}

void QlCore::reset(StateId rows, int actions) {
  q_.reset(rows, actions);
  n_.reset(rows, actions);
}

void QlCore::update(StateId s, int a, double reward, StateId next, double gamma) {
  const double alpha = visit_alpha(n_.bump(s, a));
  const double old = q_.get(s, a);
  const double target = reward + gamma * q_.row_max(next);
  q_.set(s, a, old + alpha * (target - old));
}

void SarsaCore::reset(StateId rows, int actions) {
  q_.reset(rows, actions);
  n_.reset(rows, actions);
}

void SarsaCore::update(StateId s, int a, double reward, StateId next, int next_action,
                       double gamma) {
  const double alpha = visit_alpha(n_.bump(s, a));
  const double old = q_.get(s, a);
  const double target = reward + gamma * q_.get(next, next_action);
  q_.set(s, a, old + alpha * (target - old));
}

void DqlCore::reset(StateId rows, int actions) {
  q1_.reset(rows, actions);
  q2_.reset(rows, actions);
  n_.reset(rows, actions);
}

std::vector<double> DqlCore::action_values(StateId s) const {
  const auto r1 = q1_.row(s);
  const auto r2 = q2_.row(s);
  std::vector<double> sum(r1.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = r1[i] + r2[i];
  return sum;
}

void DqlCore::update(StateId s, int a, double reward, StateId next, double gamma, Rng& rng) {
  const double alpha = visit_alpha(n_.bump(s, a));
  QTable& own = rng.uniform_int(2) == 0 ? q1_ : q2_;
  QTable& other = &own == &q1_ ? q2_ : q1_;
  const int star = own.row_argmax(next);
  const double old = own.get(s, a);
  const double target = reward + gamma * other.get(next, star);
  own.set(s, a, old + alpha * (target - old));
}

void SqlCore::reset(StateId rows, int actions) {
  pos_.reset(rows, actions);
  neg_.reset(rows, actions);
  n_.reset(rows, actions);
}

std::vector<double> SqlCore::action_values(StateId s) const {
  const auto rp = pos_.row(s);
  const auto rn = neg_.row(s);
  std::vector<double> sum(rp.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = rp[i] + rn[i];
  return sum;
}

void SqlCore::update(StateId s, int a, SplitReward r, StateId next, double gamma,
                     const SplitParams& params) {
  const double alpha = visit_alpha(n_.bump(s, a));
  {
    const double qhat = params.lambda_pos * pos_.get(s, a);
    const double target = params.w_pos * r.pos + gamma * pos_.row_max(next);
    pos_.set(s, a, qhat + alpha * (target - qhat));
  }
  {
    const double qhat = params.lambda_neg * neg_.get(s, a);
    const double target = params.w_neg * r.neg + gamma * neg_.row_max(next);
    neg_.set(s, a, qhat + alpha * (target - qhat));
  }
}

}  // namespace ipd
