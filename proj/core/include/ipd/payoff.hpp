#pragma once

#include <span>
#include <vector>

#include "ipd/action.hpp"
#include "ipd/error.hpp"

namespace ipd {

/// The T/R/P/S payoff structure of a (possibly k-player) Prisoner's Dilemma.
/// A constructed matrix always satisfies T > R > P > S and 2R > T + S; use
/// validate() to build one from untrusted values.
class PayoffMatrix {
 public:
  /// Validates T > R > P > S (strict) and 2R > T + S (strict).
  /// Throws PayoffError naming the first violated inequality.
  static PayoffMatrix validate(double T, double R, double P, double S);

  /// The classical matrix T=5, R=3, P=1, S=0.
  static PayoffMatrix classical() { return validate(5.0, 3.0, 1.0, 0.0); }

  double T() const { return t_; }
  double R() const { return r_; }
  double P() const { return p_; }
  double S() const { return s_; }

  /// Affine map of a payoff into [0,1]: S -> 0, T -> 1.
  double normalize(double reward) const { return (reward - s_) / (t_ - s_); }

  /// Mean of the four payoffs; default threshold for reward splitting.
  double mean_payoff() const { return (t_ + r_ + p_ + s_) / 4.0; }

  bool operator==(const PayoffMatrix&) const = default;

 private:
  PayoffMatrix(double T, double R, double P, double S) : t_(T), r_(R), p_(P), s_(S) {}
  double t_, r_, p_, s_;
};

/// The game being played: k seats, a payoff matrix, and a horizon.
struct GameSpec {
  int players = 2;
  PayoffMatrix payoff = PayoffMatrix::classical();
  int rounds = 60;

  GameSpec() = default;
  GameSpec(int players_, PayoffMatrix payoff_, int rounds_);
};

/// Resolves one simultaneous round: all-C pays R each, all-D pays P each,
/// otherwise cooperators get S and defectors get T. For k=2 this is exactly
/// the 2x2 table.
std::vector<double> payoff(std::span<const Action> joint, const PayoffMatrix& m);

/// Per-round normalized reward, see PayoffMatrix::normalize.
inline double normalize_reward(double reward, const PayoffMatrix& m) {
  return m.normalize(reward);
}

/// The two standardized payoff measures:
///   k1 = (R - P) / (T - S)   cooperation index
///   k2 = (T - R) / (T - S)   defection temptation index
struct StandardizedMeasures {
  double k1;
  double k2;
};

StandardizedMeasures standardized_measures(const PayoffMatrix& m);

}  // namespace ipd
