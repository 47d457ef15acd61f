#include "ipd/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ipd {

PayoffMatrix PayoffMatrix::validate(double T, double R, double P, double S) {
  for (double v : {T, R, P, S}) {
    if (!std::isfinite(v)) {
      throw PayoffError(PayoffError::Kind::OrderingViolated, "non-finite payoff value");
    }
  }
  auto fmt = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  if (!(T > R)) {
    throw PayoffError(PayoffError::Kind::OrderingViolated,
                      "T <= R (" + fmt(T) + " <= " + fmt(R) + "); a Prisoner's Dilemma requires T > R > P > S");
  }
  if (!(R > P)) {
    throw PayoffError(PayoffError::Kind::OrderingViolated,
                      "R <= P (" + fmt(R) + " <= " + fmt(P) + "); a Prisoner's Dilemma requires T > R > P > S");
  }
  if (!(P > S)) {
    throw PayoffError(PayoffError::Kind::OrderingViolated,
                      "P <= S (" + fmt(P) + " <= " + fmt(S) + "); a Prisoner's Dilemma requires T > R > P > S");
  }
  if (!(2.0 * R > T + S)) {
    throw PayoffError(PayoffError::Kind::SocialWelfareViolated,
                      "2R <= T + S (" + fmt(2.0 * R) + " <= " + fmt(T + S) + ")");
  }
  return PayoffMatrix(T, R, P, S);
}

GameSpec::GameSpec(int players_, PayoffMatrix payoff_, int rounds_)
    : players(players_), payoff(payoff_), rounds(rounds_) {
  if (players < 2) throw ConfigError("players must be >= 2, got " + std::to_string(players));
  if (rounds < 1) throw ConfigError("rounds must be >= 1, got " + std::to_string(rounds));
}

std::vector<double> payoff(std::span<const Action> joint, const PayoffMatrix& m) {
  const auto k = joint.size();
  const auto defectors =
      static_cast<std::size_t>(std::count(joint.begin(), joint.end(), Action::D));
  std::vector<double> out(k);
  if (defectors == 0) {
    std::fill(out.begin(), out.end(), m.R());
  } else if (defectors == k) {
    std::fill(out.begin(), out.end(), m.P());
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = joint[i] == Action::C ? m.S() : m.T();
    }
  }
  return out;
}

StandardizedMeasures standardized_measures(const PayoffMatrix& m) {
  const double span = m.T() - m.S();
  return {(m.R() - m.P()) / span, (m.T() - m.R()) / span};
}

}  // namespace ipd
