#pragma once

#include <array>
#include <string>
#include <utility>

#include "ipd/error.hpp"
#include "ipd/payoff.hpp"
#include "ipd/rng.hpp"

namespace ipd {

/// Reward-bias weights shared by the split learners (HBTS, SCTS, SQL):
/// lambda_* scale the previously accumulated stream, w_* scale the current
/// round's stream. All non-negative.
struct SplitParams {
  double lambda_pos = 1.0;
  double w_pos = 1.0;
  double lambda_neg = 1.0;
  double w_neg = 1.0;

  bool operator==(const SplitParams&) const = default;
};

/// Named reward-bias profiles. The seven disorder rows carry +-jitter; the
/// three reference rows are exact constants.
enum class Profile { ADD, ADHD, AD, CP, BvFTD, PD, M, Standard, Positive, Negative };

inline constexpr std::array<Profile, 10> kAllProfiles = {
    Profile::ADD, Profile::ADHD, Profile::AD,       Profile::CP,       Profile::BvFTD,
    Profile::PD,  Profile::M,    Profile::Standard, Profile::Positive, Profile::Negative};

const std::string& profile_name(Profile p);
Profile profile_from_name(const std::string& name);  // throws ConfigError

/// Row means and half-widths of the jitter intervals.
struct ProfileRow {
  SplitParams mean;
  SplitParams sigma;
};
const ProfileRow& profile_row(Profile p);

/// Samples a profile's parameters: each jittered entry is perturbed by an
/// independent uniform draw in [-sigma, +sigma], then clamped at 0 from
/// below. Exact rows (sigma 0) consume no randomness.
SplitParams profile_params(Profile p, Rng& rng);

/// Threshold used to decompose a raw payoff into positive/negative streams.
/// Mean: tau = (T+R+P+S)/4. None: no split, (r_pos, r_neg) = (r, 0).
struct SplitThreshold {
  enum class Kind { Mean, None, Value };
  Kind kind = Kind::Mean;
  double value = 0.0;

  static SplitThreshold mean() { return {Kind::Mean, 0.0}; }
  static SplitThreshold none() { return {Kind::None, 0.0}; }
  static SplitThreshold at(double v) { return {Kind::Value, v}; }

  double resolve(const PayoffMatrix& m) const;
  bool operator==(const SplitThreshold&) const = default;
};

struct SplitReward {
  double pos = 0.0;  // >= 0
  double neg = 0.0;  // <= 0
};

/// r_pos = max(r - tau, 0), r_neg = min(r - tau, 0); r_pos + r_neg = r - tau
/// exactly.
SplitReward split_reward(double reward, double tau);

/// Threshold-aware variant: Kind::None passes the reward through unsplit.
SplitReward split_reward(double reward, const SplitThreshold& th, const PayoffMatrix& m);

}  // namespace ipd
