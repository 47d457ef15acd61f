#include "ipd/split.hpp"

#include <algorithm>

namespace ipd {

namespace {

struct NamedRow {
  const char* name;
  ProfileRow row;
};

// Means and jitter half-widths per profile row, in the order of kAllProfiles.
const NamedRow kRows[] = {
    {"ADD", {{1.0, 1.0, 0.5, 1.0}, {0.1, 0.1, 0.1, 0.1}}},
    {"ADHD", {{0.2, 1.0, 0.2, 1.0}, {0.1, 0.1, 0.1, 0.1}}},
    {"AD", {{0.1, 1.0, 0.1, 1.0}, {0.1, 0.1, 0.1, 0.1}}},
    {"CP", {{0.5, 0.5, 1.0, 1.0}, {0.1, 0.1, 0.1, 0.1}}},
    {"bvFTD", {{0.5, 100.0, 0.5, 1.0}, {0.1, 10.0, 0.1, 0.1}}},
    {"PD", {{0.5, 1.0, 0.5, 100.0}, {0.1, 0.1, 0.1, 10.0}}},
    {"M", {{0.5, 1.0, 0.5, 1.0}, {0.1, 0.1, 0.1, 0.1}}},
    {"Standard", {{1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0}}},
    {"Positive", {{1.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}}},
    {"Negative", {{0.0, 0.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0}}},
};

}  // namespace

const std::string& profile_name(Profile p) {
  static const std::string names[] = {"ADD", "ADHD", "AD",       "CP",       "bvFTD",
                                      "PD",  "M",    "Standard", "Positive", "Negative"};
  return names[static_cast<int>(p)];
}

Profile profile_from_name(const std::string& name) {
  for (Profile p : kAllProfiles) {
    if (profile_name(p) == name) return p;
  }
  throw ConfigError("unknown split profile \"" + name + "\"");
}

const ProfileRow& profile_row(Profile p) { return kRows[static_cast<int>(p)].row; }

SplitParams profile_params(Profile p, Rng& rng) {
  const ProfileRow& row = profile_row(p);
  auto sample = [&](double mean, double sigma) {
    if (sigma == 0.0) return mean;
    return std::max(0.0, mean + rng.uniform(-sigma, sigma));
  };
  SplitParams out;
  out.lambda_pos = sample(row.mean.lambda_pos, row.sigma.lambda_pos);
  out.w_pos = sample(row.mean.w_pos, row.sigma.w_pos);
  out.lambda_neg = sample(row.mean.lambda_neg, row.sigma.lambda_neg);
  out.w_neg = sample(row.mean.w_neg, row.sigma.w_neg);
  return out;
}

double SplitThreshold::resolve(const PayoffMatrix& m) const {
  switch (kind) {
    case Kind::Mean:
      return m.mean_payoff();
    case Kind::Value:
      return value;
    case Kind::None:
      return 0.0;  // unused; split_reward(.., None, ..) never centers
  }
  return 0.0;
}

SplitReward split_reward(double reward, double tau) {
  const double centered = reward - tau;
  return {std::max(centered, 0.0), std::min(centered, 0.0)};
}

SplitReward split_reward(double reward, const SplitThreshold& th, const PayoffMatrix& m) {
  if (th.kind == SplitThreshold::Kind::None) return {reward, 0.0};
  return split_reward(reward, th.resolve(m));
}

}  // namespace ipd
