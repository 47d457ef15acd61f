#include "ipd/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "ipd/error.hpp"

namespace ipd {

namespace {

// Design salts keep the seed streams of the three tournament kinds disjoint.
constexpr std::uint64_t kPairwiseSalt = 1;
constexpr std::uint64_t kTripleSalt = 2;
constexpr std::uint64_t kMentalSalt = 3;

AgentConfig seat_config(const SeatSpec& seat, const SimParams& params) {
  AgentConfig cfg = params.agent;
  if (seat.profile) cfg.profile = *seat.profile;
  return cfg;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / xs.size();
}

double sd_of(const std::vector<double>& xs, double mean) {
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / xs.size());
}

MatchAggregates aggregate(const MatchSeries& s) {
  const int k = s.players;
  const int runs = s.runs;
  const int rounds = s.rounds;

  MatchAggregates agg;
  agg.individual.resize(k);
  agg.individual_sd.resize(k);
  agg.coop.resize(k);
  agg.coop_sd.resize(k);
  agg.round_reward.assign(k, std::vector<double>(rounds, 0.0));
  agg.round_coop.assign(k, std::vector<double>(rounds, 0.0));

  std::vector<double> run_ind(runs);
  std::vector<double> run_coop(runs);
  std::vector<Action> seat_actions(rounds);
  for (int seat = 0; seat < k; ++seat) {
    for (int run = 0; run < runs; ++run) {
      double sum = 0.0;
      for (int t = 0; t < rounds; ++t) {
        sum += s.reward_norm(run, t, seat);
        seat_actions[t] = s.action(run, t, seat);
      }
      run_ind[run] = sum / rounds;
      run_coop[run] = cooperation_rate(seat_actions);
    }
    agg.individual[seat] = mean_of(run_ind);
    agg.individual_sd[seat] = sd_of(run_ind, agg.individual[seat]);
    agg.coop[seat] = mean_of(run_coop);
    agg.coop_sd[seat] = sd_of(run_coop, agg.coop[seat]);
    for (int t = 0; t < rounds; ++t) {
      double reward_sum = 0.0;
      int coop_count = 0;
      for (int run = 0; run < runs; ++run) {
        reward_sum += s.reward_norm(run, t, seat);
        coop_count += s.action(run, t, seat) == Action::C ? 1 : 0;
      }
      agg.round_reward[seat][t] = reward_sum / runs;
      agg.round_coop[seat][t] = static_cast<double>(coop_count) / runs;
    }
  }

  CollectiveRelative cr = collective_and_relative(agg.individual);
  agg.collective = cr.collective;
  agg.relative = std::move(cr.relative);
  return agg;
}

struct MatchJob {
  std::vector<SeatSpec> seats;
  std::uint64_t match_key = 0;
  std::vector<int> label_idx;  // per seat, index into report labels
};

std::vector<MatchResult> run_jobs(const std::vector<MatchJob>& jobs, const SimParams& params) {
  std::vector<MatchResult> results(jobs.size());
  const int workers =
      std::min<int>(resolve_workers(params.workers), std::max<std::size_t>(jobs.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      results[i] = run_match(jobs[i].seats, params, jobs[i].match_key);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = run_match(jobs[i].seats, params, jobs[i].match_key);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

/// Per-round mean curves. Grouping is by profile label for mental pools and
/// by agent class otherwise; accumulation runs in fixed (match, seat, run,
/// round) order so the result does not depend on worker scheduling.
void compute_curves(TournamentReport& rep, int rounds, int runs) {
  std::vector<std::string> groups;
  auto group_of = [&](std::size_t match, int seat) -> std::string {
    if (rep.design == TournamentReport::Design::Mental) {
      return rep.matches[match].seat_labels[seat];
    }
    return agent_class_name(agent_class_of(rep.matches[match].seat_agents[seat]));
  };
  for (std::size_t m = 0; m < rep.matches.size(); ++m) {
    for (std::size_t seat = 0; seat < rep.matches[m].seat_labels.size(); ++seat) {
      const std::string g = group_of(m, static_cast<int>(seat));
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
  }
  rep.curve_labels = groups;
  rep.curve_reward.assign(groups.size(), std::vector<double>(rounds, 0.0));
  rep.curve_coop.assign(groups.size(), std::vector<double>(rounds, 0.0));
  std::vector<long long> occurrences(groups.size(), 0);

  for (std::size_t m = 0; m < rep.matches.size(); ++m) {
    const MatchSeries& s = rep.matches[m].series;
    for (int seat = 0; seat < s.players; ++seat) {
      const std::string g = group_of(m, seat);
      const auto gi = static_cast<std::size_t>(
          std::find(groups.begin(), groups.end(), g) - groups.begin());
      occurrences[gi] += 1;
      for (int run = 0; run < runs; ++run) {
        for (int t = 0; t < rounds; ++t) {
          rep.curve_reward[gi][t] += s.reward_norm(run, t, seat);
          rep.curve_coop[gi][t] += s.action(run, t, seat) == Action::C ? 1.0 : 0.0;
        }
      }
    }
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const double denom = static_cast<double>(occurrences[gi]) * runs;
    for (int t = 0; t < rounds; ++t) {
      rep.curve_reward[gi][t] /= denom;
      rep.curve_coop[gi][t] /= denom;
    }
  }
}

TournamentReport round_robin_impl(const std::vector<SeatSpec>& pool, const SimParams& params,
                                  std::uint64_t salt, TournamentReport::Design design) {
  if (pool.empty()) throw ConfigError("tournament pool is empty");
  if (params.agent.game.players != 2) {
    throw ConfigError("round-robin designs are 2-player; config has players = " +
                      std::to_string(params.agent.game.players));
  }
  TournamentReport rep;
  rep.design = design;
  for (const auto& s : pool) rep.labels.push_back(s.label.empty() ? s.agent : s.label);

  const int n = static_cast<int>(pool.size());
  std::vector<MatchJob> jobs;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      MatchJob job;
      job.seats = {pool[i], pool[j]};
      job.match_key = derive_seed(salt, {static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(j)});
      job.label_idx = {i, j};
      jobs.push_back(std::move(job));
    }
  }
  rep.matches = run_jobs(jobs, params);

  const auto nn = static_cast<std::size_t>(n) * n;
  rep.individual_matrix.assign(nn, 0.0);
  rep.collective_matrix.assign(nn, 0.0);
  rep.relative_matrix.assign(nn, 0.0);
  rep.coop_matrix.assign(nn, 0.0);
  for (std::size_t m = 0; m < jobs.size(); ++m) {
    const int i = jobs[m].label_idx[0];
    const int j = jobs[m].label_idx[1];
    const MatchAggregates& a = rep.matches[m].agg;
    const auto ij = static_cast<std::size_t>(i) * n + j;
    const auto ji = static_cast<std::size_t>(j) * n + i;
    if (i == j) {
      // the self-pair's two seats land in one cell; average them
      rep.individual_matrix[ij] = (a.individual[0] + a.individual[1]) / 2.0;
      rep.relative_matrix[ij] = (a.relative[0] + a.relative[1]) / 2.0;
      rep.coop_matrix[ij] = (a.coop[0] + a.coop[1]) / 2.0;
      rep.collective_matrix[ij] = a.collective;
    } else {
      rep.individual_matrix[ij] = a.individual[0];
      rep.individual_matrix[ji] = a.individual[1];
      rep.relative_matrix[ij] = a.relative[0];
      rep.relative_matrix[ji] = a.relative[1];
      rep.coop_matrix[ij] = a.coop[0];
      rep.coop_matrix[ji] = a.coop[1];
      rep.collective_matrix[ij] = a.collective;
      rep.collective_matrix[ji] = a.collective;
    }
  }
  compute_curves(rep, params.agent.game.rounds, params.runs);
  return rep;
}

}  // namespace

double cooperation_rate(std::span<const Action> actions) {
  if (actions.empty()) {
    throw DomainError("EmptySeries", "cooperation rate of an empty action sequence");
  }
  int coop = 0;
  for (Action a : actions) coop += a == Action::C ? 1 : 0;
  return static_cast<double>(coop) / actions.size();
}

CollectiveRelative collective_and_relative(std::span<const double> rewards) {
  CollectiveRelative out;
  for (double r : rewards) out.collective += r;
  const double mean = out.collective / rewards.size();
  out.relative.reserve(rewards.size());
  for (double r : rewards) out.relative.push_back(r - mean);
  return out;
}

MatchResult run_match(std::span<Agent* const> agents, const SimParams& params,
                      std::uint64_t match_key) {
  const GameSpec& game = params.agent.game;
  const int k = game.players;
  if (static_cast<int>(agents.size()) != k) {
    throw ConfigError("match has " + std::to_string(agents.size()) + " seats but the game needs " +
                      std::to_string(k));
  }
  if (params.runs < 1) throw ConfigError("runs must be >= 1");

  MatchResult result;
  for (Agent* a : agents) {
    result.seat_labels.push_back(a->name());
    result.seat_agents.push_back(a->name());
  }
  MatchSeries& series = result.series;
  series.runs = params.runs;
  series.rounds = game.rounds;
  series.players = k;
  const std::size_t total = static_cast<std::size_t>(params.runs) * game.rounds * k;
  series.actions.resize(total);
  series.rewards.resize(total);
  series.rewards_norm.resize(total);

  std::vector<HistoryWindow> windows;
  windows.reserve(k);
  for (int s = 0; s < k; ++s) windows.emplace_back(params.agent.memory, k);

  std::vector<Action> joint(k);
  std::vector<Observation> obs(k);
  for (int run = 0; run < params.runs; ++run) {
    for (int s = 0; s < k; ++s) {
      agents[s]->reset(derive_seed(params.seed, {match_key, static_cast<std::uint64_t>(run),
                                                 static_cast<std::uint64_t>(s)}));
      windows[s].clear();
    }
    for (int t = 0; t < game.rounds; ++t) {
      for (int s = 0; s < k; ++s) {
        obs[s] = Observation{windows[s].encode_context(), windows[s].encode_state(), t};
        joint[s] = agents[s]->select_action(obs[s]);
      }
      const std::vector<double> pay = payoff(joint, game.payoff);
      for (int s = 0; s < k; ++s) {
        JointRecord rec;
        rec.own = joint[s];
        rec.others.reserve(k - 1);
        for (int o = 0; o < k; ++o) {
          if (o != s) rec.others.push_back(joint[o]);
        }
        windows[s].push(rec);
      }
      for (int s = 0; s < k; ++s) {
        Feedback fb;
        fb.chosen = joint[s];
        fb.reward = pay[s];
        fb.reward_norm = game.payoff.normalize(pay[s]);
        fb.next = Observation{windows[s].encode_context(), windows[s].encode_state(), t + 1};
        agents[s]->observe(fb);
        const std::size_t idx = series.index(run, t, s);
        series.actions[idx] = joint[s];
        series.rewards[idx] = pay[s];
        series.rewards_norm[idx] = fb.reward_norm;
      }
    }
  }
  result.agg = aggregate(series);
  return result;
}

MatchResult run_match(const std::vector<SeatSpec>& seats, const SimParams& params,
                      std::uint64_t match_key) {
  std::vector<std::unique_ptr<Agent>> owned;
  std::vector<Agent*> ptrs;
  owned.reserve(seats.size());
  for (const auto& s : seats) {
    owned.push_back(make_agent(s.agent, seat_config(s, params)));
    ptrs.push_back(owned.back().get());
  }
  MatchResult result = run_match(std::span<Agent* const>(ptrs), params, match_key);
  for (std::size_t s = 0; s < seats.size(); ++s) {
    result.seat_labels[s] = seats[s].label.empty() ? seats[s].agent : seats[s].label;
    result.seat_agents[s] = seats[s].agent;
  }
  return result;
}

TournamentReport round_robin(const std::vector<SeatSpec>& pool, const SimParams& params) {
  return round_robin_impl(pool, params, kPairwiseSalt, TournamentReport::Design::Pairwise);
}

TournamentReport run_triples(const std::vector<std::string>& mab_pool,
                             const std::vector<std::string>& cb_pool,
                             const std::vector<std::string>& rl_pool, const SimParams& params) {
  if (mab_pool.empty() || cb_pool.empty() || rl_pool.empty()) {
    throw ConfigError("triple tournaments need three non-empty pools");
  }
  if (params.agent.game.players != 3) {
    throw ConfigError("triple tournaments are 3-player; config has players = " +
                      std::to_string(params.agent.game.players));
  }
  TournamentReport rep;
  rep.design = TournamentReport::Design::Triple;
  for (const auto& name : mab_pool) rep.labels.push_back(name);
  for (const auto& name : cb_pool) rep.labels.push_back(name);
  for (const auto& name : rl_pool) rep.labels.push_back(name);

  std::vector<MatchJob> jobs;
  for (std::size_t i = 0; i < mab_pool.size(); ++i) {
    for (std::size_t j = 0; j < cb_pool.size(); ++j) {
      for (std::size_t l = 0; l < rl_pool.size(); ++l) {
        MatchJob job;
        job.seats = {SeatSpec::named(mab_pool[i]), SeatSpec::named(cb_pool[j]),
                     SeatSpec::named(rl_pool[l])};
        job.match_key = derive_seed(kTripleSalt, {i, j, l});
        jobs.push_back(std::move(job));
      }
    }
  }
  rep.matches = run_jobs(jobs, params);
  compute_curves(rep, params.agent.game.rounds, params.runs);
  return rep;
}

TournamentReport run_mental_pool(AgentClass cls, const std::vector<Profile>& profiles,
                                 const SimParams& params) {
  if (profiles.empty()) throw ConfigError("mental pool needs at least one profile");
  const std::string& agent = mental_agent_for(cls);
  std::vector<SeatSpec> pool;
  pool.reserve(profiles.size());
  for (Profile p : profiles) pool.push_back(SeatSpec::profiled(agent, p));
  const std::uint64_t salt =
      derive_seed(kMentalSalt, {static_cast<std::uint64_t>(static_cast<int>(cls))});
  return round_robin_impl(pool, params, salt, TournamentReport::Design::Mental);
}

double class_mean(const TournamentReport& report, const std::vector<double>& matrix,
                  AgentClass cls) {
  if (report.design != TournamentReport::Design::Pairwise) {
    throw ConfigError("class_mean needs a pairwise report with agent-named rows");
  }
  const int n = report.n();
  double sum = 0.0;
  long long cells = 0;
  for (int i = 0; i < n; ++i) {
    if (agent_class_of(report.labels[i]) != cls) continue;
    for (int j = 0; j < n; ++j) {
      sum += report.cell(matrix, i, j);
      ++cells;
    }
  }
  if (cells == 0) throw ConfigError("no roster rows of class " + agent_class_name(cls));
  return sum / cells;
}

}  // namespace ipd
