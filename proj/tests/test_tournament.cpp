#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ipd/agent.hpp"
#include "ipd/error.hpp"
#include "ipd/tournament.hpp"

using namespace ipd;

namespace {

SimParams small_params(int memory = 1, int players = 2, int rounds = 60, int runs = 1) {
  SimParams p;
  p.agent.game = GameSpec(players, PayoffMatrix::classical(), rounds);
  p.agent.memory = memory;
  p.runs = runs;
  p.seed = 2026;
  return p;
}

double cumulative_raw(const MatchSeries& s, int run, int seat) {
  double sum = 0.0;
  for (int t = 0; t < s.rounds; ++t) sum += s.reward(run, t, seat);
  return sum;
}

std::vector<SeatSpec> named_pool(const std::vector<std::string>& names) {
  std::vector<SeatSpec> pool;
  for (const auto& n : names) pool.push_back(SeatSpec::named(n));
  return pool;
}

}  // namespace

TEST_CASE("cooperation rate") {
  std::vector<Action> mixed = {Action::C, Action::C, Action::D, Action::C};
  CHECK(cooperation_rate(mixed) == doctest::Approx(0.75));
  std::vector<Action> all_d(10, Action::D);
  CHECK(cooperation_rate(all_d) == 0.0);
  std::vector<Action> empty;
  try {
    cooperation_rate(empty);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.kind() == "EmptySeries");
  }
}

TEST_CASE("collective and relative rewards") {
  CollectiveRelative a = collective_and_relative(std::array<double, 2>{4.0, 2.0});
  CHECK(a.collective == 6.0);
  CHECK(a.relative == std::vector<double>{1.0, -1.0});

  CollectiveRelative equal = collective_and_relative(std::array<double, 3>{0.5, 0.5, 0.5});
  CHECK(equal.relative == std::vector<double>{0.0, 0.0, 0.0});

  CollectiveRelative b = collective_and_relative(std::array<double, 3>{0.2, 0.5, 0.8});
  CHECK(b.collective == doctest::Approx(1.5));
  CHECK(b.relative[0] == doctest::Approx(-0.3));
  CHECK(b.relative[1] == doctest::Approx(0.0));
  CHECK(b.relative[2] == doctest::Approx(0.3));
  double sum = 0.0;
  for (double r : b.relative) sum += r;
  CHECK(std::abs(sum) < 1e-9);
}

TEST_CASE("coop versus dfct: pure exploitation numbers") {
  SimParams p = small_params();
  MatchResult r = run_match(named_pool({"Coop", "Dfct"}), p, 1);
  CHECK(cumulative_raw(r.series, 0, 0) == 0.0);
  CHECK(cumulative_raw(r.series, 0, 1) == 300.0);
  CHECK(r.agg.coop == std::vector<double>{1.0, 0.0});
  CHECK(r.agg.individual[0] == 0.0);
  CHECK(r.agg.individual[1] == 1.0);
  CHECK(r.agg.collective == doctest::Approx(1.0));
  CHECK(r.agg.relative[0] == doctest::Approx(-0.5));
  CHECK(r.agg.relative[1] == doctest::Approx(0.5));
}

TEST_CASE("tit-for-tat versus itself settles into mutual cooperation") {
  SimParams p = small_params();
  MatchResult r = run_match(named_pool({"Tit4Tat", "Tit4Tat"}), p, 2);
  CHECK(cumulative_raw(r.series, 0, 0) == 180.0);
  CHECK(cumulative_raw(r.series, 0, 1) == 180.0);
  CHECK(r.agg.coop == std::vector<double>{1.0, 1.0});
  CHECK(r.agg.individual[0] == doctest::Approx(0.6));
  // Identical deterministic agents: the two seats must agree measure for
  // measure.
  CHECK(r.agg.individual[0] == r.agg.individual[1]);
  CHECK(r.agg.relative == std::vector<double>{0.0, 0.0});
}

TEST_CASE("tit-for-tat versus dfct: one sucker round then mutual punishment") {
  SimParams p = small_params();
  MatchResult r = run_match(named_pool({"Tit4Tat", "Dfct"}), p, 3);
  CHECK(cumulative_raw(r.series, 0, 0) == 59.0);
  CHECK(cumulative_raw(r.series, 0, 1) == 64.0);
  CHECK(r.agg.coop[0] == doctest::Approx(1.0 / 60.0));
  CHECK(r.agg.coop[1] == 0.0);
  CHECK(r.series.action(0, 0, 0) == Action::C);
  CHECK(r.series.action(0, 1, 0) == Action::D);
}

TEST_CASE("match series has the full runs x rounds x players layout") {
  SimParams p = small_params(1, 2, 7, 3);
  MatchResult r = run_match(named_pool({"Random", "Tit4Tat"}), p, 4);
  CHECK(r.series.runs == 3);
  CHECK(r.series.rounds == 7);
  CHECK(r.series.players == 2);
  CHECK(r.series.actions.size() == 3u * 7u * 2u);
  CHECK(r.series.rewards.size() == r.series.actions.size());
  CHECK(r.series.rewards_norm.size() == r.series.actions.size());
  CHECK(r.seat_labels == std::vector<std::string>{"Random", "Tit4Tat"});
  // Normalized rewards are the affine image of the raw ones.
  for (int run = 0; run < 3; ++run) {
    for (int t = 0; t < 7; ++t) {
      for (int s = 0; s < 2; ++s) {
        CHECK(r.series.reward_norm(run, t, s) ==
              doctest::Approx(r.series.reward(run, t, s) / 5.0));
      }
    }
  }
}

TEST_CASE("per-run aggregates are recomputable from the raw series") {
  SimParams p = small_params(1, 2, 12, 5);
  MatchResult r = run_match(named_pool({"Random", "Random"}), p, 5);
  for (int seat = 0; seat < 2; ++seat) {
    double ind = 0.0;
    double coop = 0.0;
    for (int run = 0; run < p.runs; ++run) {
      double sum = 0.0;
      int c = 0;
      for (int t = 0; t < 12; ++t) {
        sum += r.series.reward_norm(run, t, seat);
        c += r.series.action(run, t, seat) == Action::C ? 1 : 0;
      }
      ind += sum / 12.0;
      coop += c / 12.0;
    }
    CHECK(r.agg.individual[seat] == doctest::Approx(ind / p.runs).epsilon(1e-12));
    CHECK(r.agg.coop[seat] == doctest::Approx(coop / p.runs).epsilon(1e-12));
  }
  // Round curves average over runs.
  for (int t = 0; t < 12; ++t) {
    double expect = 0.0;
    for (int run = 0; run < p.runs; ++run) expect += r.series.reward_norm(run, t, 0);
    CHECK(r.agg.round_reward[0][t] == doctest::Approx(expect / p.runs).epsilon(1e-12));
  }
}

TEST_CASE("distinct runs get distinct agent streams") {
  SimParams p = small_params(1, 2, 30, 2);
  MatchResult r = run_match(named_pool({"Random", "Coop"}), p, 6);
  bool differs = false;
  for (int t = 0; t < 30; ++t) {
    if (r.series.action(0, t, 0) != r.series.action(1, t, 0)) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("rerunning a match reproduces it bit for bit") {
  SimParams p = small_params(2, 2, 25, 4);
  MatchResult a = run_match(named_pool({"TS", "QL"}), p, 7);
  MatchResult b = run_match(named_pool({"TS", "QL"}), p, 7);
  CHECK(a.series.actions == b.series.actions);
  CHECK(a.series.rewards == b.series.rewards);
  CHECK(a.agg.individual == b.agg.individual);
  // A different match key gives a different draw sequence.
  MatchResult c = run_match(named_pool({"TS", "QL"}), p, 8);
  CHECK(a.series.actions != c.series.actions);
}

TEST_CASE("match seat count must equal the game's player count") {
  SimParams p = small_params();
  CHECK_THROWS_AS(run_match(named_pool({"Coop"}), p, 1), ConfigError);
  CHECK_THROWS_AS(run_match(named_pool({"Coop", "Dfct", "Coop"}), p, 1), ConfigError);
}

TEST_CASE("round robin over {Coop, Dfct}") {
  SimParams p = small_params();
  TournamentReport rep = round_robin(named_pool({"Coop", "Dfct"}), p);
  CHECK(rep.design == TournamentReport::Design::Pairwise);
  CHECK(rep.labels == std::vector<std::string>{"Coop", "Dfct"});
  CHECK(rep.matches.size() == 3);  // 2 self-pairs + 1 cross pair

  // Cooperation matrix rows: Coop always cooperates, Dfct never.
  CHECK(rep.cell(rep.coop_matrix, 0, 0) == 1.0);
  CHECK(rep.cell(rep.coop_matrix, 0, 1) == 1.0);
  CHECK(rep.cell(rep.coop_matrix, 1, 0) == 0.0);
  CHECK(rep.cell(rep.coop_matrix, 1, 1) == 0.0);

  // Individual normalized reward: T maps to 1 for Dfct exploiting Coop.
  CHECK(rep.cell(rep.individual_matrix, 1, 0) == 1.0);
  CHECK(rep.cell(rep.individual_matrix, 0, 1) == 0.0);
  CHECK(rep.cell(rep.individual_matrix, 0, 0) == doctest::Approx(0.6));
  CHECK(rep.cell(rep.individual_matrix, 1, 1) == doctest::Approx(0.2));

  // The collective matrix carries the match value in both cells.
  CHECK(rep.cell(rep.collective_matrix, 0, 1) == rep.cell(rep.collective_matrix, 1, 0));
  CHECK(rep.cell(rep.collective_matrix, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("round robin over the full roster has the published shape") {
  SimParams p = small_params(1, 2, 5, 1);
  std::vector<SeatSpec> pool = named_pool(default_pairwise_roster());
  TournamentReport rep = round_robin(pool, p);
  CHECK(rep.n() == 14);
  CHECK(rep.matches.size() == 105);  // 14 * 15 / 2 incl. self-pairs
  CHECK(rep.individual_matrix.size() == 196);
  CHECK(rep.collective_matrix.size() == 196);
  CHECK(rep.relative_matrix.size() == 196);
  CHECK(rep.coop_matrix.size() == 196);
  // Curves grouped by the four agent classes.
  CHECK(rep.curve_labels.size() == 4);
  for (const auto& curve : rep.curve_reward) CHECK(curve.size() == 5);
}

TEST_CASE("pairwise measures stay in range and satisfy the identities") {
  SimParams p = small_params(1, 2, 15, 3);
  TournamentReport rep = round_robin(named_pool({"Coop", "Dfct", "TS", "QL"}), p);
  for (const MatchResult& m : rep.matches) {
    double individual_sum = 0.0;
    double relative_sum = 0.0;
    for (std::size_t s = 0; s < m.agg.individual.size(); ++s) {
      CHECK(m.agg.individual[s] >= 0.0);
      CHECK(m.agg.individual[s] <= 1.0);
      CHECK(m.agg.coop[s] >= 0.0);
      CHECK(m.agg.coop[s] <= 1.0);
      individual_sum += m.agg.individual[s];
      relative_sum += m.agg.relative[s];
    }
    CHECK(m.agg.collective == individual_sum);  // same summation order: exact
    CHECK(std::abs(relative_sum) < 1e-9);
  }
}

TEST_CASE("identical configs give bit-identical tournament reports") {
  SimParams p = small_params(1, 2, 10, 3);
  TournamentReport a = round_robin(named_pool({"TS", "eGreedy", "QL"}), p);
  TournamentReport b = round_robin(named_pool({"TS", "eGreedy", "QL"}), p);
  CHECK(a.individual_matrix == b.individual_matrix);
  CHECK(a.collective_matrix == b.collective_matrix);
  CHECK(a.relative_matrix == b.relative_matrix);
  CHECK(a.coop_matrix == b.coop_matrix);
  REQUIRE(a.matches.size() == b.matches.size());
  for (std::size_t m = 0; m < a.matches.size(); ++m) {
    CHECK(a.matches[m].series.actions == b.matches[m].series.actions);
    CHECK(a.matches[m].series.rewards == b.matches[m].series.rewards);
  }
}

TEST_CASE("reports do not depend on the worker count") {
  SimParams serial = small_params(1, 2, 10, 3);
  serial.workers = 1;
  SimParams parallel = serial;
  parallel.workers = 4;
  std::vector<SeatSpec> pool = named_pool({"TS", "eGreedy", "LinUCB", "QL"});
  TournamentReport a = round_robin(pool, serial);
  TournamentReport b = round_robin(pool, parallel);
  CHECK(a.individual_matrix == b.individual_matrix);
  CHECK(a.coop_matrix == b.coop_matrix);
  for (std::size_t m = 0; m < a.matches.size(); ++m) {
    CHECK(a.matches[m].series.actions == b.matches[m].series.actions);
    CHECK(a.matches[m].series.rewards_norm == b.matches[m].series.rewards_norm);
  }
}

TEST_CASE("swapping the seats of deterministic agents moves the cells, not the values") {
  SimParams p = small_params();
  TournamentReport ab = round_robin(named_pool({"Tit4Tat", "Dfct"}), p);
  TournamentReport ba = round_robin(named_pool({"Dfct", "Tit4Tat"}), p);
  // Tit4Tat's measure against Dfct must be identical wherever it sits.
  CHECK(ab.cell(ab.individual_matrix, 0, 1) == ba.cell(ba.individual_matrix, 1, 0));
  CHECK(ab.cell(ab.coop_matrix, 0, 1) == ba.cell(ba.coop_matrix, 1, 0));
  CHECK(ab.cell(ab.relative_matrix, 0, 1) == ba.cell(ba.relative_matrix, 1, 0));
}

TEST_CASE("class means summarize matrix rows by agent class") {
  SimParams p = small_params();
  TournamentReport rep = round_robin(named_pool({"Coop", "Dfct"}), p);
  double hc = class_mean(rep, rep.individual_matrix, AgentClass::Handcrafted);
  double expect = (rep.cell(rep.individual_matrix, 0, 0) + rep.cell(rep.individual_matrix, 0, 1) +
                   rep.cell(rep.individual_matrix, 1, 0) + rep.cell(rep.individual_matrix, 1, 1)) /
                  4.0;
  CHECK(hc == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(class_mean(rep, rep.individual_matrix, AgentClass::MAB), ConfigError);
}

TEST_CASE("triple tournaments take the cartesian product of the class pools") {
  SimParams p = small_params(1, 3, 5, 1);
  TournamentReport rep =
      run_triples(default_mab_pool(), default_cb_pool(), default_rl_pool(), p);
  CHECK(rep.design == TournamentReport::Design::Triple);
  CHECK(rep.matches.size() == 80);  // 5 * 4 * 4
  CHECK(rep.labels.size() == 13);
  // Class-average curves: one series per class, length = rounds.
  CHECK(rep.curve_labels == std::vector<std::string>{"MAB", "CB", "RL"});
  for (const auto& curve : rep.curve_reward) CHECK(curve.size() == 5);
  for (const auto& curve : rep.curve_coop) CHECK(curve.size() == 5);
}

TEST_CASE("an all-defector triple earns the punishment payoff every round") {
  SimParams p = small_params(1, 3, 10, 2);
  TournamentReport rep = run_triples({"Dfct"}, {"Dfct"}, {"Dfct"}, p);
  REQUIRE(rep.matches.size() == 1);
  const MatchSeries& s = rep.matches[0].series;
  for (int run = 0; run < 2; ++run) {
    for (int t = 0; t < 10; ++t) {
      for (int seat = 0; seat < 3; ++seat) {
        CHECK(s.reward(run, t, seat) == 1.0);
      }
    }
  }
  REQUIRE(rep.matches[0].agg.individual.size() == 3);
  for (double v : rep.matches[0].agg.individual) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("triple design rejects a 2-player game spec") {
  SimParams p = small_params(1, 2, 5, 1);
  CHECK_THROWS_AS(run_triples({"TS"}, {"LinUCB"}, {"QL"}, p), ConfigError);
  SimParams q = small_params(1, 3, 5, 1);
  CHECK_THROWS_AS(run_triples({}, {"LinUCB"}, {"QL"}, q), ConfigError);
}

TEST_CASE("mental pools label seats by profile abbreviation") {
  SimParams p = small_params(1, 2, 10, 2);
  std::vector<Profile> profiles = {Profile::Standard, Profile::Positive, Profile::Negative};
  TournamentReport rep = run_mental_pool(AgentClass::RL, profiles, p);
  CHECK(rep.design == TournamentReport::Design::Mental);
  CHECK(rep.labels == std::vector<std::string>{"Standard", "Positive", "Negative"});
  CHECK(rep.matches.size() == 6);  // 3 * 4 / 2 incl. self-pairs
  CHECK(rep.curve_labels == rep.labels);
  for (const MatchResult& m : rep.matches) {
    CHECK(m.seat_agents == std::vector<std::string>{"SQL", "SQL"});
  }
  CHECK(rep.individual_matrix.size() == 9);
}

TEST_CASE("each learner class maps to its split variant in mental pools") {
  SimParams p = small_params(1, 2, 5, 1);
  std::vector<Profile> one = {Profile::M};
  CHECK(run_mental_pool(AgentClass::MAB, one, p).matches[0].seat_agents[0] == "HBTS");
  CHECK(run_mental_pool(AgentClass::CB, one, p).matches[0].seat_agents[0] == "SCTS");
  CHECK(run_mental_pool(AgentClass::RL, one, p).matches[0].seat_agents[0] == "SQL");
}

TEST_CASE("positive-profile agents end long matches with untouched negative state") {
  SimParams p = small_params(1, 2, 1000, 1);
  p.agent.profile = Profile::Positive;

  SqlAgent sql(p.agent);
  DfctAgent dfct(p.agent);
  std::array<Agent*, 2> seats = {&sql, &dfct};
  run_match(seats, p, 11);
  for (double v : sql.core().negative().data()) CHECK(v == 0.0);

  HbtsAgent hbts(p.agent);
  std::array<Agent*, 2> seats2 = {&hbts, &dfct};
  run_match(seats2, p, 12);
  CHECK(hbts.bandit().negatives() == std::vector<double>{0.0, 0.0});

  SctsAgent scts(p.agent);
  std::array<Agent*, 2> seats3 = {&scts, &dfct};
  run_match(seats3, p, 13);
  for (int arm = 0; arm < 2; ++arm) {
    CHECK(scts.core().negative(arm).b.isZero());
    CHECK(scts.core().negative(arm).A.isIdentity(0.0));
  }
}

TEST_CASE("negative-profile agents end long matches with untouched positive state") {
  SimParams p = small_params(1, 2, 1000, 1);
  p.agent.profile = Profile::Negative;

  SqlAgent sql(p.agent);
  CoopAgent coop(p.agent);
  std::array<Agent*, 2> seats = {&sql, &coop};
  run_match(seats, p, 14);
  for (double v : sql.core().positive().data()) CHECK(v == 0.0);

  HbtsAgent hbts(p.agent);
  std::array<Agent*, 2> seats2 = {&hbts, &coop};
  run_match(seats2, p, 15);
  CHECK(hbts.bandit().positives() == std::vector<double>{0.0, 0.0});
}
