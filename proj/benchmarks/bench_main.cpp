// Microbenchmarks for the hot paths: history encoding, bandit/linear model
// steps, single matches, and a demonstration training pass.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "ipd/agent.hpp"
#include "ipd/bcdr.hpp"
#include "ipd/history.hpp"
#include "ipd/linear.hpp"
#include "ipd/rng.hpp"
#include "ipd/tabular.hpp"
#include "ipd/tournament.hpp"

namespace {

using namespace ipd;

AgentConfig config_with_memory(int memory) {
  AgentConfig cfg;
  cfg.memory = memory;
  return cfg;
}

void BM_HistoryEncode(benchmark::State& state) {
  const int memory = static_cast<int>(state.range(0));
  HistoryWindow window(memory, 2);
  Rng rng(7);
  for (auto _ : state) {
    window.push({action_from_code(rng.uniform_int(2)), {action_from_code(rng.uniform_int(2))}});
    benchmark::DoNotOptimize(window.encode_context());
    benchmark::DoNotOptimize(window.encode_state());
  }
}
BENCHMARK(BM_HistoryEncode)->Arg(1)->Arg(5);

void BM_LinUcbStep(benchmark::State& state) {
  const int memory = static_cast<int>(state.range(0));
  const AgentConfig cfg = config_with_memory(memory);
  LinUcbCore core;
  core.reset(kNumActions, cfg.context_dim());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cfg.context_dim());
  Rng rng(11);
  for (auto _ : state) {
    x.setZero();
    x[static_cast<int>(rng.uniform_int(cfg.context_dim()))] = 1.0;
    const int arm = core.select(x, 1.0);
    core.update(arm, x, rng.uniform01());
    benchmark::DoNotOptimize(arm);
  }
}
BENCHMARK(BM_LinUcbStep)->Arg(1)->Arg(5);

void BM_QTableStep(benchmark::State& state) {
  const AgentConfig cfg = config_with_memory(5);
  QlCore core;
  core.reset(cfg.table_rows(), kNumActions);
  Rng rng(13);
  const int states = static_cast<int>(cfg.table_rows());
  for (auto _ : state) {
    const StateId s = static_cast<StateId>(rng.uniform_int(states));
    const StateId next = static_cast<StateId>(rng.uniform_int(states));
    core.update(s, static_cast<int>(rng.uniform_int(2)), rng.uniform01() * 5.0, next, cfg.gamma);
    benchmark::DoNotOptimize(core.q().data().data());
  }
}
BENCHMARK(BM_QTableStep);

void BM_Match(benchmark::State& state) {
  SimParams params;
  params.agent = config_with_memory(static_cast<int>(state.range(0)));
  params.agent.game.rounds = 60;
  params.runs = 1;
  params.seed = 2026;
  params.workers = 1;
  const std::vector<SeatSpec> seats = {SeatSpec::named("TS"), SeatSpec::named("QL")};
  std::uint64_t key = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_match(seats, params, key++));
  }
  state.SetItemsProcessed(state.iterations() * params.agent.game.rounds);
}
BENCHMARK(BM_Match)->Arg(1)->Arg(5);

void BM_RoundRobin(benchmark::State& state) {
  SimParams params;
  params.agent = config_with_memory(1);
  params.agent.game.rounds = 60;
  params.runs = 5;
  params.seed = 2026;
  params.workers = 1;
  const std::vector<SeatSpec> pool = {SeatSpec::named("TS"), SeatSpec::named("eGreedy"),
                                      SeatSpec::named("LinUCB"), SeatSpec::named("QL")};
  for (auto _ : state) {
    benchmark::DoNotOptimize(round_robin(pool, params));
  }
}
BENCHMARK(BM_RoundRobin);

void BM_BcdrTrainPass(benchmark::State& state) {
  const AgentConfig cfg = config_with_memory(1);
  const std::vector<Trajectory> train =
      synth_trajectories("Tit4Tat", "Random", 100, 10, cfg, 2026);
  for (auto _ : state) {
    EgreedyAgent agent(cfg);
    bcdr_train(agent, train, {1, 2026});
    benchmark::DoNotOptimize(agent.learned_state_hash());
  }
  state.SetItemsProcessed(state.iterations() * 100 * 10);
}
BENCHMARK(BM_BcdrTrainPass);

}  // namespace

BENCHMARK_MAIN();
