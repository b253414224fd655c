#include <benchmark/benchmark.h>

#include "hrr/engrams.hpp"
#include "hrr/hormones.hpp"
#include "hrr/random.hpp"
#include "hrr/rrc.hpp"
#include "hrr/select.hpp"
#include "hrr/tasks/factory.hpp"

namespace {

using namespace hrr;

void BM_StepDynamics(benchmark::State& state) {
  const HormoneParams p;
  HormoneVector h;
  h.clarity = 0.3;
  h.confusion = 0.6;
  for (auto _ : state) {
    h = step_dynamics(h, Emissions{0.4, 0.2}, 0.5, p, {0.1, -0.1});
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_StepDynamics);

SelectionProblem random_problem(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  SelectionProblem p;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double cost = rng.uniform(0.1, 4.0);
    p.candidates.push_back({static_cast<int>(k), rng.uniform(), cost});
    total += cost;
  }
  p.budget = 0.5 * total;
  return p;
}

void BM_SolveExact(benchmark::State& state) {
  const SelectionProblem p = random_problem(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(p));
}
BENCHMARK(BM_SolveExact)->Arg(6)->Arg(12)->Arg(16);

void BM_SolvePrimalDual(benchmark::State& state) {
  const SelectionProblem p = random_problem(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_primal_dual(p));
}
BENCHMARK(BM_SolvePrimalDual)->Arg(12)->Arg(64);

void BM_Retrieve(benchmark::State& state) {
  Rng rng(11);
  EngramStore store;
  for (int i = 0; i < state.range(0); ++i) {
    HormoneContext ctx;
    for (double& x : ctx) x = rng.uniform();
    store.insert(make_engram(ctx, {}, {0.5, 0.5}, {{0.4, 0.6}, {0.3, 0.7}}, {1.0}, 0.3), 1000);
  }
  HormoneContext q;
  for (double& x : q) x = rng.uniform();
  const RetrievalParams params;
  for (auto _ : state) benchmark::DoNotOptimize(store.retrieve(q, params));
}
BENCHMARK(BM_Retrieve)->Arg(100)->Arg(1000);

void BM_Episode(benchmark::State& state) {
  const auto kind = static_cast<TaskKind>(state.range(0));
  const auto task = make_task(kind, 5);
  const EpisodeConfig config;
  EpisodeOptions opts;
  opts.warm_start = false;
  for (auto _ : state) {
    EngramStore store;
    benchmark::DoNotOptimize(run_episode(*task, config, store, 9, opts));
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Episode)
    ->Arg(static_cast<int>(TaskKind::sudoku))
    ->Arg(static_cast<int>(TaskKind::maze))
    ->Arg(static_cast<int>(TaskKind::dde))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
