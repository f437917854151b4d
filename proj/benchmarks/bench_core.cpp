#include <map>
#include <string>

#include <benchmark/benchmark.h>

#include "fprw/exit.hpp"
#include "fprw/model.hpp"
#include "fprw/scenario.hpp"
#include "fprw/simulate.hpp"
#include "fprw/solve.hpp"

namespace {

const fprw::Model& model_of(const std::string& name) {
  static std::map<std::string, fprw::Model> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, fprw::Model{fprw::find_scenario(name)->spec})
             .first;
  }
  return it->second;
}

void BM_walk_steps(benchmark::State& state) {
  const fprw::Model& model = model_of("group-z2z3");
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fprw::run(model, n, seed++));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_walk_steps)->Arg(10'000)->Arg(100'000);

void BM_range_process(benchmark::State& state) {
  const fprw::Model& model = model_of("group-z2z3");
  const fprw::Trajectory traj =
      fprw::run(model, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fprw::range_process(traj));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_range_process)->Arg(10'000)->Arg(100'000);

void BM_exit_analysis(benchmark::State& state) {
  const fprw::Model& model = model_of("group-z2z3");
  const fprw::Trajectory traj =
      fprw::run(model, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fprw::analyze_exits(traj));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_exit_analysis)->Arg(10'000)->Arg(100'000);

void BM_first_return_ladder(benchmark::State& state) {
  const fprw::Model& model = model_of("group-z2z3");
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fprw::first_return(model, fprw::FreeWord{}, m, {}));
  }
}
BENCHMARK(BM_first_return_ladder)->Arg(12)->Arg(20)->Arg(28);

void BM_first_return_sweeps(benchmark::State& state) {
  const fprw::Model& model = model_of("group-z2z3");
  fprw::SolveOptions opts;
  opts.method = fprw::SolveMethod::sweeps;
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fprw::first_return(model, fprw::FreeWord{}, m, opts));
  }
}
BENCHMARK(BM_first_return_sweeps)->Arg(12)->Arg(20);

void BM_exact_range(benchmark::State& state) {
  const fprw::Model& model = model_of("counterexample");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fprw::exact_expected_range(model, n, 100'000'000));
  }
}
BENCHMARK(BM_exact_range)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
