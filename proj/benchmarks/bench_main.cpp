// Microbenchmarks for the hot paths: extension enumeration, completion
// handling and the coalition model checker. Sizes are chosen so a full run
// stays in the low seconds while still separating the semantics from each
// other.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cafcoal/af.hpp"
#include "cafcoal/caf.hpp"
#include "cafcoal/catl.hpp"
#include "cafcoal/formats.hpp"

using namespace cafcoal;

namespace {

// Seeded random framework so every run measures the same instance.
ArgumentationFramework random_framework(std::size_t n, double density,
                                        std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution attack(density);
  ArgumentationFramework af;
  for (std::size_t i = 0; i < n; ++i)
    af.add_argument("a" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (attack(rng)) af.add_attack(i, j);
  return af;
}

ArgumentationFramework chain_framework(std::size_t n) {
  ArgumentationFramework af;
  for (std::size_t i = 0; i < n; ++i)
    af.add_argument("a" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i) af.add_attack(i, i + 1);
  return af;
}

void bench_enumerate(benchmark::State& state, Semantics semantics) {
  auto af = random_framework(static_cast<std::size_t>(state.range(0)), 0.25,
                             12345);
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_extensions(af, semantics));
}

void BM_grounded(benchmark::State& state) {
  bench_enumerate(state, Semantics::Grounded);
}
void BM_complete(benchmark::State& state) {
  bench_enumerate(state, Semantics::Complete);
}
void BM_preferred(benchmark::State& state) {
  bench_enumerate(state, Semantics::Preferred);
}
void BM_stable(benchmark::State& state) {
  bench_enumerate(state, Semantics::Stable);
}

void BM_grounded_chain(benchmark::State& state) {
  auto af = chain_framework(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_extensions(af, Semantics::Grounded));
}

// A control framework with u uncertain arguments, one uncertain attack per
// uncertain argument and c control arguments attacking them.
ControlFramework layered_caf(std::size_t u, std::size_t c) {
  ControlFramework caf;
  caf.add_argument("t", ControlFramework::Part::Fixed);
  for (std::size_t i = 0; i < u; ++i) {
    std::string name = "u" + std::to_string(i);
    caf.add_argument(name, ControlFramework::Part::Uncertain);
    caf.add_uncertain_attack(name, "t");
  }
  for (std::size_t i = 0; i < c; ++i) {
    std::string name = "c" + std::to_string(i);
    caf.add_argument(name, ControlFramework::Part::Control);
    caf.add_control_attack(name, "u" + std::to_string(i % u));
  }
  return caf;
}

void BM_count_completions(benchmark::State& state) {
  auto caf = layered_caf(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(count_completions(caf));
}

void BM_check_configuration(benchmark::State& state) {
  auto caf = layered_caf(static_cast<std::size_t>(state.range(0)), 2);
  auto config = make_configuration(caf, {"c0", "c1"});
  TargetQuery query{"t", Semantics::Grounded, TargetMode::SkepticalAccept};
  for (auto _ : state)
    benchmark::DoNotOptimize(check_configuration(caf, config, query));
}

void BM_find_configuration(benchmark::State& state) {
  auto caf = layered_caf(4, static_cast<std::size_t>(state.range(0)));
  TargetQuery query{"t", Semantics::Grounded, TargetMode::SkepticalAccept};
  for (auto _ : state)
    benchmark::DoNotOptimize(find_controlling_configuration(caf, query));
}

// The worked two-agent game, model-checked from scratch each iteration (the
// zeta memo is per-system, so a fresh parse measures the uncached path).
const char* kWorkedCaf = "farg(t). uarg(u). carg(c). uatt(u,t). att(c,u).\n";
const char* kWorkedSystem =
    "agent(1). agent(2).\n"
    "state(q0). state(q1). state(q2).\n"
    "init(q0). prop(q1,p).\n"
    "moves(q0,1,2). moves(q0,2,2).\n"
    "trans(q0,(1,1),q1). trans(q0,(1,2),q2).\n"
    "trans(q0,(2,1),q2). trans(q0,(2,2),q1).\n"
    "trans(q1,(1,1),q1). trans(q2,(1,1),q2).\n"
    "caf(0,\"k0.caf\").\n";

CafAtsSystem parse_worked_system() {
  FileLoader loader = [](const std::string&) -> std::optional<std::string> {
    return std::string(kWorkedCaf);
  };
  auto result = parse_catl(kWorkedSystem, "<bench>", loader);
  return std::move(*result.value);
}

void BM_model_check(benchmark::State& state) {
  auto formula = *parse_formula("<<1,2>> (p & !zeta(t))").value;
  for (auto _ : state) {
    CafAtsSystem sys = parse_worked_system();
    benchmark::DoNotOptimize(satisfies(sys, sys.init_state(), formula));
  }
}

void BM_parse_catl(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_worked_system());
}

}  // namespace

BENCHMARK(BM_grounded)->Arg(32)->Arg(128);
BENCHMARK(BM_complete)->Arg(10)->Arg(14);
BENCHMARK(BM_preferred)->Arg(10)->Arg(14);
BENCHMARK(BM_stable)->Arg(10)->Arg(14);
BENCHMARK(BM_grounded_chain)->Arg(256)->Arg(1024);
BENCHMARK(BM_count_completions)->Arg(8)->Arg(16);
BENCHMARK(BM_check_configuration)->Arg(4)->Arg(8);
BENCHMARK(BM_find_configuration)->Arg(2)->Arg(6);
BENCHMARK(BM_model_check);
BENCHMARK(BM_parse_catl);

BENCHMARK_MAIN();
