#include <benchmark/benchmark.h>

#include <random>

#include "winrat/clause.hpp"

using namespace winrat;

static Clause random_clause(uint32_t len, std::mt19937_64& rng) {
  Clause c;
  for (uint32_t i = 0; i < len; ++i) {
    uint32_t v = 1 + rng() % (4 * len + 1);
    c.lits.push_back(Lit::from_key(2 * v + (rng() & 1u)));
  }
  return c;
}

static void BM_ClauseHash(benchmark::State& state) {
  std::mt19937_64 rng(7);
  Clause c = random_clause(static_cast<uint32_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(clause_hash(c));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ClauseHash)->Arg(3)->Arg(16)->Arg(128);

static void BM_NormalizeClause(benchmark::State& state) {
  std::mt19937_64 rng(11);
  Clause a = random_clause(static_cast<uint32_t>(state.range(0)), rng);
  for (auto _ : state) {
    NormalizedClause n = normalize_clause(a.lits);
    benchmark::DoNotOptimize(n.tautology);
  }
}
BENCHMARK(BM_NormalizeClause)->Arg(3)->Arg(16)->Arg(128);
