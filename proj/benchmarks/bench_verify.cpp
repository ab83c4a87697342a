#include <benchmark/benchmark.h>

#include <string>

#include "winrat/driver.hpp"
#include "winrat/testkit.hpp"

using namespace winrat;
namespace tk = winrat::testkit;

// End-to-end verification (parse + pipeline) of a pigeonhole refutation.
static void BM_VerifyPigeonhole(benchmark::State& state) {
  Formula f = tk::gen_pigeonhole(static_cast<uint32_t>(state.range(0)));
  std::string drat = tk::emit_proof_dpll(f).drat;
  for (auto _ : state) {
    ProofDB db = load_proof(make_memory_source(drat));
    VerifyResult r = verify(f, db, Config{});
    benchmark::DoNotOptimize(r.verdict.verified);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_VerifyPigeonhole)->Arg(2)->Arg(3)->Arg(4);

// Window width sweep on the same refutation; 0 stands for unbounded.
static void BM_VerifyTheta(benchmark::State& state) {
  Formula f = tk::gen_pigeonhole(4);
  std::string drat = tk::emit_proof_dpll(f).drat;
  Config cfg;
  cfg.theta = state.range(0) == 0 ? kInfinity
                                  : static_cast<uint32_t>(state.range(0));
  for (auto _ : state) {
    ProofDB db = load_proof(make_memory_source(drat));
    VerifyResult r = verify(f, db, cfg);
    benchmark::DoNotOptimize(r.verdict.verified);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_VerifyTheta)->Arg(1)->Arg(8)->Arg(64)->Arg(40000)->Arg(0);

// Split proofs with auxiliary-variable blocks: fast path on vs off.
static void BM_VerifySplit(benchmark::State& state) {
  Formula f = tk::gen_pigeonhole(5);
  std::vector<Lit> branch{Lit::from_dimacs(1), Lit::from_dimacs(6)};
  std::string drat = tk::emit_split_proof(f, branch);
  Config cfg;
  cfg.fastpath = state.range(0) != 0;
  for (auto _ : state) {
    ProofDB db = load_proof(make_memory_source(drat));
    VerifyResult r = verify(f, db, cfg);
    benchmark::DoNotOptimize(r.verdict.verified);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_VerifySplit)->Arg(1)->Arg(0);

// Streaming: every inactive clause body evicted versus all resident.
static void BM_VerifyBudget(benchmark::State& state) {
  Formula f = tk::gen_pigeonhole(4);
  std::string drat = tk::emit_proof_dpll(f).drat;
  size_t budget = state.range(0) == 0 ? 0 : std::numeric_limits<size_t>::max();
  for (auto _ : state) {
    ProofDB db = load_proof(make_memory_source(drat), budget);
    VerifyResult r = verify(f, db, Config{});
    benchmark::DoNotOptimize(r.verdict.verified);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_VerifyBudget)->Arg(1)->Arg(0);
