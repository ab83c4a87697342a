#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "winrat/propagation.hpp"

using namespace winrat;

namespace {

// Random 3-SAT instance attached once; each iteration assumes a fresh
// literal set, propagates to fixpoint or conflict, and rolls back.
struct Bed {
  PropagationState st;
  std::vector<std::vector<Lit>> assumption_sets;

  explicit Bed(uint32_t vars) {
    std::mt19937_64 rng(13);
    st.ensure_var(vars);
    uint32_t ncl = vars * 4;
    for (uint32_t i = 0; i < ncl; ++i) {
      std::vector<uint32_t> chosen;
      while (chosen.size() < 3) {
        uint32_t v = 1 + rng() % vars;
        if (std::find(chosen.begin(), chosen.end(), v) == chosen.end())
          chosen.push_back(v);
      }
      Clause c;
      for (uint32_t v : chosen)
        c.lits.push_back(Lit::from_key(2 * v + (rng() & 1u)));
      st.attach(st.add_clause(c, ClauseOrigin::kFormula, i));
    }
    for (int s = 0; s < 64; ++s) {
      std::vector<Lit> as;
      for (int a = 0; a < 6; ++a)
        as.push_back(Lit::from_key(2 * (1 + rng() % vars) + (rng() & 1u)));
      assumption_sets.push_back(std::move(as));
    }
  }
};

}  // namespace

static void BM_Propagate(benchmark::State& state) {
  Bed bed(static_cast<uint32_t>(state.range(0)));
  size_t which = 0;
  for (auto _ : state) {
    bed.st.save_point();
    for (Lit a : bed.assumption_sets[which++ & 63]) bed.st.assume(a);
    PropagationOutcome out = bed.st.propagate();
    benchmark::DoNotOptimize(out.conflict);
    bed.st.rollback();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Propagate)->Arg(64)->Arg(512)->Arg(4096);

static void BM_AttachDetach(benchmark::State& state) {
  uint32_t vars = static_cast<uint32_t>(state.range(0));
  PropagationState st;
  st.ensure_var(vars);
  std::mt19937_64 rng(17);
  std::vector<Clause> pool;
  for (int i = 0; i < 256; ++i) {
    Clause c;
    std::vector<uint32_t> chosen;
    while (chosen.size() < 3) {
      uint32_t v = 1 + rng() % vars;
      if (std::find(chosen.begin(), chosen.end(), v) == chosen.end())
        chosen.push_back(v);
    }
    for (uint32_t v : chosen)
      c.lits.push_back(Lit::from_key(2 * v + (rng() & 1u)));
    pool.push_back(std::move(c));
  }
  size_t which = 0;
  for (auto _ : state) {
    const Clause& c = pool[which++ & 255];
    ClauseRef cr = st.add_clause(c, ClauseOrigin::kInference, 0);
    st.attach(cr);
    st.detach(cr);
    st.release_clause(cr);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AttachDetach)->Arg(64)->Arg(4096);
