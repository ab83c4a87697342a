#include "winrat/propagation.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "winrat/testkit.hpp"

using namespace winrat;

static Clause mk(std::vector<int> ds) {
  Clause c;
  for (int d : ds) c.lits.push_back(Lit::from_dimacs(d));
  return c;
}

namespace {
struct Engine {
  PropagationState st;
  std::vector<ClauseRef> refs;

  ClauseRef add(std::vector<int> ds, uint32_t index = 0) {
    ClauseRef cr = st.add_clause(mk(std::move(ds)), ClauseOrigin::kInference,
                                 index);
    st.attach(cr);
    refs.push_back(cr);
    return cr;
  }
};
}  // namespace

TEST_CASE("unit chain propagates without conflict") {
  Engine e;
  e.add({1});
  e.add({-1, 2});
  PropagationOutcome out = e.st.propagate();
  CHECK_FALSE(out.conflict);
  CHECK(e.st.trail_size() == 2);
  CHECK(e.st.value(Lit::from_dimacs(1)) > 0);
  CHECK(e.st.value(Lit::from_dimacs(2)) > 0);
}

TEST_CASE("opposing units conflict") {
  Engine e;
  e.add({1});
  e.add({-1});
  PropagationOutcome out = e.st.propagate();
  CHECK(out.conflict);
  CHECK(out.at.from_clause());
}

TEST_CASE("chain into a conflict") {
  Engine e;
  e.add({1});
  e.add({-1, 2});
  e.add({-2, 3});
  e.add({-3});
  CHECK(e.st.propagate().conflict);
}

TEST_CASE("empty clause conflicts immediately and after rollback") {
  Engine e;
  e.add({});
  CHECK(e.st.propagate().conflict);

  e.st.save_point();
  e.st.rollback();
  CHECK(e.st.propagate().conflict);
}

TEST_CASE("assume rejects a falsified literal and tolerates repeats") {
  Engine e;
  e.add({1});
  REQUIRE_FALSE(e.st.propagate().conflict);

  CHECK(e.st.assume(Lit::from_dimacs(1)));  // already true: no-op
  CHECK(e.st.trail_size() == 1);
  CHECK_FALSE(e.st.assume(Lit::from_dimacs(-1)));
  CHECK(e.st.has_pending_conflict());
  CHECK(e.st.propagate().conflict);
}

TEST_CASE("unit replay re-derives base facts after rollback") {
  Engine e;
  e.add({1});
  e.add({-1, 2});
  REQUIRE_FALSE(e.st.propagate().conflict);
  REQUIRE(e.st.trail_size() == 2);

  e.st.save_point();
  CHECK(e.st.assume(Lit::from_dimacs(-3)));
  REQUIRE_FALSE(e.st.propagate().conflict);
  CHECK(e.st.trail_size() == 3);
  e.st.rollback();

  CHECK(e.st.trail_size() == 2);
  CHECK_FALSE(e.st.propagate().conflict);
  CHECK(e.st.value(Lit::from_dimacs(2)) > 0);
  CHECK(e.st.value(Lit::from_dimacs(3)) == 0);
}

TEST_CASE("rollback to the empty trail then re-propagate equals fresh state") {
  // Attach-time enqueues land on the trail, so save before attaching.
  Engine e;
  e.st.save_point();
  e.add({2, 3});
  e.add({1});
  e.add({-1, -2});
  REQUIRE_FALSE(e.st.propagate().conflict);
  size_t n = e.st.trail_size();
  e.st.rollback();
  CHECK(e.st.trail_size() == 0);
  CHECK_FALSE(e.st.propagate().conflict);
  CHECK(e.st.trail_size() == n);
  CHECK(e.st.value(Lit::from_dimacs(1)) > 0);
  CHECK(e.st.value(Lit::from_dimacs(-2)) > 0);
  CHECK(e.st.value(Lit::from_dimacs(3)) > 0);
}

TEST_CASE("is_unit_in_bcp singles out the sole open literal") {
  Engine e;
  e.st.assume(Lit::from_dimacs(1));
  e.st.assume(Lit::from_dimacs(2));
  REQUIRE_FALSE(e.st.propagate().conflict);

  Clause c = mk({-1, -2, 5});
  auto u = e.st.is_unit_in_bcp(c);
  REQUIRE(u.has_value());
  CHECK(*u == Lit::from_dimacs(5));

  Engine e2;
  e2.st.assume(Lit::from_dimacs(1));
  REQUIRE_FALSE(e2.st.propagate().conflict);
  CHECK_FALSE(e2.st.is_unit_in_bcp(c).has_value());  // two open literals

  Engine e3;
  e3.st.assume(Lit::from_dimacs(1));
  e3.st.assume(Lit::from_dimacs(2));
  e3.st.assume(Lit::from_dimacs(-5));
  REQUIRE_FALSE(e3.st.propagate().conflict);
  CHECK_FALSE(e3.st.is_unit_in_bcp(c).has_value());  // fully falsified
}

TEST_CASE("count_non_falsified honors its cap") {
  Engine e;
  e.st.assume(Lit::from_dimacs(-1));
  REQUIRE_FALSE(e.st.propagate().conflict);
  Clause c = mk({1, 2, 3});
  CHECK(e.st.count_non_falsified(c.lits, 3) == 2);
  CHECK(e.st.count_non_falsified(c.lits, 1) == 1);  // stops early
  CHECK(e.st.count_non_falsified(mk({1}).lits, 2) == 0);
}

TEST_CASE("conflict antecedents walk trail reasons") {
  Engine e;
  ClauseRef a = e.st.add_clause(mk({1}), ClauseOrigin::kInference, 10);
  ClauseRef b = e.st.add_clause(mk({-1, 2}), ClauseOrigin::kFormula, 0);
  ClauseRef c = e.st.add_clause(mk({-2, 3}), ClauseOrigin::kInference, 11);
  ClauseRef d = e.st.add_clause(mk({-3}), ClauseOrigin::kInference, 12);
  for (ClauseRef cr : {a, b, c, d}) e.st.attach(cr);

  PropagationOutcome out = e.st.propagate();
  REQUIRE(out.conflict);
  std::vector<uint32_t> ants = e.st.conflict_antecedents(out.at);
  // Formula clauses never appear; all three inference indices do.
  CHECK(ants == std::vector<uint32_t>{10, 11, 12});
}

TEST_CASE("failed assumption yields antecedents of the complement") {
  Engine e;
  ClauseRef a = e.st.add_clause(mk({2}), ClauseOrigin::kInference, 7);
  e.st.attach(a);
  REQUIRE_FALSE(e.st.propagate().conflict);
  REQUIRE_FALSE(e.st.assume(Lit::from_dimacs(-2)));
  std::vector<uint32_t> ants =
      e.st.conflict_antecedents(Conflict{kNullRef, Lit::from_dimacs(-2)});
  CHECK(ants == std::vector<uint32_t>{7});
}

TEST_CASE("detach clears watches and unit entries") {
  Engine e;
  ClauseRef bin = e.refs.emplace_back(
      e.st.add_clause(mk({1, 2}), ClauseOrigin::kFormula, 0));
  ClauseRef unit = e.refs.emplace_back(
      e.st.add_clause(mk({3}), ClauseOrigin::kFormula, 1));
  e.st.attach(bin);
  e.st.attach(unit);
  CHECK(e.st.watch_entry_count() == 2);
  CHECK(e.st.unit_list_size() == 1);

  e.st.detach(bin);
  e.st.detach(unit);
  CHECK(e.st.watch_entry_count() == 0);
  CHECK(e.st.unit_list_size() == 0);

  e.st.release_clause(bin);
  e.st.release_clause(unit);
  CHECK(e.st.live_clause_count() == 0);
}

TEST_CASE("attach under a partial assignment enqueues or records conflicts") {
  Engine e;
  e.st.assume(Lit::from_dimacs(-1));
  e.st.assume(Lit::from_dimacs(-2));
  REQUIRE_FALSE(e.st.propagate().conflict);

  ClauseRef u = e.st.add_clause(mk({1, 2, 3}), ClauseOrigin::kFormula, 0);
  e.st.attach(u);  // unit here: forces 3
  REQUIRE_FALSE(e.st.propagate().conflict);
  CHECK(e.st.value(Lit::from_dimacs(3)) > 0);

  ClauseRef f = e.st.add_clause(mk({1, 2, -3}), ClauseOrigin::kFormula, 1);
  e.st.attach(f);  // falsified here: pending conflict
  CHECK(e.st.has_pending_conflict());
  CHECK(e.st.propagate().conflict);
}

TEST_CASE("watched propagation agrees with rescan propagation") {
  std::mt19937_64 rng(20240817);
  for (int round = 0; round < 300; ++round) {
    uint32_t nv = 3 + rng() % 8;
    uint32_t nc = 2 + rng() % 14;
    Formula f = testkit::gen_random_ksat(nv, nc, 1 + rng() % 3, rng());

    uint32_t nassume = rng() % 3;
    std::vector<Lit> assumptions;
    std::set<uint32_t> used_vars;
    for (uint32_t a = 0; a < nassume; ++a) {
      uint32_t v = 1 + rng() % nv;
      if (!used_vars.insert(v).second) continue;
      assumptions.push_back(
          Lit::from_dimacs(rng() % 2 ? static_cast<int>(v)
                                     : -static_cast<int>(v)));
    }

    PropagationState st;
    st.ensure_var(nv);
    std::vector<ClauseRef> refs;
    for (uint32_t i = 0; i < f.clauses.size(); ++i) {
      ClauseRef cr = st.add_clause(f.clauses[i], ClauseOrigin::kFormula, i);
      st.attach(cr);
      refs.push_back(cr);
    }
    bool ok = true;
    for (Lit l : assumptions) ok = st.assume(l) && ok;
    bool conflict = st.propagate().conflict || !ok;

    std::vector<const Clause*> ptrs;
    for (const Clause& c : f.clauses) ptrs.push_back(&c);
    testkit::NaiveBcpResult ref = testkit::naive_bcp(ptrs, assumptions, nv);

    REQUIRE(conflict == ref.conflict);
    if (!conflict) {
      // Same fixpoint assignment set, order aside.
      std::set<uint32_t> got, want;
      for (Lit l : st.trail()) got.insert(l.key());
      for (Lit l : ref.assigned) want.insert(l.key());
      REQUIRE(got == want);
    }
  }
}
