#include "winrat/proof_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

using namespace winrat;

static Clause mk(std::vector<int> ds) {
  Clause c;
  for (int d : ds) c.lits.push_back(Lit::from_dimacs(d));
  return c;
}

// ---------------------------------------------------------------- DIMACS --

TEST_CASE("dimacs basic parse") {
  Formula f = parse_dimacs("c a comment\np cnf 3 2\n1 -3 0\n2 3 -1 0\n");
  CHECK(f.num_vars == 3);
  CHECK(f.declared_clauses == 2);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == mk({1, -3}));
  CHECK(f.clauses[1] == mk({-1, 2, 3}));
}

TEST_CASE("dimacs clauses may span lines and the zero may be mid-line") {
  Formula f = parse_dimacs("p cnf 2 2\n1\n2 0 -1 0\n");
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == mk({1, 2}));
  CHECK(f.clauses[1] == mk({-1}));
}

TEST_CASE("dimacs count mismatch warns, does not throw") {
  std::vector<std::string> w;
  Formula f = parse_dimacs("p cnf 2 5\n1 2 0\n", false, &w);
  CHECK(f.clauses.size() == 1);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("declares 5") != std::string::npos);
}

TEST_CASE("dimacs undeclared variable grows with warning, throws in strict") {
  std::vector<std::string> w;
  Formula f = parse_dimacs("p cnf 1 1\n1 4 0\n", false, &w);
  CHECK(f.num_vars == 4);
  CHECK(w.size() == 1);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1 4 0\n", true), ParseError);
}

TEST_CASE("dimacs error positions") {
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);           // no header
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);  // no zero
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf\n"), ParseError);
  try {
    parse_dimacs("p cnf 2 1\nc fine\n1 ? 0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 3);  // line number
  }
}

// ------------------------------------------------------------ proof lines --

TEST_CASE("proof line tokenizer") {
  auto add = parse_proof_line("  1 -2 0 trailing ignored");
  REQUIRE(add.has_value());
  CHECK(add->kind == ProofStep::Kind::kAdd);
  CHECK(add->raw_lits == std::vector<int>{1, -2});

  auto del = parse_proof_line("c note\nd 1 2 0\n");
  REQUIRE(del.has_value());
  CHECK(del->kind == ProofStep::Kind::kDelete);
  CHECK(del->raw_lits == std::vector<int>{1, 2});

  CHECK_FALSE(parse_proof_line("c only comments\n  \n").has_value());
  CHECK_THROWS_AS(parse_proof_line("1 2"), ParseError);    // missing 0
  CHECK_THROWS_AS(parse_proof_line("dx 1 0"), ParseError); // junk after d
  CHECK_THROWS_AS(parse_proof_line("1 2x 0"), ParseError);
}

// -------------------------------------------------------------- load_proof --

TEST_CASE("load_proof records inferences, deletes and metadata") {
  ProofDB db = load_proof(
      make_memory_source("2 1 0\nc mid comment\nd 1 2 0\n-3 0\n0\n"));
  REQUIRE(db.steps.size() == 4);
  REQUIRE(db.inferences.size() == 3);
  REQUIRE(db.deletes.size() == 1);

  CHECK(db.inferences[0].clause == mk({1, 2}));  // normalized order
  CHECK(db.inferences[0].pivot_hint == Lit::from_dimacs(2));  // as written
  CHECK(db.inferences[0].len == 2);
  CHECK(db.inferences[0].step_pos == 1);
  CHECK(db.inferences[0].hash == clause_hash(mk({1, 2})));

  CHECK(db.deletes[0].clause == mk({1, 2}));
  CHECK(db.deletes[0].step_pos == 2);

  CHECK(db.inferences[1].clause == mk({-3}));
  CHECK(db.inferences[1].step_pos == 3);

  CHECK(db.inferences[2].len == 0);
  REQUIRE(db.empty_at.has_value());
  CHECK(*db.empty_at == 2);

  CHECK(db.max_var == 3);
  CHECK(db.first_seen_step[1] == 1);
  CHECK(db.first_seen_step[2] == 1);
  CHECK(db.first_seen_step[3] == 3);
}

TEST_CASE("load_proof keeps the first empty clause only") {
  ProofDB db = load_proof(make_memory_source("0\n1 0\n0\n"));
  REQUIRE(db.empty_at.has_value());
  CHECK(*db.empty_at == 0);
}

TEST_CASE("load_proof flags tautological additions") {
  ProofDB db = load_proof(make_memory_source("1 -1 2 0\n0\n"));
  CHECK(db.inferences[0].tautology);
  CHECK(db.inferences[0].len == 3);
}

// -------------------------------------------------- eviction and reloading --

TEST_CASE("budget zero evicts everything and clauses reload on demand") {
  ProofDB db = load_proof(make_memory_source("1 2 0\n-1 3 0\n0\n"), 0);
  CHECK(db.evictions == 3);
  CHECK(db.inactive_resident_count() == 0);
  for (const InferenceRecord& r : db.inferences) CHECK_FALSE(r.resident);

  // Metadata survives eviction.
  CHECK(db.inferences[0].len == 2);
  CHECK(db.inferences[0].pivot_hint == Lit::from_dimacs(1));

  CHECK(db.inference_clause(1) == mk({-1, 3}));
  CHECK(db.reloads == 1);
  CHECK(db.inferences[1].resident);

  // Reload does not evict on its own; enforce_budget does.
  CHECK(db.inactive_resident_count() == 1);
  db.enforce_budget();
  CHECK(db.inactive_resident_count() == 0);
}

TEST_CASE("eviction prefers the lowest index and pins active clauses") {
  ProofDB db = load_proof(make_memory_source("1 0\n2 0\n3 0\n0\n"),
                          std::numeric_limits<size_t>::max());
  db.mark_active(0, true);  // pinned
  db.inference_clause(1);
  db.inference_clause(2);
  // Shrink budget to one inactive body: lowest inactive index goes first.
  ProofDB db2 = load_proof(make_memory_source("1 0\n2 0\n3 0\n0\n"), 1);
  CHECK(db2.inactive_resident_count() == 1);
  CHECK_FALSE(db2.inferences[0].resident);
  CHECK_FALSE(db2.inferences[1].resident);
  CHECK_FALSE(db2.inferences[2].resident);
  CHECK(db2.inferences[3].resident);  // highest index survives

  db.mark_active(0, false);
  CHECK(db.inferences[0].resident);
}

namespace {
// A source whose bytes can be corrupted after loading.
class FlippableSource final : public ByteSource {
 public:
  FlippableSource(std::string good, std::string bad)
      : good_(std::move(good)), bad_(std::move(bad)) {}
  bool flipped = false;
  size_t read_at(uint64_t offset, std::span<char> out) override {
    const std::string& s = flipped ? bad_ : good_;
    if (offset >= s.size()) return 0;
    size_t n = std::min(out.size(), s.size() - static_cast<size_t>(offset));
    std::copy_n(s.data() + offset, n, out.data());
    return n;
  }

 private:
  std::string good_, bad_;
};
}  // namespace

TEST_CASE("reload detects content drift under the recorded offset") {
  std::string good = "1 2 0\n0\n";
  auto src = std::make_unique<FlippableSource>(good, "1 3 0\n0\n");
  FlippableSource* raw = src.get();
  ProofDB db = load_proof(std::move(src), 0);
  raw->flipped = true;
  CHECK_THROWS_AS(db.inference_clause(0), ProofIntegrityError);

  auto src2 = std::make_unique<FlippableSource>(good, "x y z\n0\n");
  FlippableSource* raw2 = src2.get();
  ProofDB db2 = load_proof(std::move(src2), 0);
  raw2->flipped = true;
  CHECK_THROWS_AS(db2.inference_clause(0), ProofIntegrityError);

  // Unflipped reloads agree with the original content.
  auto src3 = std::make_unique<FlippableSource>(good, good);
  ProofDB db3 = load_proof(std::move(src3), 0);
  CHECK(db3.inference_clause(0) == mk({1, 2}));
}

// -------------------------------------------------------------- deletions --

static Formula mk_formula(std::vector<std::vector<int>> cls, uint32_t nv) {
  Formula f;
  f.num_vars = nv;
  for (auto& c : cls) f.clauses.push_back(mk(c));
  f.declared_clauses = static_cast<uint32_t>(f.clauses.size());
  return f;
}

TEST_CASE("deletes resolve against formula clauses") {
  Formula f = mk_formula({{1, 2}, {-1}}, 2);
  ProofDB db = load_proof(make_memory_source("d 2 1 0\n0\n"));
  DeletionResolution res = resolve_deletions(db, f);
  CHECK(res.matched == 1);
  CHECK(res.unmatched == 0);
  CHECK(res.formula_delete_step[0] == 1);
  CHECK(res.formula_delete_step[1] == kNeverDeleted);
  CHECK(db.deletes[0].target == DeleteRecord::Target::kFormula);
  CHECK(db.deletes[0].target_index == 0);
}

TEST_CASE("deletes pick the most recently added duplicate") {
  Formula f = mk_formula({{1, 2}}, 2);
  ProofDB db = load_proof(make_memory_source("1 2 0\n1 2 0\nd 1 2 0\n0\n"));
  DeletionResolution res = resolve_deletions(db, f);
  CHECK(db.inferences[0].delete_step == kNeverDeleted);
  CHECK(db.inferences[1].delete_step == 3);
  // The formula copy stays live too.
  CHECK(res.formula_delete_step[0] == kNeverDeleted);
}

TEST_CASE("unmatched deletes warn and count") {
  Formula f = mk_formula({{1, 2}}, 2);
  ProofDB db = load_proof(make_memory_source("d 5 0\n0\n"));
  std::vector<std::string> w;
  DeletionResolution res = resolve_deletions(db, f, kNeverDeleted, &w);
  CHECK(res.matched == 0);
  CHECK(res.unmatched == 1);
  CHECK(db.deletes[0].target == DeleteRecord::Target::kNoMatch);
  CHECK(w.size() == 1);
}

TEST_CASE("colliding hashes do not cross-delete") {
  // {1,-5} and {2,5} share a hash; the delete of one must not hit the other.
  Formula f = mk_formula({{1, -5}}, 5);
  ProofDB db = load_proof(make_memory_source("2 5 0\nd 1 -5 0\n0\n"));
  DeletionResolution res = resolve_deletions(db, f);
  CHECK(res.matched == 1);
  CHECK(res.formula_delete_step[0] == 2);
  CHECK(db.inferences[0].delete_step == kNeverDeleted);
}

TEST_CASE("deletion replay stops at the limit step") {
  Formula f = mk_formula({{1, 2}}, 2);
  ProofDB db = load_proof(make_memory_source("1 0\n0\nd 1 0\n"));
  DeletionResolution res = resolve_deletions(db, f, 2);  // truncate after 0
  CHECK(res.matched == 0);
  CHECK(db.inferences[0].delete_step == kNeverDeleted);
  CHECK(db.deletes[0].target == DeleteRecord::Target::kUnresolved);
  // Live table still holds the formula clause plus both inferences.
  CHECK(res.table_size_end == 3);
}

TEST_CASE("deleted inference then re-added resolves independently") {
  Formula f = mk_formula({{3}}, 3);
  ProofDB db =
      load_proof(make_memory_source("1 2 0\nd 1 2 0\n1 2 0\nd 1 2 0\n0\n"));
  resolve_deletions(db, f);
  CHECK(db.inferences[0].delete_step == 2);
  CHECK(db.inferences[1].delete_step == 4);
}

// -------------------------------------------------------------- round trip --

TEST_CASE("to_drat emits pivot-first text that reparses to a fixed point") {
  ProofDB db = load_proof(make_memory_source("2 1 0\nd 2 1 0\n-3 0\n0\n"));
  std::string once = to_drat(db);
  CHECK(once == "2 1 0\nd 1 2 0\n-3 0\n0\n");

  ProofDB db2 = load_proof(make_memory_source(once));
  CHECK(to_drat(db2) == once);
  REQUIRE(db2.inferences.size() == db.inferences.size());
  for (size_t i = 0; i < db.inferences.size(); ++i) {
    CHECK(db2.inferences[i].hash == db.inferences[i].hash);
    CHECK(db2.inferences[i].pivot_hint == db.inferences[i].pivot_hint);
  }
}
