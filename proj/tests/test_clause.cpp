#include "winrat/clause.hpp"

#include <doctest.h>

#include <vector>

#include "winrat/proof_io.hpp"

using namespace winrat;

TEST_CASE("literal keys and dimacs round trip") {
  CHECK(Lit::from_dimacs(1).key() == 2);
  CHECK(Lit::from_dimacs(-1).key() == 3);
  CHECK(Lit::from_dimacs(2).key() == 4);
  CHECK(Lit::from_dimacs(-5).key() == 11);

  for (int d : {1, -1, 7, -7, 123, -123}) {
    Lit l = Lit::from_dimacs(d);
    CHECK(l.to_dimacs() == d);
    CHECK(l.valid());
    CHECK(l.complement().to_dimacs() == -d);
    CHECK(l.complement().complement() == l);
  }
  CHECK_FALSE(Lit().valid());
}

TEST_CASE("literal ordering is by variable, positive first") {
  Lit a = Lit::from_dimacs(1), na = Lit::from_dimacs(-1);
  Lit b = Lit::from_dimacs(2);
  CHECK(a < na);
  CHECK(na < b);
  CHECK(a.var() == na.var());
  CHECK(na.negative());
  CHECK_FALSE(a.negative());
}

TEST_CASE("normalize sorts and removes duplicates") {
  std::vector<int> raw{3, 1, 3, 2};
  NormalizedClause n = normalize_clause(std::span<const int>(raw));
  CHECK_FALSE(n.tautology);
  REQUIRE(n.clause.len() == 3);
  CHECK(n.clause.lits[0] == Lit::from_dimacs(1));
  CHECK(n.clause.lits[1] == Lit::from_dimacs(2));
  CHECK(n.clause.lits[2] == Lit::from_dimacs(3));
}

TEST_CASE("normalize flags tautologies but keeps the literal list") {
  std::vector<int> raw{2, -1, 1};
  NormalizedClause n = normalize_clause(std::span<const int>(raw));
  CHECK(n.tautology);
  REQUIRE(n.clause.len() == 3);
  CHECK(n.clause.lits[0] == Lit::from_dimacs(1));
  CHECK(n.clause.lits[1] == Lit::from_dimacs(-1));
  CHECK(n.clause.lits[2] == Lit::from_dimacs(2));
  CHECK(is_tautology(n.clause));

  std::vector<int> plain{1, 2};
  CHECK_FALSE(is_tautology(normalize_clause(std::span<const int>(plain)).clause));
}

TEST_CASE("normalize of the empty clause") {
  std::vector<int> raw;
  NormalizedClause n = normalize_clause(std::span<const int>(raw));
  CHECK(n.clause.empty());
  CHECK_FALSE(n.tautology);
}

static Clause mk(std::vector<int> ds) {
  Clause c;
  for (int d : ds) c.lits.push_back(Lit::from_dimacs(d));
  return c;
}

TEST_CASE("clause hash frozen values") {
  // hash = len + sum of key * 1-based position over keys sorted ascending.
  CHECK(clause_hash(mk({3})) == 7);
  CHECK(clause_hash(mk({1, 2, -5})) == 46);
  CHECK(clause_hash(mk({})) == 0);
}

TEST_CASE("clause hash is order invariant") {
  CHECK(clause_hash(mk({-5, 2, 1})) == 46);
  CHECK(clause_hash(mk({2, -5, 1})) == 46);
}

TEST_CASE("known colliding pair hashes equal but compares unequal") {
  Clause a = mk({1, -5});
  Clause b = mk({2, 5});
  CHECK(clause_hash(a) == 26);
  CHECK(clause_hash(b) == 26);
  CHECK_FALSE(a == b);
}

TEST_CASE("formula max_var and dimacs round trip") {
  Formula f;
  f.num_vars = 3;
  f.declared_clauses = 2;
  f.clauses.push_back(mk({1, -3}));
  f.clauses.push_back(mk({-1, 2, 3}));
  CHECK(f.max_var() == 3);

  std::string text = to_dimacs(f);
  Formula g = parse_dimacs(text);
  REQUIRE(g.clauses.size() == 2);
  CHECK(g.num_vars == 3);
  CHECK(g.clauses[0] == f.clauses[0]);
  CHECK(g.clauses[1] == f.clauses[1]);
}
