#ifndef WINRAT_CLAUSE_HPP
#define WINRAT_CLAUSE_HPP

#include <cassert>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace winrat {

// Literal over a positive DIMACS variable. Internally keyed as
// 2*var + (1 if negative else 0), so keys start at 2 and ordering by key
// equals ordering by (var, sign) with the positive literal first.
class Lit {
 public:
  Lit() = default;

  static Lit from_dimacs(int d);
  static Lit from_key(uint32_t key) {
    assert(key >= 2);
    Lit l;
    l.key_ = key;
    return l;
  }

  int to_dimacs() const {
    return negative() ? -static_cast<int>(var()) : static_cast<int>(var());
  }

  uint32_t var() const { return key_ >> 1; }
  bool negative() const { return key_ & 1; }
  uint32_t key() const { return key_; }
  bool valid() const { return key_ >= 2; }

  Lit complement() const { return from_key(key_ ^ 1); }

  friend auto operator<=>(const Lit&, const Lit&) = default;

 private:
  uint32_t key_ = 0;
};

struct Clause {
  std::vector<Lit> lits;

  size_t len() const { return lits.size(); }
  bool empty() const { return lits.empty(); }
  auto begin() const { return lits.begin(); }
  auto end() const { return lits.end(); }

  friend bool operator==(const Clause&, const Clause&) = default;
};

// Sorted by key, duplicates removed. A tautology (x and ~x both present)
// keeps its sorted literal list so deletion steps can still match it.
struct NormalizedClause {
  Clause clause;
  bool tautology = false;
};

NormalizedClause normalize_clause(std::span<const int> raw);
NormalizedClause normalize_clause(std::span<const Lit> raw);

// True when two adjacent literals of a normalized clause share a variable.
bool is_tautology(const Clause& normalized);

// hash(C) = len + sum over sorted keys of key * (1-based position), in
// wrapping 64-bit arithmetic. Invariant under the caller's literal order;
// sorting happens on a local copy.
uint64_t clause_hash(const Clause& c);

struct Formula {
  std::vector<Clause> clauses;   // normalized; tautologies retained
  uint32_t num_vars = 0;
  uint32_t declared_clauses = 0;

  uint32_t max_var() const;
};

std::string to_dimacs(const Formula& f);

}  // namespace winrat

#endif
