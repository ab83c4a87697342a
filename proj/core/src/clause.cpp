#include "winrat/clause.hpp"

#include <algorithm>
#include <stdexcept>

namespace winrat {

Lit Lit::from_dimacs(int d) {
  if (d == 0) throw std::invalid_argument("literal 0 is the clause terminator");
  uint32_t v = static_cast<uint32_t>(d < 0 ? -static_cast<int64_t>(d) : d);
  Lit l;
  l.key_ = (v << 1) | (d < 0 ? 1u : 0u);
  return l;
}

static NormalizedClause normalize_sorted(std::vector<Lit> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  NormalizedClause out;
  out.clause.lits = std::move(lits);
  out.tautology = is_tautology(out.clause);
  return out;
}

NormalizedClause normalize_clause(std::span<const int> raw) {
  std::vector<Lit> lits;
  lits.reserve(raw.size());
  for (int d : raw) lits.push_back(Lit::from_dimacs(d));
  return normalize_sorted(std::move(lits));
}

NormalizedClause normalize_clause(std::span<const Lit> raw) {
  return normalize_sorted(std::vector<Lit>(raw.begin(), raw.end()));
}

bool is_tautology(const Clause& normalized) {
  const auto& ls = normalized.lits;
  for (size_t i = 1; i < ls.size(); ++i)
    if (ls[i].var() == ls[i - 1].var()) return true;
  return false;
}

uint64_t clause_hash(const Clause& c) {
  // Keys are sorted locally so any permutation of the input hashes alike.
  std::vector<uint32_t> keys;
  keys.reserve(c.lits.size());
  for (Lit l : c.lits) keys.push_back(l.key());
  std::sort(keys.begin(), keys.end());
  uint64_t h = static_cast<uint64_t>(keys.size());
  for (size_t i = 0; i < keys.size(); ++i)
    h += static_cast<uint64_t>(keys[i]) * static_cast<uint64_t>(i + 1);
  return h;
}

uint32_t Formula::max_var() const {
  uint32_t m = num_vars;
  for (const Clause& c : clauses)
    for (Lit l : c.lits) m = std::max(m, l.var());
  return m;
}

std::string to_dimacs(const Formula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars) + " " +
                    std::to_string(f.clauses.size()) + "\n";
  for (const Clause& c : f.clauses) {
    for (Lit l : c.lits) {
      out += std::to_string(l.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

}  // namespace winrat
