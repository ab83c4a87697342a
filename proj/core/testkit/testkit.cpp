#include "winrat/testkit.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

#include "winrat/config.hpp"
#include "winrat/driver.hpp"

namespace winrat::testkit {

bool clause_true_under(const Clause& c, uint32_t model) {
  for (Lit l : c) {
    bool bit = (model >> (l.var() - 1)) & 1u;
    if (bit != l.negative()) return true;
  }
  return false;
}

namespace {

bool formula_true_under(const Formula& f, uint32_t model) {
  for (const Clause& c : f.clauses)
    if (!clause_true_under(c, model)) return false;
  return true;
}

uint32_t check_enumerable(const Formula& f) {
  uint32_t nv = std::max(f.num_vars, f.max_var());
  if (nv > 24) throw std::invalid_argument("exhaustive oracle: > 24 vars");
  return nv;
}

}  // namespace

std::optional<uint32_t> exhaustive_sat(const Formula& f) {
  uint32_t nv = check_enumerable(f);
  uint64_t total = uint64_t{1} << nv;
  for (uint64_t m = 0; m < total; ++m)
    if (formula_true_under(f, static_cast<uint32_t>(m)))
      return static_cast<uint32_t>(m);
  return std::nullopt;
}

std::vector<uint32_t> model_set(const Formula& f) {
  uint32_t nv = check_enumerable(f);
  std::vector<uint32_t> models;
  uint64_t total = uint64_t{1} << nv;
  for (uint64_t m = 0; m < total; ++m)
    if (formula_true_under(f, static_cast<uint32_t>(m)))
      models.push_back(static_cast<uint32_t>(m));
  return models;
}

NaiveBcpResult naive_bcp(const std::vector<const Clause*>& clauses,
                         std::span<const Lit> assumptions, uint32_t num_vars) {
  NaiveBcpResult res;
  std::vector<int8_t> val(num_vars + 1, 0);
  auto lit_val = [&val](Lit l) {
    int8_t v = val[l.var()];
    return l.negative() ? -v : v;
  };

  for (Lit a : assumptions) {
    if (lit_val(a) < 0) {
      res.conflict = true;
      return res;
    }
    if (lit_val(a) == 0) {
      val[a.var()] = a.negative() ? -1 : 1;
      res.assigned.push_back(a);
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (const Clause* c : clauses) {
      Lit open;
      int non_false = 0;
      for (Lit l : *c) {
        int v = lit_val(l);
        if (v > 0) {
          non_false = 2;
          break;
        }
        if (v == 0) {
          if (++non_false > 1) break;
          open = l;
        }
      }
      if (non_false >= 2) continue;
      if (non_false == 0) {
        res.conflict = true;
        return res;
      }
      val[open.var()] = open.negative() ? -1 : 1;
      res.assigned.push_back(open);
      changed = true;
    }
  }
  return res;
}

namespace {

// Live clause list with last-added-match deletion, mirroring the
// resolver's tie-break.
struct LiveSet {
  std::vector<Clause> clauses;

  std::vector<const Clause*> view() const {
    std::vector<const Clause*> v;
    v.reserve(clauses.size());
    for (const Clause& c : clauses) v.push_back(&c);
    return v;
  }

  void erase_last_match(const Clause& c) {
    for (size_t k = clauses.size(); k-- > 0;) {
      if (clauses[k] == c) {
        clauses.erase(clauses.begin() + static_cast<ptrdiff_t>(k));
        return;
      }
    }
  }
};

bool naive_rup(const LiveSet& live, const Clause& c, uint32_t num_vars) {
  std::vector<Lit> neg;
  neg.reserve(c.len());
  for (Lit l : c) neg.push_back(l.complement());
  return naive_bcp(live.view(), neg, num_vars).conflict;
}

bool naive_rat(const LiveSet& live, const Clause& c, Lit hint,
               uint32_t num_vars) {
  if (c.empty()) return false;
  std::vector<Lit> order(c.lits.begin(), c.lits.end());
  auto hit = std::find(order.begin(), order.end(), hint);
  if (hit != order.end()) std::rotate(order.begin(), hit, hit + 1);

  for (Lit pivot : order) {
    bool ok = true;
    for (const Clause& d : live.clauses) {
      bool has = false;
      for (Lit dl : d)
        if (dl == pivot.complement()) has = true;
      if (!has) continue;
      // resolvent = d minus the complement of the pivot, plus c
      std::vector<int> raw;
      for (Lit dl : d)
        if (dl != pivot.complement()) raw.push_back(dl.to_dimacs());
      for (Lit cl : c) raw.push_back(cl.to_dimacs());
      NormalizedClause e = normalize_clause(std::span<const int>(raw));
      if (e.tautology) continue;
      if (!naive_rup(live, e.clause, num_vars)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

ForwardCheckResult naive_forward_check(const Formula& f, ProofDB& db) {
  ForwardCheckResult res;
  uint32_t num_vars = std::max(f.max_var(), db.max_var);
  LiveSet live;
  live.clauses = f.clauses;

  for (const ProofStep& step : db.steps) {
    if (step.kind == ProofStep::Kind::kDelete) {
      live.erase_last_match(db.deletes[step.index].clause);
      continue;
    }
    const InferenceRecord& rec = db.inferences[step.index];
    Clause c = db.inference_clause(step.index);
    if (!rec.tautology &&
        !(naive_rup(live, c, num_vars) ||
          naive_rat(live, c, rec.pivot_hint, num_vars))) {
      res.failing_index = step.index;
      return res;
    }
    if (c.empty()) {
      res.verified = true;
      return res;
    }
    live.clauses.push_back(std::move(c));
  }
  return res;  // no empty clause reached
}

namespace {

Formula make_formula(const std::vector<std::vector<int>>& raw, uint32_t nv) {
  Formula f;
  f.num_vars = nv;
  f.declared_clauses = static_cast<uint32_t>(raw.size());
  for (const auto& lits : raw)
    f.clauses.push_back(normalize_clause(std::span<const int>(lits)).clause);
  return f;
}

}  // namespace

Formula gen_pigeonhole(uint32_t holes) {
  assert(holes >= 1);
  uint32_t n = holes, m = holes + 1;
  auto var = [n](uint32_t pigeon, uint32_t hole) {
    return static_cast<int>((pigeon - 1) * n + hole);
  };
  std::vector<std::vector<int>> raw;
  for (uint32_t i = 1; i <= m; ++i) {
    std::vector<int> c;
    for (uint32_t j = 1; j <= n; ++j) c.push_back(var(i, j));
    raw.push_back(std::move(c));
  }
  for (uint32_t j = 1; j <= n; ++j)
    for (uint32_t i = 1; i <= m; ++i)
      for (uint32_t i2 = i + 1; i2 <= m; ++i2)
        raw.push_back({-var(i, j), -var(i2, j)});
  return make_formula(raw, m * n);
}

Formula gen_random_ksat(uint32_t vars, uint32_t clauses, uint32_t k,
                        uint64_t seed) {
  assert(k >= 1 && k <= vars);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint32_t> pick_var(1, vars);
  std::vector<std::vector<int>> raw;
  std::vector<uint32_t> chosen;
  for (uint32_t c = 0; c < clauses; ++c) {
    chosen.clear();
    while (chosen.size() < k) {
      uint32_t v = pick_var(rng);
      if (std::find(chosen.begin(), chosen.end(), v) == chosen.end())
        chosen.push_back(v);
    }
    std::vector<int> lits;
    for (uint32_t v : chosen) {
      bool neg = rng() & 1u;
      lits.push_back(neg ? -static_cast<int>(v) : static_cast<int>(v));
    }
    raw.push_back(std::move(lits));
  }
  return make_formula(raw, vars);
}

void append_clause_line(std::string& out, std::span<const Lit> lits,
                        bool is_delete) {
  if (is_delete) out += "d ";
  for (Lit l : lits) {
    out += std::to_string(l.to_dimacs());
    out += ' ';
  }
  out += "0\n";
}

namespace {

// Chronological DPLL over a fixed clause list plus growing learned set.
// Every conflict learns the negation of the current decision sequence;
// the learned clause then flips the deepest decision via propagation.
class MiniDpll {
 public:
  MiniDpll(const Formula& f, std::span<const Lit> assumptions) {
    nv_ = std::max(f.max_var(), f.num_vars);
    for (Lit a : assumptions) nv_ = std::max(nv_, a.var());
    val_.assign(nv_ + 1, 0);
    for (const Clause& c : f.clauses)
      if (!is_tautology(c)) clauses_.push_back(c.lits);
    for (Lit a : assumptions) clauses_.push_back({a});
  }

  // True when refuted; lemmas() then ends with the empty clause.
  bool refute() {
    std::vector<Lit> decisions;
    return refute_rec(decisions);
  }

  const std::vector<std::vector<Lit>>& lemmas() const { return lemmas_; }

  uint32_t model_bits() const {
    uint32_t m = 0;
    for (uint32_t v = 1; v <= nv_ && v <= 32; ++v)
      if (val_[v] > 0) m |= 1u << (v - 1);
    return m;
  }

 private:
  int lit_val(Lit l) const {
    int8_t v = val_[l.var()];
    return l.negative() ? -v : v;
  }
  void assign(Lit l) {
    val_[l.var()] = l.negative() ? -1 : 1;
    trail_.push_back(l);
  }

  bool bcp() {  // false on conflict
    for (bool changed = true; changed;) {
      changed = false;
      if (!bcp_list(clauses_, changed)) return false;
      if (!bcp_list(learned_, changed)) return false;
    }
    return true;
  }

  bool bcp_list(const std::vector<std::vector<Lit>>& list, bool& changed) {
    for (const auto& c : list) {
      Lit open;
      int non_false = 0;
      for (Lit l : c) {
        int v = lit_val(l);
        if (v > 0) {
          non_false = 2;
          break;
        }
        if (v == 0) {
          if (++non_false > 1) break;
          open = l;
        }
      }
      if (non_false >= 2) continue;
      if (non_false == 0) return false;
      assign(open);
      changed = true;
    }
    return true;
  }

  Lit pick() const {
    for (uint32_t v = 1; v <= nv_; ++v)
      if (val_[v] == 0) return Lit::from_dimacs(static_cast<int>(v));
    return Lit();
  }

  bool refute_rec(std::vector<Lit>& decisions) {
    for (;;) {
      if (!bcp()) {
        std::vector<Lit> lemma;
        for (Lit d : decisions) lemma.push_back(d.complement());
        lemmas_.push_back(lemma);
        learned_.push_back(std::move(lemma));
        return true;
      }
      Lit d = pick();
      if (!d.valid()) return false;  // model found
      size_t mark = trail_.size();
      decisions.push_back(d);
      assign(d);
      if (!refute_rec(decisions)) return false;
      decisions.pop_back();
      while (trail_.size() > mark) {
        val_[trail_.back().var()] = 0;
        trail_.pop_back();
      }
      // the fresh lemma now propagates the complement of d
    }
  }

  uint32_t nv_ = 0;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<Lit>> learned_;
  std::vector<std::vector<Lit>> lemmas_;
  std::vector<int8_t> val_;
  std::vector<Lit> trail_;
};

}  // namespace

EmitResult emit_proof_dpll(const Formula& f) {
  uint32_t nv = std::max(f.max_var(), f.num_vars);
  if (nv > 24) throw std::invalid_argument("emit_proof_dpll: > 24 vars");
  EmitResult res;
  MiniDpll solver(f, {});
  if (!solver.refute()) {
    res.sat = true;
    res.model = solver.model_bits();
    return res;
  }
  for (const auto& lemma : solver.lemmas()) append_clause_line(res.drat, lemma);
  return res;
}

std::string emit_split_proof(const Formula& f, std::span<const Lit> branch,
                             bool expanded) {
  std::string out;
  uint32_t next_aux = std::max(f.max_var(), f.num_vars);
  for (Lit b : branch) next_aux = std::max(next_aux, b.var());
  ++next_aux;

  std::vector<const Clause*> base;
  for (const Clause& c : f.clauses) base.push_back(&c);

  std::vector<Lit> prefix;
  auto emit_node = [&](auto&& self) -> void {
    // A branch that unit propagation already refutes is no subproblem:
    // close it with the plain path negation and do not descend.
    if (naive_bcp(base, prefix, next_aux - 1).conflict) {
      std::vector<Lit> close;
      for (Lit p : prefix) close.push_back(p.complement());
      append_clause_line(out, close);
      return;
    }
    if (prefix.size() == branch.size()) {
      MiniDpll solver(f, prefix);
      bool refuted = solver.refute();
      assert(refuted);
      (void)refuted;
      if (!expanded) {
        Lit z = Lit::from_dimacs(static_cast<int>(next_aux++));
        std::vector<Lit> def{z};
        for (Lit p : prefix) def.push_back(p.complement());
        append_clause_line(out, def);
        for (Lit p : prefix)
          append_clause_line(out, std::vector<Lit>{z.complement(), p});
        for (const auto& lemma : solver.lemmas()) {
          std::vector<Lit> enc{z.complement()};
          enc.insert(enc.end(), lemma.begin(), lemma.end());
          append_clause_line(out, enc);
        }
      } else {
        for (const auto& lemma : solver.lemmas()) {
          std::vector<Lit> ext(lemma);
          for (Lit p : prefix) ext.push_back(p.complement());
          append_clause_line(out, ext);
        }
      }
      return;
    }
    Lit x = branch[prefix.size()];
    prefix.push_back(x);
    self(self);
    prefix.pop_back();
    prefix.push_back(x.complement());
    self(self);
    prefix.pop_back();
    // interior close: negation of the path; at the root this is empty
    std::vector<Lit> close;
    for (Lit p : prefix) close.push_back(p.complement());
    append_clause_line(out, close);
  };
  emit_node(emit_node);
  return out;
}

size_t literal_count(const std::string& drat) {
  size_t count = 0;
  size_t i = 0;
  const size_t n = drat.size();
  while (i < n) {
    // one line at a time; skip deletes and comments
    size_t eol = drat.find('\n', i);
    if (eol == std::string::npos) eol = n;
    size_t j = i;
    while (j < eol && (drat[j] == ' ' || drat[j] == '\t')) ++j;
    if (j < eol && (drat[j] == 'd' || drat[j] == 'c')) {
      i = eol + 1;
      continue;
    }
    while (j < eol) {
      if (drat[j] == '-' || (drat[j] >= '0' && drat[j] <= '9')) {
        size_t start = j;
        if (drat[j] == '-') ++j;
        while (j < eol && drat[j] >= '0' && drat[j] <= '9') ++j;
        std::string_view tok(drat.data() + start, j - start);
        if (tok != "0") ++count;
      } else {
        ++j;
      }
    }
    i = eol + 1;
  }
  return count;
}

bool permutation_invariance_check(const Formula& f,
                              const std::vector<Clause>& s_verified,
                              uint64_t seed, uint32_t rounds) {
  Formula base = f;
  for (const Clause& c : s_verified) base.clauses.push_back(c);
  std::vector<uint32_t> reference = model_set(base);

  std::mt19937_64 rng(seed);
  std::vector<size_t> order(s_verified.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;

  for (uint32_t r = 0; r < rounds; ++r) {
    std::shuffle(order.begin(), order.end(), rng);

    Formula permuted = f;
    for (size_t k : order) permuted.clauses.push_back(s_verified[k]);
    if (model_set(permuted) != reference) return false;

    std::string drat;
    for (size_t k : order) append_clause_line(drat, s_verified[k].lits);
    ProofDB db = load_proof(make_memory_source(drat));
    VerifyResult res = verify(f, db, Config{});
    if (res.verdict.verified && exhaustive_sat(f).has_value()) return false;
  }
  return true;
}

}  // namespace winrat::testkit
