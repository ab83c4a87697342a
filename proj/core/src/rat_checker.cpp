#include "winrat/rat_checker.hpp"

#include <algorithm>

namespace winrat {

uint32_t inference_at_step(const ProofDB& db, uint32_t step_pos) {
  auto it = std::lower_bound(
      db.inferences.begin(), db.inferences.end(), step_pos,
      [](const InferenceRecord& r, uint32_t p) { return r.step_pos < p; });
  if (it == db.inferences.end() || it->step_pos != step_pos) return kUnseen;
  return static_cast<uint32_t>(it - db.inferences.begin());
}

OccurrenceIndex build_occurrence_index(Session& s, uint32_t prefix_limit) {
  ++s.stats.occ_builds;
  OccurrenceIndex occ;
  occ.prefix_limit = prefix_limit;
  uint32_t nv = std::max(s.formula.max_var(), s.db.max_var);
  occ.by_key.resize(2 * (nv + 1) + 2);

  for (uint32_t fi = 0; fi < s.formula.clauses.size(); ++fi) {
    const Clause& fc = s.formula.clauses[fi];
    if (is_tautology(fc)) continue;
    for (Lit l : fc) occ.by_key[l.key()].push_back({true, fi});
  }
  for (uint32_t t = 0; t < prefix_limit; ++t) {
    const InferenceRecord& r = s.db.inferences[t];
    if (r.tautology || r.len == 0) continue;
    const Clause& body = s.db.inference_clause(t);
    for (Lit l : body) occ.by_key[l.key()].push_back({false, t});
    s.db.enforce_budget();
  }
  return occ;
}

bool check_rat(Session& s, const OccurrenceIndex& occ, uint32_t prefix_limit,
               const Clause& c, Lit hint) {
  ++s.stats.rat_checks;
  PropagationState& st = s.state;
  ProofDB& db = s.db;
  uint32_t pos = prefix_limit < db.inferences.size()
                     ? db.inferences[prefix_limit].step_pos
                     : s.end_pos;

  // Budget enforcement below may drop the caller's storage for c.
  Clause cl = c;
  if (cl.empty()) return false;

  std::vector<Lit> order(cl.lits.begin(), cl.lits.end());
  auto hit = std::find(order.begin(), order.end(), hint);
  if (hit != order.end()) std::rotate(order.begin(), hit, hit + 1);

  for (Lit l : order) {
    st.save_point();
    s.assume_negation(cl);
    PropagationOutcome out = st.propagate();
    if (out.conflict) {
      // RUP after all; no resolvent scan needed.
      s.mark_used_antecedents(out.at);
      st.rollback();
      return true;
    }

    bool ok = true;
    std::vector<uint32_t> touched;
    for (const OccEntry& e : occ.of(l.complement())) {
      if (e.formula) {
        if (!s.formula_live_at(e.idx, pos)) continue;
      } else {
        if (e.idx >= prefix_limit || !s.inference_live_at(e.idx, pos))
          continue;
      }
      std::vector<Lit> dl;
      if (e.formula) {
        dl = s.formula.clauses[e.idx].lits;
      } else {
        dl = db.inference_clause(e.idx).lits;
        db.enforce_budget();
      }

      ++s.stats.resolvent_checks;
      st.save_point();
      for (Lit d : dl) {
        if (d == l.complement()) continue;
        // A complement already true means the resolvent is tautological or
        // satisfied; assume() records the conflict and the check passes.
        if (!st.assume(d.complement())) break;
      }
      PropagationOutcome r = st.propagate();
      if (r.conflict) {
        for (uint32_t t : st.conflict_antecedents(r.at)) touched.push_back(t);
        if (!e.formula) touched.push_back(e.idx);
      } else {
        ok = false;
      }
      st.rollback();
      if (!ok) break;
    }

    if (ok) {
      s.mark_window_used(0, prefix_limit, pos);
      st.rollback();
      for (uint32_t t : touched) db.inferences[t].used = true;
      return true;
    }
    st.rollback();
  }
  return false;
}

EquivalenceBlock match_equivalence_block(Session& s, uint32_t d,
                                         uint32_t pos) {
  EquivalenceBlock b;
  ProofDB& db = s.db;
  if (d >= s.end_index) return b;
  const InferenceRecord& rd = db.inferences[d];
  if (rd.len < 2 || rd.tautology) return b;

  Lit z = rd.pivot_hint;
  if (!z.valid() || z.negative()) return b;
  // Freshness: the pivot variable is beyond the formula and first appears
  // at the definition itself.
  if (z.var() <= s.formula.max_var()) return b;
  if (z.var() >= db.first_seen_step.size() ||
      db.first_seen_step[z.var()] != rd.step_pos)
    return b;
  // A definition deleted before the queried position no longer matches.
  if (rd.delete_step <= pos) return b;

  uint32_t n = rd.len - 1;
  if (n == 0 || d + n >= s.end_index) return b;
  for (uint32_t k = 1; k <= n; ++k) {
    const InferenceRecord& ru = db.inferences[d + k];
    if (ru.len != 2 || ru.tautology) return b;
    const Clause& u = db.inference_clause(d + k);
    bool has_pivot =
        u.lits[0] == z.complement() || u.lits[1] == z.complement();
    db.enforce_budget();
    if (!has_pivot) return b;
  }

  b.definition = d;
  b.n = n;
  b.pivot = z;
  b.valid = true;
  return b;
}

bool verify_equivalence_block(Session& s, const EquivalenceBlock& b) {
  if (!b.valid) return false;
  ProofDB& db = s.db;
  Clause def = db.inference_clause(b.definition);
  for (uint32_t k = 1; k <= b.n; ++k) {
    const Clause& u = db.inference_clause(b.definition + k);
    Lit x = u.lits[0] == b.pivot.complement() ? u.lits[1] : u.lits[0];
    bool contained = std::binary_search(def.lits.begin(), def.lits.end(),
                                        x.complement());
    db.enforce_budget();
    if (!contained) return false;
  }
  for (uint32_t k = 0; k <= b.n; ++k)
    db.inferences[b.definition + k].verified = true;
  ++s.stats.fastpath_blocks;
  return true;
}

}  // namespace winrat
