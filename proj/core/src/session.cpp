#include "winrat/session.hpp"

#include <algorithm>
#include <stdexcept>

namespace winrat {

void validate(const Config& cfg) {
  if (cfg.theta < 1) throw std::invalid_argument("theta must be >= 1");
  if (cfg.mu < 1) throw std::invalid_argument("mu must be >= 1");
  if (cfg.span < 1) throw std::invalid_argument("span must be >= 1");
}

Session::Session(const Formula& f, ProofDB& db_, const Config& cfg_,
                 std::vector<uint32_t> formula_deletes)
    : formula(f), db(db_), cfg(cfg_) {
  validate(cfg);
  state.ensure_var(std::max(f.max_var(), db.max_var));

  formula_delete_step = std::move(formula_deletes);
  formula_delete_step.resize(f.clauses.size(), kNeverDeleted);
  has_formula_deletes_ =
      std::any_of(formula_delete_step.begin(), formula_delete_step.end(),
                  [](uint32_t d) { return d != kNeverDeleted; });

  formula_cref.assign(f.clauses.size(), kNullRef);
  for (uint32_t fi = 0; fi < f.clauses.size(); ++fi) {
    if (!is_tautology(f.clauses[fi]))
      formula_cref[fi] =
          state.add_clause(f.clauses[fi], ClauseOrigin::kFormula, fi);
  }

  inference_cref.assign(db.inferences.size(), kNullRef);
  subsumed_from.assign(db.inferences.size(), kUnseen);

  if (db.empty_at) {
    end_index = *db.empty_at;
    end_pos = db.inferences[end_index].step_pos;
  }
}

void Session::set_formula_position(uint32_t pos) {
  if (formula_pos_ == pos) return;
  if (!has_formula_deletes_ && formula_pos_ != kNeverDeleted) {
    formula_pos_ = pos;
    return;
  }
  for (uint32_t fi = 0; fi < formula.clauses.size(); ++fi) {
    ClauseRef cr = formula_cref[fi];
    if (cr == kNullRef) continue;  // tautology, never attached
    bool want = formula_live_at(fi, pos);
    bool have = state.attached(cr);
    if (want && !have)
      state.attach(cr);
    else if (!want && have)
      state.detach(cr);
  }
  formula_pos_ = pos;
}

void Session::attach_inference(uint32_t i) {
  if (inference_cref[i] != kNullRef) return;  // already attached or promoted
  const Clause& body = db.inference_clause(i);
  inference_cref[i] = state.add_clause(body, ClauseOrigin::kInference, i);
  state.attach(inference_cref[i]);
  db.mark_active(i, true);
}

void Session::detach_inference(uint32_t i) {
  if (inference_cref[i] == kNullRef) return;
  if (db.inferences[i].promoted) return;  // promoted clauses stay
  state.detach(inference_cref[i]);
  state.release_clause(inference_cref[i]);
  inference_cref[i] = kNullRef;
  db.mark_active(i, false);
}

void Session::promote_inference(uint32_t i) {
  db.inferences[i].promoted = true;
  attach_inference(i);
}

std::vector<uint32_t> Session::mark_used_antecedents(const Conflict& c) {
  std::vector<uint32_t> ante = state.conflict_antecedents(c);
  for (uint32_t i : ante) db.inferences[i].used = true;
  return ante;
}

void Session::assume_negation(const Clause& c) {
  for (Lit l : c.lits) state.assume(l.complement());
}

void Session::mark_window_used(uint32_t lo, uint32_t hi, uint32_t pos) {
  for (uint32_t t = lo; t < hi; ++t) {
    InferenceRecord& r = db.inferences[t];
    if (r.used || r.tautology || r.len == 0) continue;
    if (!inference_live_at(t, pos)) continue;
    const Clause& body = db.inference_clause(t);
    if (state.count_non_falsified(body.lits, 2) <= 1) r.used = true;
    db.enforce_budget();
  }
}

bool Session::context_eligible(uint32_t t, uint32_t i, uint32_t pos) const {
  const InferenceRecord& r = db.inferences[t];
  if (r.len == 0 || r.tautology || r.promoted) return false;
  if (!inference_live_at(t, pos)) return false;
  if (t < pruned.size() && pruned[t]) return false;
  uint32_t k = subsumed_from[t];
  if (k != kUnseen && k < i && inference_live_at(k, pos)) return false;
  return true;
}

}  // namespace winrat
