#include "winrat/rup_checker.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace winrat {

RupResult check_rup(Session& s, const Clause& c) {
  ++s.stats.rup_checks;
  PropagationState& st = s.state;
  st.save_point();
  s.assume_negation(c);
  PropagationOutcome out = st.propagate();
  RupResult res;
  if (out.conflict) {
    res.verified = true;
    res.used_antecedents = s.mark_used_antecedents(out.at);
  }
  st.rollback();
  return res;
}

uint32_t unit_probe(Session& s) {
  uint32_t promoted = 0;
  for (uint32_t i = 0; i < s.end_index; ++i) {
    InferenceRecord& r = s.db.inferences[i];
    if (r.len != 1 || r.verified) continue;
    s.set_formula_position(r.step_pos);
    if (check_rup(s, s.db.inference_clause(i)).verified) {
      r.verified = true;
      s.promote_inference(i);
      ++promoted;
    }
    s.db.enforce_budget();
  }
  s.stats.probe_promotions += promoted;
  return promoted;
}

uint32_t select_subset_window(Session& s, uint32_t i) {
  uint32_t k = i;
  uint32_t prev_unit = i;
  for (uint32_t t = i; t-- > 0;) {
    if (prev_unit - t >= s.cfg.span) break;
    if (s.db.inferences[t].len == 1) prev_unit = k = t;
  }
  return k > s.cfg.span ? k - s.cfg.span : 0;
}

std::vector<uint32_t> subset_proof_check(Session& s, uint32_t j, uint32_t i) {
  ++s.stats.subset_segments;
  ProofDB& db = s.db;
  PropagationState& st = s.state;

  std::vector<uint32_t> T = {i};
  std::vector<uint8_t> in_T(i - j + 1, 0);
  in_T[i - j] = 1;
  std::priority_queue<uint32_t> work;
  work.push(i);
  bool ok = true;

  while (!work.empty()) {
    uint32_t c = work.top();
    work.pop();
    InferenceRecord& rc = db.inferences[c];
    if (rc.verified) continue;
    uint32_t pos = rc.step_pos;
    s.set_formula_position(pos);

    // Context for this element: formula plus the live segment below it.
    for (uint32_t t = j; t < i; ++t) {
      if (t < c && s.context_eligible(t, c, pos))
        s.attach_inference(t);
      else
        s.detach_inference(t);
    }

    const Clause& body = db.inference_clause(c);
    ++s.stats.rup_checks;
    st.save_point();
    s.assume_negation(body);
    PropagationOutcome out = st.propagate();
    if (!out.conflict) {
      st.rollback();
      ok = false;
      break;
    }
    s.mark_used_antecedents(out.at);
    // Segment inferences that ended up unit or conflicting join T,
    // including ones above the cursor (the descending queue sweeps them
    // later). They keep their used flag even if the stage aborts, so a
    // later stage must still verify them.
    for (uint32_t t = j; t < i; ++t) {
      if (t == c) continue;
      InferenceRecord& rt = db.inferences[t];
      if (rt.tautology || rt.len == 0 || rt.delete_step <= pos) continue;
      const Clause& tb = db.inference_clause(t);
      if (st.count_non_falsified(tb.lits, 2) <= 1) {
        rt.used = true;
        if (!in_T[t - j]) {
          in_T[t - j] = 1;
          T.push_back(t);
          work.push(t);
        }
      }
    }
    st.rollback();
    rc.verified = true;
  }

  for (uint32_t t = j; t < i; ++t) s.detach_inference(t);
  db.enforce_budget();
  if (!ok) return {};
  std::sort(T.begin(), T.end());
  return T;
}

WindowContext build_window_context(Session& s, uint32_t i, uint32_t theta,
                                   uint32_t mu) {
  WindowContext ctx;
  PropagationState& st = s.state;
  ProofDB& db = s.db;
  uint32_t pos = db.inferences[i].step_pos;
  if (theta == kInfinity) mu = kInfinity;
  uint32_t lo = (theta == kInfinity || i < theta) ? 0 : i - theta + 1;

  s.assume_negation(db.inference_clause(i));
  PropagationOutcome out = st.propagate();
  if (out.conflict) {
    ctx.conflicted = true;
    ctx.conflict = out.at;
    return ctx;
  }

  for (uint32_t t = lo; t < i; ++t) {
    const InferenceRecord& rt = db.inferences[t];
    if (rt.len > mu) continue;
    if (!s.context_eligible(t, i, pos)) continue;
    if (s.inference_attached(t)) continue;
    if (theta != kInfinity) {
      const Clause& tb = db.inference_clause(t);
      bool include = st.count_non_falsified(tb.lits, 3) <= 2;
      if (!include) {
        db.enforce_budget();
        continue;
      }
    }
    size_t before = st.trail_size();
    s.attach_inference(t);
    ctx.attached.push_back(t);
    if (st.trail_size() != before || st.has_pending_conflict()) {
      out = st.propagate();
      if (out.conflict) {
        ctx.conflicted = true;
        ctx.conflict = out.at;
        return ctx;
      }
    }
  }
  return ctx;
}

namespace {

// Conflict audit: after a conflict in a backward check,
// extend propagation to a quasi-fixpoint (ignoring further conflicts) and
// expect at least one live original-formula clause to be fully falsified.
void audit_conflict_support(Session& s, uint32_t i, uint32_t pos) {
  ++s.stats.conflict_audits;
  uint32_t nv = std::max(s.formula.max_var(), s.db.max_var);
  if (nv > 24) return;

  std::vector<int8_t> val(nv + 1, 0);
  for (Lit l : s.state.trail()) val[l.var()] = l.negative() ? -1 : 1;
  auto lit_val = [&val](Lit l) {
    int8_t v = val[l.var()];
    return l.negative() ? -v : v;
  };

  std::vector<const Clause*> context;
  for (uint32_t fi = 0; fi < s.formula.clauses.size(); ++fi)
    if (s.formula_live_at(fi, pos) && !is_tautology(s.formula.clauses[fi]))
      context.push_back(&s.formula.clauses[fi]);
  size_t formula_end = context.size();
  for (uint32_t t = 0; t < i; ++t)
    if (s.inference_live_at(t, pos) && !s.db.inferences[t].tautology)
      context.push_back(&s.db.inference_clause(t));

  for (bool changed = true; changed;) {
    changed = false;
    for (const Clause* c : context) {
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
      if (non_false == 1) {
        val[open.var()] = open.negative() ? -1 : 1;
        changed = true;
      }
    }
  }

  for (size_t fi = 0; fi < formula_end; ++fi) {
    bool all_false = true;
    for (Lit l : *context[fi])
      if (lit_val(l) >= 0) {
        all_false = false;
        break;
      }
    if (all_false) return;
  }
  ++s.stats.conflict_audit_failures;
}

}  // namespace

void window_shift_check(Session& s, uint32_t theta, bool use_prefilter) {
  ProofDB& db = s.db;
  PropagationState& st = s.state;

  if (theta == kInfinity) {
    PrefixCursor cursor(s, s.end_index);
    for (uint32_t i = s.end_index + 1; i-- > 0;) {
      InferenceRecord& r = db.inferences[i];
      if (!r.used || r.verified || r.tautology) continue;
      cursor.descend(i);
      s.set_formula_position(r.step_pos);
      ++s.stats.rup_checks;
      st.save_point();
      s.assume_negation(db.inference_clause(i));
      PropagationOutcome out = st.propagate();
      if (out.conflict) {
        s.mark_used_antecedents(out.at);
        s.mark_window_used(0, i, r.step_pos);
        if (s.cfg.audit_conflicts) audit_conflict_support(s, i, r.step_pos);
        r.verified = true;
      }
      st.rollback();
      db.enforce_budget();
    }
    return;
  }

  for (uint32_t i = s.end_index + 1; i-- > 0;) {
    InferenceRecord& r = db.inferences[i];
    if (!r.used || r.verified || r.tautology) continue;
    if (use_prefilter && !(i >= s.cfg.tail || r.len <= s.cfg.mu)) continue;
    uint32_t lo = (i < theta) ? 0 : i - theta + 1;
    s.set_formula_position(r.step_pos);

    bool retried = false;
    for (;;) {
      ++s.stats.rup_checks;
      st.save_point();
      WindowContext ctx = build_window_context(s, i, theta, s.cfg.mu);
      if (ctx.conflicted) {
        s.mark_used_antecedents(ctx.conflict);
        s.mark_window_used(lo, i, r.step_pos);
        // The probe extends over the full live prefix, so a window conflict
        // supports the same falsified-clause claim as an exact one.
        if (s.cfg.audit_conflicts) audit_conflict_support(s, i, r.step_pos);
        r.verified = true;
        st.rollback();
        for (uint32_t t : ctx.attached) s.detach_inference(t);
        break;
      }
      st.rollback();
      for (uint32_t t : ctx.attached) s.detach_inference(t);
      ++s.stats.window_misses;
      // A miss with pruning in force gets one retry on a restored window.
      if (!retried && !s.pruned.empty() && restore_pruned(s, lo, i) > 0) {
        retried = true;
        ++s.stats.window_retries;
        continue;
      }
      break;
    }
    db.enforce_budget();
  }
}

uint32_t deactivate_subsumed(Session& s) {
  ProofDB& db = s.db;
  std::vector<std::vector<uint32_t>> units_by_key(2 * (db.max_var + 1) + 2);
  for (uint32_t k = 0; k < s.end_index; ++k) {
    const InferenceRecord& r = db.inferences[k];
    if (r.len == 1) units_by_key[r.pivot_hint.key()].push_back(k);
  }

  uint32_t count = 0;
  for (uint32_t j = 0; j < s.end_index; ++j) {
    InferenceRecord& r = db.inferences[j];
    if (r.len == 0 || r.tautology) continue;
    uint32_t best = kUnseen;
    if (r.len == 1) {
      const auto& v = units_by_key[r.pivot_hint.key()];
      auto it = std::upper_bound(v.begin(), v.end(), j);
      if (it != v.end()) best = *it;
    } else {
      const Clause& body = db.inference_clause(j);
      for (Lit l : body.lits) {
        const auto& v = units_by_key[l.key()];
        auto it = std::upper_bound(v.begin(), v.end(), j);
        if (it != v.end()) best = std::min(best, *it);
      }
      db.enforce_budget();
    }
    s.subsumed_from[j] = best;
    if (best == kUnseen) continue;
    ++count;
    // Anything already attached whose guard holds at the end of the proof
    // comes off the watches now.
    if (!db.inferences[j].promoted && s.inference_attached(j) &&
        best < s.end_index && s.inference_live_at(best, s.end_pos))
      s.detach_inference(j);
  }
  s.stats.deactivated += count;
  return count;
}

uint32_t prune_small_inferences(Session& s) {
  ProofDB& db = s.db;
  if (s.cfg.prune_cap == kInfinity) return 0;
  s.pruned.assign(db.inferences.size(), 0);
  uint32_t kept = 0, count = 0;
  for (uint32_t t = s.end_index; t-- > 0;) {
    const InferenceRecord& r = db.inferences[t];
    if (r.len < 2 || r.len > 3 || r.used || r.promoted || r.tautology)
      continue;
    if (kept < s.cfg.prune_cap) {
      ++kept;
      continue;
    }
    s.pruned[t] = 1;
    if (s.inference_attached(t)) s.detach_inference(t);
    ++count;
  }
  s.stats.pruned += count;
  return count;
}

uint32_t restore_pruned(Session& s, uint32_t lo, uint32_t hi) {
  uint32_t n = 0;
  hi = std::min<uint32_t>(hi, static_cast<uint32_t>(s.pruned.size()));
  for (uint32_t t = lo; t < hi; ++t) {
    if (s.pruned[t]) {
      s.pruned[t] = 0;
      ++n;
    }
  }
  s.stats.restored += n;
  return n;
}

PrefixCursor::PrefixCursor(Session& s, uint32_t start) : s_(s), cursor_(start) {
  ProofDB& db = s.db;
  pos_ = (start < db.inferences.size()) ? db.inferences[start].step_pos
                                        : s.end_pos;
  for (uint32_t t = 0; t < start; ++t) {
    if (s.context_eligible(t, start, pos_) && !s.inference_attached(t))
      s.attach_inference(t);
    db.enforce_budget();
  }

  for (uint32_t t = 0; t < s.end_index; ++t) {
    uint32_t d = db.inferences[t].delete_step;
    if (d != kNeverDeleted) delete_events_.push_back({d, t});
    uint32_t k = s.subsumed_from[t];
    if (k != kUnseen && k < start) subsume_events_.push_back({k, t});
  }
  auto desc = [](const auto& a, const auto& b) { return a.first > b.first; };
  std::sort(delete_events_.begin(), delete_events_.end(), desc);
  std::sort(subsume_events_.begin(), subsume_events_.end(), desc);
  while (delete_cursor_ < delete_events_.size() &&
         delete_events_[delete_cursor_].first > pos_)
    ++delete_cursor_;

  // Reverse map: unit index -> clauses it subsumes, for guard re-evaluation
  // when a deletion event hits the unit itself.
  for (uint32_t t = 0; t < s.end_index; ++t) {
    uint32_t k = s.subsumed_from[t];
    if (k != kUnseen) subsumed_by_unit_[k].push_back(t);
  }
}

void PrefixCursor::sync_one(uint32_t t, uint32_t i, uint32_t pos) {
  bool want = t < i && s_.context_eligible(t, i, pos);
  bool have = s_.inference_attached(t);
  if (want && !have)
    s_.attach_inference(t);
  else if (!want && have && !s_.db.inferences[t].promoted)
    s_.detach_inference(t);
}

void PrefixCursor::descend(uint32_t i) {
  for (uint32_t t = i; t < cursor_; ++t) s_.detach_inference(t);
  uint32_t new_pos = s_.db.inferences[i].step_pos;

  while (delete_cursor_ < delete_events_.size() &&
         delete_events_[delete_cursor_].first > new_pos) {
    uint32_t t = delete_events_[delete_cursor_].second;
    sync_one(t, i, new_pos);
    auto it = subsumed_by_unit_.find(t);
    if (it != subsumed_by_unit_.end())
      for (uint32_t dep : it->second) sync_one(dep, i, new_pos);
    ++delete_cursor_;
  }
  while (subsume_cursor_ < subsume_events_.size() &&
         subsume_events_[subsume_cursor_].first >= i) {
    sync_one(subsume_events_[subsume_cursor_].second, i, new_pos);
    ++subsume_cursor_;
  }
  cursor_ = i;
  pos_ = new_pos;
  s_.db.enforce_budget();
}

PrefixCursor::~PrefixCursor() {
  for (uint32_t t = 0; t < cursor_; ++t) s_.detach_inference(t);
  s_.db.enforce_budget();
}

}  // namespace winrat
