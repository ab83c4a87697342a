#include "winrat/driver.hpp"

#include <algorithm>
#include <chrono>

namespace winrat {

namespace {

class StageTimer {
 public:
  explicit StageTimer(double& acc)
      : acc_(acc), t0_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    acc_ += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0_)
                .count();
  }

 private:
  double& acc_;
  std::chrono::steady_clock::time_point t0_;
};

void run_probe(Session& s) {
  StageTimer t(s.stats.t_probe);
  unit_probe(s);
}

void run_subset(Session& s) {
  StageTimer timer(s.stats.t_subset);
  ProofDB& db = s.db;
  uint32_t i = s.end_index;
  while (i-- > 0) {
    const InferenceRecord& r = db.inferences[i];
    if (r.len != 1 || r.verified) continue;
    uint32_t j = select_subset_window(s, i);
    std::vector<uint32_t> T = subset_proof_check(s, j, i);
    if (T.empty()) continue;  // abort: move to the next anchor below
    for (uint32_t t : T) {
      InferenceRecord& rt = db.inferences[t];
      if (rt.len <= s.cfg.add_max && !rt.promoted) {
        s.promote_inference(t);
        ++s.stats.subset_promotions;
      }
    }
    if (j == 0) break;
    i = j;  // resume scanning below the segment
  }
}

void run_window_stages(Session& s) {
  if (s.cfg.window && s.cfg.theta != kInfinity) {
    StageTimer t(s.stats.t_window);
    if (s.cfg.prune) prune_small_inferences(s);
    window_shift_check(s, s.cfg.theta, true);
  }
  s.pruned.clear();  // pruning is scoped to the finite pass
  {
    StageTimer t(s.stats.t_exact);
    window_shift_check(s, kInfinity, false);
  }
}

void run_rat_stage(Session& s) {
  ProofDB& db = s.db;
  bool any = false;
  for (uint32_t t = 0; t <= s.end_index && !any; ++t)
    any = db.inferences[t].used && !db.inferences[t].verified;
  if (!any) return;

  StageTimer timer(s.stats.t_rat);
  std::optional<OccurrenceIndex> occ;
  PrefixCursor cursor(s, s.end_index);
  for (uint32_t i = s.end_index + 1; i-- > 0;) {
    InferenceRecord& r = db.inferences[i];
    if (!r.used || r.verified || r.tautology) continue;
    cursor.descend(std::min(i, s.end_index));
    s.set_formula_position(r.step_pos);

    if (s.cfg.fastpath && r.pivot_hint.valid()) {
      StageTimer ft(s.stats.t_fastpath);
      uint32_t v = r.pivot_hint.var();
      uint32_t fs =
          v < db.first_seen_step.size() ? db.first_seen_step[v] : kUnseen;
      uint32_t d = fs == kUnseen ? kUnseen : inference_at_step(db, fs);
      if (d != kUnseen && d <= i) {
        EquivalenceBlock blk = match_equivalence_block(s, d, r.step_pos);
        if (blk.valid && i <= blk.definition + blk.n &&
            verify_equivalence_block(s, blk))
          continue;
      }
    }

    if (!occ) occ = build_occurrence_index(s, s.end_index);
    if (check_rat(s, *occ, i, db.inference_clause(i), r.pivot_hint))
      r.verified = true;
    db.enforce_budget();
  }
}

Verdict final_verdict(Session& s) {
  Verdict v;
  for (uint32_t t = 0; t <= s.end_index; ++t) {
    const InferenceRecord& r = s.db.inferences[t];
    if (r.used && !r.verified) {
      v.verified = false;
      v.reason = Verdict::Reason::kInferenceFailed;
      v.failing_index = t;
      return v;
    }
  }
  v.verified = true;
  return v;
}

void snapshot_flags(const ProofDB& db, VerifyResult& res) {
  res.verified_flags.resize(db.inferences.size());
  res.used_flags.resize(db.inferences.size());
  for (size_t t = 0; t < db.inferences.size(); ++t) {
    res.verified_flags[t] = db.inferences[t].verified;
    res.used_flags[t] = db.inferences[t].used;
  }
}

}  // namespace

std::optional<uint32_t> locate_empty_clause(const ProofDB& db) {
  return db.empty_at;
}

bool seed_used_flags(Session& s) {
  // Position just past the final step: the empty clause itself is live.
  uint32_t pos = s.end_pos + 1;
  s.set_formula_position(pos);
  for (uint32_t t = 0; t <= s.end_index; ++t) {
    const InferenceRecord& r = s.db.inferences[t];
    if (r.tautology || !s.inference_live_at(t, pos)) continue;
    s.attach_inference(t);
  }

  s.state.save_point();
  PropagationOutcome out = s.state.propagate();
  bool ok = out.conflict;
  if (ok) {
    s.mark_used_antecedents(out.at);
    s.db.inferences[s.end_index].used = true;
  }
  s.state.rollback();

  for (uint32_t t = 0; t <= s.end_index; ++t) s.detach_inference(t);
  s.db.enforce_budget();
  return ok;
}

VerifyResult verify(const Formula& f, ProofDB& db, const Config& cfg) {
  validate(cfg);
  VerifyResult res;

  if (!db.empty_at) {
    res.verdict.verified = false;
    res.verdict.reason = Verdict::Reason::kNoEmptyClause;
    snapshot_flags(db, res);
    return res;
  }

  uint32_t end_pos = db.inferences[*db.empty_at].step_pos;
  DeletionResolution dr = resolve_deletions(db, f, end_pos);
  res.deletes_matched = dr.matched;
  res.deletes_unmatched = dr.unmatched;

  Session s(f, db, cfg, std::move(dr.formula_delete_step));
  for (uint32_t t = 0; t <= s.end_index; ++t)
    if (db.inferences[t].tautology) db.inferences[t].verified = true;

  if (cfg.probe) run_probe(s);
  if (cfg.subset) run_subset(s);

  bool seeded;
  {
    StageTimer t(s.stats.t_seed);
    seeded = seed_used_flags(s);
  }
  if (!seeded) {
    res.verdict.verified = false;
    res.verdict.reason = Verdict::Reason::kNoGlobalConflict;
    s.sync_propagation_count();
    res.stats = s.stats;
    res.stats.evictions = db.evictions;
    res.stats.reloads = db.reloads;
    snapshot_flags(db, res);
    return res;
  }

  if (cfg.deactivate) deactivate_subsumed(s);
  run_window_stages(s);
  run_rat_stage(s);

  res.verdict = final_verdict(s);
  s.sync_propagation_count();
  res.stats = s.stats;
  res.stats.evictions = db.evictions;
  res.stats.reloads = db.reloads;
  snapshot_flags(db, res);
  return res;
}

}  // namespace winrat
