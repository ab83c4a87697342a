#ifndef WINRAT_SESSION_HPP
#define WINRAT_SESSION_HPP

#include <cstdint>
#include <vector>

#include "winrat/clause.hpp"
#include "winrat/config.hpp"
#include "winrat/proof_io.hpp"
#include "winrat/propagation.hpp"

namespace winrat {

struct Stats {
  uint64_t rup_checks = 0;
  uint64_t rat_checks = 0;
  uint64_t resolvent_checks = 0;
  uint64_t fastpath_blocks = 0;
  uint64_t window_misses = 0;
  uint64_t window_retries = 0;
  uint64_t propagations = 0;
  uint64_t evictions = 0;
  uint64_t reloads = 0;
  uint64_t occ_builds = 0;
  uint64_t probe_promotions = 0;
  uint64_t subset_segments = 0;
  uint64_t subset_promotions = 0;
  uint64_t deactivated = 0;
  uint64_t pruned = 0;
  uint64_t restored = 0;
  uint64_t conflict_audits = 0;
  uint64_t conflict_audit_failures = 0;
  double t_probe = 0, t_subset = 0, t_seed = 0, t_window = 0, t_exact = 0,
         t_fastpath = 0, t_rat = 0;
};

// Mutable state shared by the checking stages: the propagation engine, the
// attachment map between proof records and arena clauses, and the static
// liveness intervals that deletion steps induce.
//
// Discipline: every check runs between save_point() and rollback() starting
// from the empty trail, so attach/detach of context clauses only happens
// with no assignment in force (window building attaches under its own save).
class Session {
 public:
  // formula_deletes comes from resolve_deletions; empty means nothing in
  // the formula is ever deleted.
  Session(const Formula& f, ProofDB& db, const Config& cfg,
          std::vector<uint32_t> formula_deletes = {});

  const Formula& formula;
  ProofDB& db;
  Config cfg;
  Stats stats;
  PropagationState state;

  uint32_t end_index = 0;  // index of the empty clause, checks stop there
  uint32_t end_pos = 0;    // its step position

  // Static liveness: clause sets are a pure function of the step position.
  std::vector<uint32_t> formula_delete_step;
  bool formula_live_at(uint32_t fidx, uint32_t pos) const {
    return formula_delete_step[fidx] > pos;
  }
  bool inference_live_at(uint32_t i, uint32_t pos) const {
    const InferenceRecord& r = db.inferences[i];
    return r.step_pos < pos && r.delete_step > pos;
  }

  // Attaches exactly the live, non-tautological formula clauses for a check
  // at step position pos. Cheap when the proof deletes no formula clauses.
  void set_formula_position(uint32_t pos);

  void attach_inference(uint32_t i);
  void detach_inference(uint32_t i);
  bool inference_attached(uint32_t i) const {
    return inference_cref[i] != kNullRef &&
           state.attached(inference_cref[i]);
  }

  // Attach for every remaining position; the record never detaches or
  // evicts again. Promotion is what unit_probe and the subset stage do.
  void promote_inference(uint32_t i);

  // Sets used flags on the conflict's inference antecedents, returns them.
  std::vector<uint32_t> mark_used_antecedents(const Conflict& c);

  // Assumes the complement of every literal of c.
  void assume_negation(const Clause& c);

  // used-marking sweep after a successful check: every live inference in
  // [lo, hi) that is unit or conflicting on the current trail gets used.
  void mark_window_used(uint32_t lo, uint32_t hi, uint32_t pos);

  // Context-eligibility for backward passes; checks liveness, tautology,
  // pruning and the unit-subsumption guard at cursor i / position pos.
  bool context_eligible(uint32_t t, uint32_t i, uint32_t pos) const;

  std::vector<ClauseRef> formula_cref;
  std::vector<ClauseRef> inference_cref;

  // Unit-subsumption: smallest later unit-inference index whose literal
  // occurs in this clause (kUnseen when none). Filled by deactivate_subsumed.
  std::vector<uint32_t> subsumed_from;
  std::vector<uint8_t> pruned;

  void sync_propagation_count() { stats.propagations = state.propagations(); }

 private:
  uint32_t formula_pos_ = kNeverDeleted;  // position currently attached for
  bool has_formula_deletes_ = false;
};

}  // namespace winrat

#endif
