#ifndef WINRAT_RUP_CHECKER_HPP
#define WINRAT_RUP_CHECKER_HPP

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "winrat/session.hpp"

namespace winrat {

struct RupResult {
  bool verified = false;
  std::vector<uint32_t> used_antecedents;  // inference indices, marked used
};

// BCP(attached context + negation of c). Conflict means c is RUP; the
// antecedent inferences of the conflict get their used flag set. The
// caller is responsible for having exactly its intended context attached.
RupResult check_rup(Session& s, const Clause& c);

// Forward pass promoting every unit inference that is RUP against the live
// formula plus earlier promotions. Returns the number promoted.
uint32_t unit_probe(Session& s);

// Start of the subset segment anchored at unit inference i: scans downward
// collecting units while consecutive unit indices differ by less than
// cfg.span, then backs off span below the smallest collected unit
// (clamped to 0). Indices are 0-based positions in the inference list.
uint32_t select_subset_window(Session& s, uint32_t i);

// Checks the segment [j..i] with a descending worklist seeded at i. Every
// successful element check marks segment antecedents used and adds them to
// the worklist; any failed element aborts the stage. Returns the set T of
// indices drawn in (empty on abort), all verified on success.
std::vector<uint32_t> subset_proof_check(Session& s, uint32_t j, uint32_t i);

struct WindowContext {
  std::vector<uint32_t> attached;  // window members included in the context
  bool conflicted = false;
  Conflict conflict;
};

// Builds the approximate window context for checking inference i: assumes
// the negation of I_i over the formula base, then walks t ascending over
// the window, including I_t when theta is infinite or when at most two of
// its literals are non-falsified, propagating after each inclusion.
// Runs under the caller's save_point; the caller detaches ctx.attached.
WindowContext build_window_context(Session& s, uint32_t i, uint32_t theta,
                                   uint32_t mu);

// Backward pass over used-unverified inferences at the given window width.
// use_prefilter restricts targets to indices past cfg.tail or clauses of
// at most cfg.mu literals. theta = kInfinity checks against the exact
// prefix and is decisive for RUP (a miss there goes on to the RAT stage);
// finite-theta misses are soft.
void window_shift_check(Session& s, uint32_t theta, bool use_prefilter);

// Fills Session::subsumed_from: for every inference, the smallest index of
// a later unit inference whose literal the clause contains. Detaches any
// currently attached clause that the guard (unit earlier than the cursor,
// still live) deactivates. Returns how many clauses are deactivatable.
uint32_t deactivate_subsumed(Session& s);

// Detaches unused binary/ternary inferences beyond cfg.prune_cap (the
// highest-index ones are kept). Pruned clauses drop out of window contexts
// until restore_pruned clears them.
uint32_t prune_small_inferences(Session& s);

// Un-prunes inferences with index in [lo, hi); the failed window check is
// then retried once. Returns how many were restored.
uint32_t restore_pruned(Session& s, uint32_t lo, uint32_t hi);

// Maintains the invariant "exactly the context-eligible inferences below
// the cursor are attached" across a descending scan, re-attaching clauses
// whose deletion or subsumption guard lapses as the cursor passes.
class PrefixCursor {
 public:
  PrefixCursor(Session& s, uint32_t start);
  ~PrefixCursor();
  void descend(uint32_t i);  // i <= current cursor

 private:
  void sync_one(uint32_t t, uint32_t i, uint32_t pos);

  Session& s_;
  uint32_t cursor_;
  uint32_t pos_;
  std::vector<std::pair<uint32_t, uint32_t>> delete_events_;    // (del pos, t)
  std::vector<std::pair<uint32_t, uint32_t>> subsume_events_;   // (k, t)
  std::unordered_map<uint32_t, std::vector<uint32_t>> subsumed_by_unit_;
  size_t delete_cursor_ = 0;
  size_t subsume_cursor_ = 0;
};

}  // namespace winrat

#endif
