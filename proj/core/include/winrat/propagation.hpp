#ifndef WINRAT_PROPAGATION_HPP
#define WINRAT_PROPAGATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "winrat/clause.hpp"

namespace winrat {

using ClauseRef = int32_t;
constexpr ClauseRef kNullRef = -1;

enum class ClauseOrigin : uint8_t { kFormula, kInference };

// Where a conflict came from: a falsified clause, or an assumption whose
// complement was already assigned (no clause involved).
struct Conflict {
  ClauseRef cref = kNullRef;
  Lit failed_assume;
  bool from_clause() const { return cref != kNullRef; }
};

struct PropagationOutcome {
  bool conflict = false;
  Conflict at;
};

// Two-watched-literal unit propagation over an explicit clause arena.
//
// Unit clauses are never watched: they sit on a unit list that every
// propagate() call replays, so a rollback to the empty trail followed by
// another propagate() re-derives them. Propagation stops at the first
// conflict; queued-but-unprocessed literals keep their trail entries.
class PropagationState {
 public:
  void ensure_var(uint32_t var);

  // Arena. add_clause registers a body without attaching it. The stored
  // literal order is free to change during propagation (watch repair), so
  // callers needing canonical content keep their own copy.
  ClauseRef add_clause(const Clause& c, ClauseOrigin origin, uint32_t index);
  void release_clause(ClauseRef cr);
  std::span<const Lit> clause_lits(ClauseRef cr) const;
  ClauseOrigin origin(ClauseRef cr) const { return meta_[cr].origin; }
  uint32_t origin_index(ClauseRef cr) const { return meta_[cr].index; }

  // Attach may run under a partial assignment (window building): a clause
  // unit here enqueues its literal, a falsified one records a pending
  // conflict that the next propagate() reports.
  void attach(ClauseRef cr);
  void detach(ClauseRef cr);
  bool attached(ClauseRef cr) const { return meta_[cr].attached; }

  // Pushes an assumption (no reason). Returns false and records a conflict
  // when the complement already holds; re-assuming a held literal is a no-op.
  bool assume(Lit l);

  PropagationOutcome propagate();

  // Sole non-falsified literal of c when exactly len-1 literals are
  // falsified on the trail; nullopt when fewer are falsified or when the
  // clause is fully falsified (a conflict clause, not a unit).
  std::optional<Lit> is_unit_in_bcp(const Clause& c) const;

  // Number of literals of `lits` not currently falsified, counting at most
  // `cap` before giving up (callers only distinguish 0, 1, >=2).
  int count_non_falsified(std::span<const Lit> lits, int cap) const;

  // Inference indices reachable backward from the conflict through trail
  // reasons; includes the conflict clause itself when it is an inference.
  std::vector<uint32_t> conflict_antecedents(const Conflict& c) const;

  void save_point();
  void rollback();
  size_t save_depth() const { return saves_.size(); }

  size_t trail_size() const { return trail_.size(); }
  std::span<const Lit> trail() const { return trail_; }

  // +1 true, -1 false, 0 unassigned.
  int value(Lit l) const {
    int8_t v = assign_[l.var()];
    return l.negative() ? -v : v;
  }

  bool has_pending_conflict() const { return conflict_set_; }

  uint64_t propagations() const { return propagations_; }

  // Introspection for structural tests.
  size_t watch_entry_count() const {
    size_t n = 0;
    for (const auto& w : watches_) n += w.size();
    return n;
  }
  size_t unit_list_size() const { return unit_list_.size(); }
  size_t live_clause_count() const {
    size_t n = 0;
    for (const auto& m : meta_) n += m.live;
    return n;
  }

 private:
  struct Meta {
    ClauseOrigin origin;
    bool attached = false;
    bool live = false;
    uint32_t index = 0;
  };
  struct Watch {
    ClauseRef cref;
    Lit blocker;
  };

  void enqueue(Lit l, ClauseRef reason);
  void set_conflict(const Conflict& c);
  std::vector<Watch>& watches(Lit l) { return watches_[l.key()]; }

  std::vector<std::vector<Lit>> lits_;
  std::vector<Meta> meta_;
  std::vector<ClauseRef> free_;

  std::vector<std::vector<Watch>> watches_;  // indexed by literal key
  std::vector<ClauseRef> unit_list_;

  std::vector<int8_t> assign_;     // by var
  std::vector<ClauseRef> reason_;  // by var
  std::vector<Lit> trail_;
  size_t queue_head_ = 0;
  std::vector<size_t> saves_;

  bool conflict_set_ = false;
  Conflict conflict_;
  uint64_t propagations_ = 0;
};

}  // namespace winrat

#endif
