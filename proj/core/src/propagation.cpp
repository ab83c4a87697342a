#include "winrat/propagation.hpp"

#include <algorithm>
#include <stdexcept>

namespace winrat {

void PropagationState::ensure_var(uint32_t var) {
  if (assign_.size() <= var) {
    assign_.resize(var + 1, 0);
    reason_.resize(var + 1, kNullRef);
  }
  if (watches_.size() <= 2 * var + 1) watches_.resize(2 * var + 2);
}

ClauseRef PropagationState::add_clause(const Clause& c, ClauseOrigin origin,
                                       uint32_t index) {
  ClauseRef cr;
  if (!free_.empty()) {
    cr = free_.back();
    free_.pop_back();
    lits_[cr] = c.lits;
    meta_[cr] = Meta{origin, false, true, index};
  } else {
    cr = static_cast<ClauseRef>(lits_.size());
    lits_.push_back(c.lits);
    meta_.push_back(Meta{origin, false, true, index});
  }
  for (Lit l : c.lits) ensure_var(l.var());
  return cr;
}

void PropagationState::release_clause(ClauseRef cr) {
  if (meta_[cr].attached)
    throw std::logic_error("release of an attached clause");
  meta_[cr].live = false;
  lits_[cr].clear();
  lits_[cr].shrink_to_fit();
  free_.push_back(cr);
}

std::span<const Lit> PropagationState::clause_lits(ClauseRef cr) const {
  return lits_[cr];
}

void PropagationState::enqueue(Lit l, ClauseRef reason) {
  assign_[l.var()] = l.negative() ? -1 : 1;
  reason_[l.var()] = reason;
  trail_.push_back(l);
}

void PropagationState::set_conflict(const Conflict& c) {
  if (!conflict_set_) {
    conflict_set_ = true;
    conflict_ = c;
  }
}

void PropagationState::attach(ClauseRef cr) {
  if (meta_[cr].attached) throw std::logic_error("attach of attached clause");
  meta_[cr].attached = true;
  auto& ls = lits_[cr];

  // Empty and unit clauses share the replay list so that propagation after
  // a rollback rediscovers their conflicts and enqueues.
  if (ls.empty()) {
    unit_list_.push_back(cr);
    set_conflict(Conflict{cr, Lit()});
    return;
  }
  if (ls.size() == 1) {
    unit_list_.push_back(cr);
    int v = value(ls[0]);
    if (v < 0) {
      set_conflict(Conflict{cr, Lit()});
    } else if (v == 0 && !saves_.empty()) {
      // Enqueue eagerly only under a save point. A top-level attach leaves
      // the base trail empty and lets the replay loop derive the literal,
      // so a later detach cannot strand an assignment without its reason.
      enqueue(ls[0], cr);
    }
    return;
  }

  // Put two non-falsified literals in front when the current assignment
  // allows it; otherwise the clause is already unit or falsified here.
  size_t found = 0;
  for (size_t i = 0; i < ls.size() && found < 2; ++i) {
    if (value(ls[i]) >= 0) std::swap(ls[found++], ls[i]);
  }
  watches(ls[0].complement()).push_back(Watch{cr, ls[1]});
  watches(ls[1].complement()).push_back(Watch{cr, ls[0]});
  if (found == 0) {
    set_conflict(Conflict{cr, Lit()});
  } else if (found == 1) {
    if (value(ls[0]) == 0) enqueue(ls[0], cr);
  }
}

void PropagationState::detach(ClauseRef cr) {
  if (!meta_[cr].attached) throw std::logic_error("detach of unattached clause");
  meta_[cr].attached = false;
  auto& ls = lits_[cr];

  if (ls.size() <= 1) {
    auto it = std::find(unit_list_.begin(), unit_list_.end(), cr);
    unit_list_.erase(it);
  } else {
    for (int w = 0; w < 2; ++w) {
      auto& list = watches(ls[w].complement());
      auto it = std::find_if(list.begin(), list.end(),
                             [cr](const Watch& x) { return x.cref == cr; });
      list.erase(it);
    }
  }
  if (conflict_set_ && conflict_.cref == cr) conflict_set_ = false;
}

bool PropagationState::assume(Lit l) {
  ensure_var(l.var());
  int v = value(l);
  if (v > 0) return true;
  if (v < 0) {
    set_conflict(Conflict{kNullRef, l});
    return false;
  }
  enqueue(l, kNullRef);
  return true;
}

PropagationOutcome PropagationState::propagate() {
  ++propagations_;
  if (conflict_set_) return {true, conflict_};

  // Unit clauses are replayed here rather than watched, so propagation
  // after a rollback re-derives them from scratch.
  for (ClauseRef cr : unit_list_) {
    if (lits_[cr].empty()) {
      set_conflict(Conflict{cr, Lit()});
      return {true, conflict_};
    }
    Lit l = lits_[cr][0];
    int v = value(l);
    if (v < 0) {
      set_conflict(Conflict{cr, Lit()});
      return {true, conflict_};
    }
    if (v == 0) enqueue(l, cr);
  }

  while (queue_head_ < trail_.size()) {
    Lit q = trail_[queue_head_++];  // q just became true
    auto& list = watches_[q.key()];
    size_t keep = 0;
    for (size_t i = 0; i < list.size(); ++i) {
      Watch w = list[i];
      if (value(w.blocker) > 0) {
        list[keep++] = w;
        continue;
      }
      auto& ls = lits_[w.cref];
      Lit false_lit = q.complement();
      if (ls[0] == false_lit) std::swap(ls[0], ls[1]);
      // ls[1] == false_lit now.
      if (value(ls[0]) > 0) {
        list[keep++] = Watch{w.cref, ls[0]};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < ls.size(); ++k) {
        if (value(ls[k]) >= 0) {
          std::swap(ls[1], ls[k]);
          watches(ls[1].complement()).push_back(Watch{w.cref, ls[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;  // watch migrated to another literal
      list[keep++] = Watch{w.cref, ls[0]};
      if (value(ls[0]) < 0) {
        for (++i; i < list.size(); ++i) list[keep++] = list[i];
        list.resize(keep);
        set_conflict(Conflict{w.cref, Lit()});
        return {true, conflict_};
      }
      enqueue(ls[0], w.cref);
    }
    list.resize(keep);
  }
  return {false, Conflict{}};
}

std::optional<Lit> PropagationState::is_unit_in_bcp(const Clause& c) const {
  Lit open;
  int non_false = 0;
  for (Lit l : c.lits) {
    if (l.var() >= assign_.size() || value(l) >= 0) {
      if (++non_false > 1) return std::nullopt;
      open = l;
    }
  }
  if (non_false != 1) return std::nullopt;  // 0: conflict clause, not unit
  return open;
}

int PropagationState::count_non_falsified(std::span<const Lit> lits,
                                          int cap) const {
  int n = 0;
  for (Lit l : lits) {
    if (l.var() >= assign_.size() || value(l) >= 0) {
      if (++n >= cap) return n;
    }
  }
  return n;
}

std::vector<uint32_t> PropagationState::conflict_antecedents(
    const Conflict& c) const {
  std::vector<uint32_t> out;
  std::vector<uint8_t> seen(assign_.size(), 0);

  if (c.from_clause()) {
    if (meta_[c.cref].origin == ClauseOrigin::kInference)
      out.push_back(meta_[c.cref].index);
    for (Lit l : lits_[c.cref]) seen[l.var()] = 1;
  } else {
    seen[c.failed_assume.var()] = 1;
  }

  for (size_t pos = trail_.size(); pos-- > 0;) {
    uint32_t v = trail_[pos].var();
    if (!seen[v]) continue;
    ClauseRef r = reason_[v];
    if (r == kNullRef) continue;  // assumption
    if (meta_[r].origin == ClauseOrigin::kInference)
      out.push_back(meta_[r].index);
    for (Lit l : lits_[r]) seen[l.var()] = 1;
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void PropagationState::save_point() { saves_.push_back(trail_.size()); }

void PropagationState::rollback() {
  if (saves_.empty()) throw std::logic_error("rollback without save_point");
  size_t mark = saves_.back();
  saves_.pop_back();
  for (size_t pos = trail_.size(); pos-- > mark;) {
    uint32_t v = trail_[pos].var();
    assign_[v] = 0;
    reason_[v] = kNullRef;
  }
  trail_.resize(mark);
  queue_head_ = std::min(queue_head_, mark);
  conflict_set_ = false;
}

}  // namespace winrat
