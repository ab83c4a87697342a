#ifndef WINRAT_RAT_CHECKER_HPP
#define WINRAT_RAT_CHECKER_HPP

#include <cstdint>
#include <vector>

#include "winrat/session.hpp"

namespace winrat {

// Per-literal references to every clause containing it, over the formula
// and the inferences below a fixed prefix limit. Built in a single scan;
// queries filter by liveness at the query position, so one build serves
// the whole backward pass.
struct OccEntry {
  bool formula;
  uint32_t idx;
};

struct OccurrenceIndex {
  uint32_t prefix_limit = 0;
  std::vector<std::vector<OccEntry>> by_key;

  const std::vector<OccEntry>& of(Lit l) const {
    static const std::vector<OccEntry> none;
    return l.key() < by_key.size() ? by_key[l.key()] : none;
  }
};

OccurrenceIndex build_occurrence_index(Session& s, uint32_t prefix_limit);

// RAT check of c against the live clauses below prefix_limit plus the
// formula. Pivot candidates are tried in clause order with hint first
// when it names a literal of c. For each candidate l, every live D
// containing the complement of l must give a RUP resolvent D \ {l^c} + c
// (resolvents satisfied at assumption time pass trivially, which covers
// tautological ones). Antecedents and resolution partners of a successful
// pivot are marked used.
bool check_rat(Session& s, const OccurrenceIndex& occ, uint32_t prefix_limit,
               const Clause& c, Lit hint = Lit());

// Definition clause z | ~x_1 | ... | ~x_n at index `definition`, followed
// immediately by the n binary units ~z | x_i. The pivot variable must be
// fresh: absent from the formula and from every step before the
// definition.
struct EquivalenceBlock {
  uint32_t definition = 0;
  uint32_t n = 0;
  Lit pivot;
  bool valid = false;
};

// Matches a block whose definition sits at index d. Returns an invalid
// block when the shape, freshness, or liveness at position pos fails
// (a definition deleted before pos no longer matches).
EquivalenceBlock match_equivalence_block(Session& s, uint32_t d, uint32_t pos);

// Containment rule: every unit's second literal must appear negated in the
// definition. On success all n + 1 block clauses are marked verified and
// no occurrence index is consulted.
bool verify_equivalence_block(Session& s, const EquivalenceBlock& b);

// Index of the inference introducing step position `step_pos`, or kUnseen.
uint32_t inference_at_step(const ProofDB& db, uint32_t step_pos);

}  // namespace winrat

#endif
