#ifndef WINRAT_DRIVER_HPP
#define WINRAT_DRIVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "winrat/config.hpp"
#include "winrat/proof_io.hpp"
#include "winrat/rat_checker.hpp"
#include "winrat/rup_checker.hpp"
#include "winrat/session.hpp"

namespace winrat {

struct Verdict {
  enum class Reason : uint8_t {
    kNone,
    kNoEmptyClause,     // the proof never derives the empty clause
    kNoGlobalConflict,  // BCP over formula plus all live inferences is quiet
    kInferenceFailed,   // some used inference failed every stage
  };

  bool verified = false;
  Reason reason = Reason::kNone;
  uint32_t failing_index = kUnseen;  // smallest used-unverified inference
};

struct VerifyResult {
  Verdict verdict;
  Stats stats;
  // Per-inference flags after the run, index-aligned with db.inferences.
  std::vector<uint8_t> verified_flags;
  std::vector<uint8_t> used_flags;
  uint32_t deletes_matched = 0;
  uint32_t deletes_unmatched = 0;
};

// Index of the earliest empty-clause addition; steps beyond it are ignored.
std::optional<uint32_t> locate_empty_clause(const ProofDB& db);

// Attaches every inference live at the end of the (truncated) proof and
// propagates from the empty trail. No conflict means the claimed
// refutation does not even propagate to one: pipeline failure. On conflict
// the antecedents and the empty clause get their used flags.
bool seed_used_flags(Session& s);

// Full pipeline: unit probe, unit-anchored subset checks, global conflict
// seed, subsumption deactivation and pruning, finite window pass, exact
// prefix pass, and a RAT stage with the equivalence-block fast path.
// Stages toggle via cfg; disabled stages change Stats, never the Verdict.
VerifyResult verify(const Formula& f, ProofDB& db, const Config& cfg);

}  // namespace winrat

#endif
