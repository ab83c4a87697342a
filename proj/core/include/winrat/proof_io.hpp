#ifndef WINRAT_PROOF_IO_HPP
#define WINRAT_PROOF_IO_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "winrat/clause.hpp"

namespace winrat {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, uint64_t where)
      : std::runtime_error(std::move(msg)), position(where) {}
  uint64_t position;  // line number for DIMACS, byte offset for proofs
};

class ProofIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Random-access byte reader so proofs stream from disk or from an
// in-memory buffer interchangeably.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual size_t read_at(uint64_t offset, std::span<char> out) = 0;
};

std::unique_ptr<ByteSource> make_memory_source(std::string data);
std::unique_ptr<ByteSource> make_file_source(const std::string& path);

Formula parse_dimacs(std::string_view text, bool strict = false,
                     std::vector<std::string>* warnings = nullptr);

constexpr uint32_t kNeverDeleted = std::numeric_limits<uint32_t>::max();
constexpr uint32_t kUnseen = std::numeric_limits<uint32_t>::max();

struct ProofStep {
  enum class Kind : uint8_t { kAdd, kDelete };
  Kind kind;
  uint32_t index;   // into ProofDB::inferences or ProofDB::deletes
  uint64_t offset;  // byte offset of the step's first token
};

struct InferenceRecord {
  Clause clause;       // empty when evicted; reload via offset
  Lit pivot_hint;      // first literal as written in the proof
  uint32_t len = 0;    // literal count after normalization
  uint64_t offset = 0;
  uint64_t hash = 0;   // clause_hash, computed before any eviction
  uint32_t step_pos = 0;                 // 1-based position in steps
  uint32_t delete_step = kNeverDeleted;  // step position of a matching delete
  bool tautology = false;
  bool resident = false;
  bool verified = false;
  bool used = false;
  bool active = false;    // currently attached to watch structures
  bool promoted = false;  // added to F for every position (unit probe / subset)
};

struct DeleteRecord {
  Clause clause;  // normalized content to match
  uint64_t offset = 0;
  uint32_t step_pos = 0;
  enum class Target : uint8_t { kUnresolved, kFormula, kInference, kNoMatch };
  Target target = Target::kUnresolved;
  uint32_t target_index = 0;
};

// A single proof step as tokenized from text.
struct ParsedProofLine {
  ProofStep::Kind kind;
  std::vector<int> raw_lits;
};

// Parses one step from the front of `text` (leading whitespace and comment
// lines are skipped). Returns nullopt when only whitespace/comments remain.
std::optional<ParsedProofLine> parse_proof_line(std::string_view text);

class ProofDB {
 public:
  std::vector<ProofStep> steps;
  std::vector<InferenceRecord> inferences;
  std::vector<DeleteRecord> deletes;
  std::optional<uint32_t> empty_at;  // first empty-clause inference index

  // First proof step position (1-based) where each variable occurs;
  // kUnseen if the proof never mentions it. Indexed by variable.
  std::vector<uint32_t> first_seen_step;
  uint32_t max_var = 0;

  uint64_t evictions = 0;
  uint64_t reloads = 0;

  size_t resident_budget() const { return budget_; }
  size_t inactive_resident_count() const { return resident_.size(); }

  // Clause body of inference i, reloading from the source if evicted.
  const Clause& inference_clause(uint32_t i);

  // Reloads inference i from its byte offset; no-op when resident.
  // Throws ProofIntegrityError when the bytes no longer parse to the
  // recorded clause.
  const Clause& reload_inference(uint32_t i);

  // Drops the clause body of an inactive inference.
  void evict(uint32_t i);

  // Evicts lowest-index inactive bodies until within budget. Active and
  // promoted inferences are pinned.
  void enforce_budget();

  // Attachment transitions: active inferences leave the eviction pool,
  // deactivated ones re-enter it (and the budget is re-enforced).
  void mark_active(uint32_t i, bool active);

 private:
  friend ProofDB load_proof(std::unique_ptr<ByteSource> source, size_t budget);
  std::unique_ptr<ByteSource> source_;
  size_t budget_ = std::numeric_limits<size_t>::max();
  std::set<uint32_t> resident_;  // inactive resident inference indices
};

ProofDB load_proof(std::unique_ptr<ByteSource> source,
                   size_t budget = std::numeric_limits<size_t>::max());

// Matches each delete step against the clauses live at that step (formula
// plus prior undeleted inferences), filling delete_step positions.
// Steps at positions > limit_step are left unresolved.
struct DeletionResolution {
  std::vector<uint32_t> formula_delete_step;  // kNeverDeleted when live
  uint32_t matched = 0;
  uint32_t unmatched = 0;
  size_t table_size_end = 0;  // live-clause table entries left after replay
};

DeletionResolution resolve_deletions(ProofDB& db, const Formula& f,
                                     uint32_t limit_step = kNeverDeleted,
                                     std::vector<std::string>* warnings = nullptr);

// Serializes the parsed steps back to ASCII DRAT (round-trip testing).
std::string to_drat(ProofDB& db);

}  // namespace winrat

#endif
