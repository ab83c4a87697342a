#ifndef WINRAT_TESTKIT_HPP
#define WINRAT_TESTKIT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "winrat/clause.hpp"
#include "winrat/proof_io.hpp"

namespace winrat::testkit {

// Exhaustive enumeration over formulas of at most 24 variables. Models are
// bitmasks with bit v-1 holding variable v.
std::optional<uint32_t> exhaustive_sat(const Formula& f);
std::vector<uint32_t> model_set(const Formula& f);
bool clause_true_under(const Clause& c, uint32_t model);

// Rescan-to-fixpoint unit propagation, independent of the watched-literal
// engine it validates. `assigned` lists assumptions first, then derived
// literals in derivation order.
struct NaiveBcpResult {
  bool conflict = false;
  std::vector<Lit> assigned;
};
NaiveBcpResult naive_bcp(const std::vector<const Clause*>& clauses,
                         std::span<const Lit> assumptions, uint32_t num_vars);

// Forward chronological check of every inference against its full prefix
// (RUP, then RAT with the first written literal as first pivot candidate),
// honoring deletions, with naive BCP throughout. The reference oracle.
struct ForwardCheckResult {
  bool verified = false;
  uint32_t failing_index = kUnseen;  // inference index of the first failure
};
ForwardCheckResult naive_forward_check(const Formula& f, ProofDB& db);

// PHP(holes+1, holes): one at-least-one clause per pigeon and pairwise
// exclusivity per hole. Unsatisfiable for every n >= 1.
Formula gen_pigeonhole(uint32_t holes);

// Seed-deterministic k-SAT over `vars` variables: distinct variables per
// clause, independent random signs.
Formula gen_random_ksat(uint32_t vars, uint32_t clauses, uint32_t k,
                        uint64_t seed);

// Chronological DPLL that learns the negation of its decision prefix at
// every conflict. For unsatisfiable inputs the emitted DRAT text is a pure
// RUP proof ending in the empty clause; otherwise a model is returned.
struct EmitResult {
  bool sat = false;
  uint32_t model = 0;
  std::string drat;
};
EmitResult emit_proof_dpll(const Formula& f);

// Tree split over the given branch literals. Each leaf gets a fresh
// auxiliary variable z: a definition clause z | ~x_1 | ... | ~x_n, the n
// binary units ~z | x_i, and the leaf's learned clauses prefixed with ~z.
// Interior nodes close with the negated path prefix; the root close is the
// empty clause. With expanded = true the z encoding is skipped and every
// leaf clause carries the negated prefix as a literal suffix instead.
std::string emit_split_proof(const Formula& f, std::span<const Lit> branch,
                             bool expanded = false);

// Total literal tokens across addition steps (deletion lines excluded).
size_t literal_count(const std::string& drat);

// For random permutations of the clause list S: the model set of F with S
// appended must not depend on the order, and any permuted proof the
// verifier still accepts must belong to an oracle-UNSAT formula.
bool permutation_invariance_check(const Formula& f,
                              const std::vector<Clause>& s_verified,
                              uint64_t seed, uint32_t rounds);

// DRAT text helpers shared by generators and tests.
void append_clause_line(std::string& out, std::span<const Lit> lits,
                        bool is_delete = false);

}  // namespace winrat::testkit

#endif
