#ifndef WINRAT_CONFIG_HPP
#define WINRAT_CONFIG_HPP

#include <cstdint>
#include <limits>

namespace winrat {

constexpr uint32_t kInfinity = std::numeric_limits<uint32_t>::max();

// Checking parameters. theta/mu/prune_cap accept kInfinity; theta = inf
// degenerates the window pass into exact backward checking, and mu is
// treated as inf whenever theta is.
struct Config {
  uint32_t theta = 40000;   // window width, in inference indices
  uint32_t mu = 6;          // max literals for window-context candidates
  uint32_t span = 500;      // unit-cluster gap bound for subset segments
  uint32_t tail = 100000;   // prefilter: always check inferences past this
  uint32_t add_max = 3;     // subset stage promotes clauses up to this size
  uint32_t prune_cap = 20000;  // unused binary/ternary clauses kept attached

  bool probe = true;
  bool subset = true;
  bool window = true;
  bool deactivate = true;
  bool prune = true;
  bool fastpath = true;

  bool audit_conflicts = false;
};

void validate(const Config& cfg);  // throws std::invalid_argument

}  // namespace winrat

#endif
