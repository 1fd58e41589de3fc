#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqcrn/abstraction.hpp"
#include "sqcrn/concrete_ctmc.hpp"

namespace sqcrn {

struct OracleComparison {
  std::string quantity;
  double abstract_value = 0.0;
  int abstract_mag = 0;
  double oracle_value = 0.0;
  int oracle_mag = 0;
  int delta = 0;
  bool skipped = false;
  std::string note;
};

// Expected time from the initial abstract state until `target`, treating the
// abstraction's representative rates as real rates; +infinity when the target
// is not reachable.
double abstract_hitting_time(const AbstractCtmc& actmc,
                             const std::vector<bool>& target);

struct ValidationOptions {
  std::vector<Count> caps;
  std::size_t state_limit = 250000;
  unsigned ssa_runs = 0;  // 0 disables the sampling cross-check
  std::uint64_t ssa_seed = 1;
};

// Desk-scale comparison of abstract magnitudes against the exact bounded
// oracle: extinction times per species and in total (abstract chain hitting
// time vs mean_hitting_time), bottom steady-state magnitudes aggregated by
// abstract state, and optionally the seeded SSA extinction frequency against
// the oracle transient distribution. Entries that have no concrete
// counterpart (unreachable target, oracle overflow) come back skipped.
std::vector<OracleComparison> validate_against_oracle(const Crn& crn,
                                                      const LevelPartition& partition,
                                                      const ValidationOptions& options);

}  // namespace sqcrn
