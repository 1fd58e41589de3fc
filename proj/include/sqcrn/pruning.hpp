#pragma once

#include <cstdint>
#include <vector>

#include "sqcrn/abstraction.hpp"

namespace sqcrn {

// Kept-edge view of an abstract CTMC: per state, a transition survives
// n-pruning iff its magnitude is within n of the state's fastest outgoing
// magnitude. Pure function of the magnitudes, so rescaling all rates by a
// common power of ten leaves the kept set unchanged.
struct PrunedGraph {
  const AbstractCtmc* model = nullptr;
  unsigned level = 0;
  std::vector<bool> kept;  // indexed like model->transitions

  bool is_kept(std::uint32_t transition_idx) const { return kept[transition_idx]; }

  // Fastest kept rate out of a state; 0 when the state keeps nothing.
  double staying_rate(std::uint32_t state) const;

  // Kept successors of a state (deduplicated targets, ascending).
  std::vector<std::uint32_t> kept_successors(std::uint32_t state) const;
};

PrunedGraph prune(const AbstractCtmc& actmc, unsigned n);

}  // namespace sqcrn
