#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sqcrn/crn.hpp"
#include "sqcrn/partition.hpp"

namespace sqcrn {

struct AbstractTransition {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  std::uint32_t reaction = 0;   // index into crn.reactions (or label index for fixtures)
  double rate = 0.0;            // representative rate; r/steps when accelerated
  int magnitude = 0;
  bool accelerated = false;
  std::uint64_t steps = 1;      // firings summarized by an accelerated transition
};

struct DroppedReaction {
  std::uint32_t state = 0;
  std::uint32_t reaction = 0;
  std::string reason;
};

// Abstract CTMC over level vectors. Built deterministically by BFS from the
// abstraction of the initial state (species-major state order, declaration
// order of reactions); immutable afterwards.
//
// Hand-built fixtures may bypass the level machinery: only `labels`,
// `transitions`, `outgoing` and `initial` are needed by pruning and analysis,
// and fixture transitions may include self-loops.
struct AbstractCtmc {
  Crn crn;
  LevelPartition partition;
  std::vector<AbstractState> states;
  std::vector<std::string> labels;           // display form of each state
  std::vector<std::string> reaction_labels;  // display form of transition labels
  std::vector<AbstractTransition> transitions;
  std::vector<std::vector<std::uint32_t>> outgoing;  // per state, transition ids
  std::uint32_t initial = 0;
  std::vector<DroppedReaction> dropped;

  std::size_t state_count() const { return outgoing.size(); }
  const std::string& reaction_name(std::uint32_t reaction_idx) const;
};

// Builds the abstraction: one transition per reaction enabled at the
// representative of each reachable abstract state; self-loops replaced by
// accelerated transitions to the level the repeated firings first reach.
// Reactions that cannot change the level from the representative (the change
// vector never leaves the interval within the species bounds, or the reaction
// starves first) are dropped at that state with a diagnostic.
AbstractCtmc build_abstraction(const Crn& crn, const LevelPartition& partition);

// Corner-point bounds of the propensity over the abstract state's intervals
// (top intervals capped at the species bound).
std::array<double, 2> interval_rate_bounds(const Crn& crn, const AbstractState& astate,
                                           const Reaction& reaction,
                                           const LevelPartition& partition);

struct RefinementHint {
  std::uint32_t state = 0;
  std::uint32_t reaction = 0;
  double lo = 0.0;
  double hi = 0.0;
  int span = 0;  // magnitude(hi) - magnitude(lo)
};

struct RefinementReport {
  std::vector<RefinementHint> hints;
  // Species whose top (unbounded) interval is reachable; the bound should be
  // checked or the partition refined.
  std::vector<std::size_t> reachable_top_species;
};

// Flags abstract states/reactions whose corner-point rate interval spans more
// than `span_threshold` orders of magnitude.
RefinementReport suggest_refinement(const Crn& crn, const AbstractCtmc& actmc,
                                    int span_threshold);

// Helper for fixtures and tests: append a transition and index it.
std::uint32_t add_transition(AbstractCtmc& actmc, std::uint32_t source,
                             std::uint32_t target, std::uint32_t reaction,
                             double rate, bool accelerated = false,
                             std::uint64_t steps = 1);

}  // namespace sqcrn
