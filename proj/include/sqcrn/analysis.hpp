#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqcrn/pruning.hpp"

namespace sqcrn {

inline constexpr std::uint32_t kNoId = UINT32_MAX;

// A duration together with its order of magnitude. The magnitude is computed
// by integer arithmetic over the magnitudes of the formula's factors
// (mag(x/y) = mag(x) - mag(y)), which is the resolution the whole analysis
// works at; `value` carries the exact representative-rate arithmetic.
struct TimeEstimate {
  double value = 0.0;
  int mag = 0;
};

struct SteadyStateEntry {
  std::uint32_t state = 0;
  double weight = 0.0;  // raw minStayingRate/(m*stayingRate), times any merge scale
  int mag = 0;          // magnitude of the normalized weight
};

enum class ComponentKind { seed, candidate, confirmed_bottom, transient_merged };

struct ComponentRecord {
  std::uint32_t id = 0;
  int iteration = 0;
  ComponentKind kind = ComponentKind::candidate;
  std::vector<std::uint32_t> members;  // ascending state ids
  std::vector<SteadyStateEntry> steady;
  bool steady_approximate = false;  // true after merges rescaled the weights
  bool superseded = false;
  std::uint32_t superseded_by = kNoId;
};

struct ExitRecord {
  std::uint32_t component = 0;
  std::uint32_t state = 0;
  std::uint32_t transition = 0;  // into model.transitions
  double staying_rate = 0.0;
  double exiting_rate = 0.0;  // max not-yet-analysed non-kept rate at `state`
  TimeEstimate time_to_exit;
  double share = 0.0;  // normalized over the records of one analysis round
  int share_mag = 0;
  int iteration = 0;  // component iteration + 1
  int round = 0;
  bool internal = false;  // target inside the component when recorded
};

// Kept-edge walk from an exit target (or the initial state, or a flow edge)
// to the component it settles in.
struct PathRecord {
  std::uint32_t via_transition = kNoId;  // exit or flow edge; kNoId for the seed walk
  std::uint32_t entry_state = 0;
  std::uint32_t to_component = 0;
  std::vector<std::uint32_t> states;  // transient states traversed, maybe empty
  double min_rate = 0.0;              // 0 for empty paths
  std::uint64_t occurrences = 0;
  TimeEstimate time;
  int iteration = 0;
};

struct MergeEvent {
  enum class Kind { grow, alternation } kind = Kind::grow;
  std::uint32_t result = 0;
  std::vector<std::uint32_t> parts;
  int iteration = 0;
};

struct AnalysisReport {
  unsigned prune_level = 0;
  std::vector<ComponentRecord> components;
  std::vector<ExitRecord> exits;
  std::vector<PathRecord> paths;
  std::vector<MergeEvent> merges;
  // Iteration index per transition; -1 when the analysis never reached it.
  std::vector<int> transition_iteration;

  const ComponentRecord* component_of_state(std::uint32_t state) const;
  std::vector<std::uint32_t> bottom_components() const;  // confirmed only
};

// Alternating transient / steady-state analysis over the pruned graph.
//
// Worklist of components seeded from the initial state. Discovery walks kept
// edges and stops at the first candidate component of each path (non-trivial
// SCC, kept self-loop, or dead end); deeper structure is found in later
// iterations. Popped components emit their steady-state approximation, then
// analyse their most probable not-yet-recorded exits (non-kept transitions,
// compared at magnitude resolution); exit targets either create new
// components, grow the current one by the transient path (re-entry), or merge
// the components visited between an earlier component and this one
// (alternation). Kept edges that leave a component are followed only once its
// slow exits are exhausted, and never from an alternation merge.
AnalysisReport analyze(const AbstractCtmc& model, const PrunedGraph& pruned);

// The steady-state approximation minStayingRate/(m*stayingRate(s)) with
// stayingRate = fastest kept rate. Weights are raw (the formula does not
// normalize); magnitudes are of the normalized weights.
std::vector<SteadyStateEntry> component_steady_state(const PrunedGraph& pruned,
                                                     const std::vector<std::uint32_t>& members);

// States minimizing stayingRate/exitingRate at magnitude resolution, over all
// non-kept transitions out of the members.
std::vector<std::uint32_t> select_exit_states(const PrunedGraph& pruned,
                                              const std::vector<std::uint32_t>& members);

// stayingRate(s)*m / (|exitStates|*minStayingRate*exitingRate(s)).
TimeEstimate time_to_exit(const PrunedGraph& pruned,
                          const std::vector<std::uint32_t>& members,
                          std::uint32_t exit_state);

// Exit shares proportional to steadyState(state)*rate, normalized over the
// given exits; returns (share, magnitude) per entry.
std::vector<std::pair<double, int>> exit_distribution(
    const PrunedGraph& pruned, const std::vector<std::uint32_t>& members,
    const std::vector<std::pair<std::uint32_t, double>>& exits);

// m/minRate over the path's edge rates; zero-length paths take no time.
TimeEstimate transient_time(const std::vector<double>& edge_rates);

}  // namespace sqcrn
