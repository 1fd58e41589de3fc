#include "sqcrn/abstraction.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>

#include "sqcrn/magnitude.hpp"

namespace sqcrn {

const std::string& AbstractCtmc::reaction_name(std::uint32_t reaction_idx) const {
  if (!reaction_labels.empty())
    return reaction_labels[reaction_idx];
  return crn.reactions[reaction_idx].label;
}

std::uint32_t add_transition(AbstractCtmc& actmc, std::uint32_t source,
                             std::uint32_t target, std::uint32_t reaction,
                             double rate, bool accelerated, std::uint64_t steps) {
  AbstractTransition t;
  t.source = source;
  t.target = target;
  t.reaction = reaction;
  t.rate = rate;
  t.magnitude = magnitude(rate);
  t.accelerated = accelerated;
  t.steps = steps;
  std::uint32_t id = static_cast<std::uint32_t>(actmc.transitions.size());
  actmc.transitions.push_back(t);
  actmc.outgoing[source].push_back(id);
  return id;
}

namespace {

std::string state_label(const Crn& crn, const LevelPartition& partition,
                        const AbstractState& astate) {
  std::ostringstream os;
  for (std::size_t sp = 0; sp < astate.size(); ++sp) {
    if (sp)
      os << ", ";
    os << crn.species[sp].name << ':'
       << partition.levels[sp][astate[sp]].text();
  }
  return os.str();
}

struct AccelerationResult {
  bool ok = false;
  std::uint64_t steps = 0;
  State landing;
  std::string reason;
};

// Smallest n with alpha(c + n*v) != a, walking one firing at a time so
// enabledness and the species bounds are respected along the way.
AccelerationResult accelerate(const Crn& crn, const LevelPartition& partition,
                              const Reaction& reaction, const State& representative,
                              const AbstractState& astate) {
  AccelerationResult result;
  bool moves = false;
  for (Count delta : reaction.change)
    if (delta != 0)
      moves = true;
  if (!moves) {
    result.reason = "change vector is zero; concrete self-loop";
    return result;
  }

  State current = representative;
  std::uint64_t steps = 0;
  while (true) {
    if (!enabled(reaction, current)) {
      result.reason = "reaction starves before leaving the level";
      return result;
    }
    for (std::size_t sp = 0; sp < current.size(); ++sp) {
      // Only reactants decrease, so populations cannot go negative here.
      assert(current[sp] + reaction.change[sp] >= 0);
      if (reaction.change[sp] > 0 &&
          current[sp] + reaction.change[sp] > partition.bounds[sp] &&
          !partition.levels[sp][astate[sp]].hi) {
        result.reason = "level never left within the bound of " + crn.species[sp].name;
        return result;
      }
    }
    current = apply_reaction(current, reaction);
    ++steps;
    if (abstract_state(current, partition) != astate) {
      result.ok = true;
      result.steps = steps;
      result.landing = std::move(current);
      return result;
    }
  }
}

}  // namespace

AbstractCtmc build_abstraction(const Crn& crn, const LevelPartition& partition) {
  auto violations = validate_partition(crn, partition);
  if (!violations.empty())
    throw std::invalid_argument("invalid partition: " + violations.front().message);

  AbstractCtmc actmc;
  actmc.crn = crn;
  actmc.partition = partition;

  std::map<AbstractState, std::uint32_t> index;
  std::deque<std::uint32_t> queue;

  auto intern = [&](const AbstractState& astate) {
    auto it = index.find(astate);
    if (it != index.end())
      return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(actmc.states.size());
    index.emplace(astate, id);
    actmc.states.push_back(astate);
    actmc.labels.push_back(state_label(crn, partition, astate));
    actmc.outgoing.emplace_back();
    queue.push_back(id);
    return id;
  };

  actmc.initial = intern(abstract_state(crn.initial_state, partition));

  while (!queue.empty()) {
    std::uint32_t id = queue.front();
    queue.pop_front();
    const AbstractState astate = actmc.states[id];
    const State representative = concretise(astate, partition);

    for (std::size_t ri = 0; ri < crn.reactions.size(); ++ri) {
      const Reaction& reaction = crn.reactions[ri];
      if (!enabled(reaction, representative))
        continue;
      double rate = propensity(crn, reaction, representative);
      if (!(rate > 0.0))
        continue;

      State successor = apply_reaction(representative, reaction);
      AbstractState successor_astate = abstract_state(successor, partition);
      if (successor_astate != astate) {
        add_transition(actmc, id, intern(successor_astate),
                       static_cast<std::uint32_t>(ri), rate);
        continue;
      }

      AccelerationResult acc = accelerate(crn, partition, reaction, representative, astate);
      if (!acc.ok) {
        actmc.dropped.push_back({id, static_cast<std::uint32_t>(ri), acc.reason});
        continue;
      }
      add_transition(actmc, id, intern(abstract_state(acc.landing, partition)),
                     static_cast<std::uint32_t>(ri),
                     rate / static_cast<double>(acc.steps), true, acc.steps);
    }
  }
  return actmc;
}

std::array<double, 2> interval_rate_bounds(const Crn& crn, const AbstractState& astate,
                                           const Reaction& reaction,
                                           const LevelPartition& partition) {
  // Propensity is monotone in each reactant population, so the extrema sit at
  // the interval corners.
  State lo_corner(astate.size()), hi_corner(astate.size());
  for (std::size_t sp = 0; sp < astate.size(); ++sp) {
    const Interval& interval = partition.levels[sp][astate[sp]];
    lo_corner[sp] = interval.lo;
    hi_corner[sp] = interval.hi ? *interval.hi : partition.bounds[sp];
  }
  return {propensity(crn, reaction, lo_corner), propensity(crn, reaction, hi_corner)};
}

RefinementReport suggest_refinement(const Crn& crn, const AbstractCtmc& actmc,
                                    int span_threshold) {
  if (span_threshold < 1)
    throw std::invalid_argument("span threshold must be >= 1");
  RefinementReport report;
  for (std::uint32_t id = 0; id < actmc.states.size(); ++id) {
    const AbstractState& astate = actmc.states[id];
    const State representative = concretise(astate, actmc.partition);
    for (std::size_t ri = 0; ri < crn.reactions.size(); ++ri) {
      const Reaction& reaction = crn.reactions[ri];
      if (!enabled(reaction, representative))
        continue;
      auto [lo, hi] = interval_rate_bounds(crn, astate, reaction, actmc.partition);
      if (!(lo > 0.0) || !(hi > 0.0))
        continue;
      int span = magnitude(hi) - magnitude(lo);
      if (span > span_threshold)
        report.hints.push_back({id, static_cast<std::uint32_t>(ri), lo, hi, span});
    }
  }
  std::vector<bool> top_reached(crn.species.size(), false);
  for (const AbstractState& astate : actmc.states)
    for (std::size_t sp = 0; sp < astate.size(); ++sp)
      if (astate[sp] + 1 == actmc.partition.levels[sp].size())
        top_reached[sp] = true;
  for (std::size_t sp = 0; sp < crn.species.size(); ++sp)
    if (top_reached[sp])
      report.reachable_top_species.push_back(sp);
  return report;
}

}  // namespace sqcrn
