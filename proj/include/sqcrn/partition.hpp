#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqcrn/crn.hpp"

namespace sqcrn {

// Population interval [lo, hi]; hi absent means unbounded.
struct Interval {
  Count lo = 0;
  std::optional<Count> hi;

  bool contains(Count n) const { return n >= lo && (!hi || n <= *hi); }
  bool singleton() const { return hi && *hi == lo; }
  std::string text() const;
};

// Per-species ordered interval partition of the naturals plus the population
// bound used to concretise the top interval.
struct LevelPartition {
  std::vector<std::vector<Interval>> levels;  // one vector per species
  std::vector<Count> bounds;                  // one per species

  std::size_t level_of(std::size_t species_idx, Count n) const;
};

// Vector of level indices, one per species.
using AbstractState = std::vector<std::uint32_t>;

struct PartitionViolation {
  std::size_t species = 0;
  std::string message;
};

// Checks contiguity/coverage, the enabledness singletons {i} for every
// i < max reactant coefficient, and bound >= top interval lower end.
// Violations are data, not errors.
std::vector<PartitionViolation> validate_partition(const Crn& crn,
                                                   const LevelPartition& partition);

// Componentwise interval membership.
AbstractState abstract_state(const State& state, const LevelPartition& partition);

// Representative: floor midpoint per interval; top intervals use
// [lo, bound]; singletons map to their value.
State concretise(const AbstractState& astate, const LevelPartition& partition);

// Default partition for a species the config does not mention: singletons
// {0},{1},...,{k-1} with k = max(2, max reactant coefficient), then [k..).
std::vector<Interval> default_levels(const Crn& crn, std::size_t species_idx);
Count default_bound(const Crn& crn, std::size_t species_idx, Count top_lo);

// Analysis configuration: level partition plus run options, parsed from the
// line-oriented config format:
//
//   levels P: 0 | 1..100 | 101..
//   bound P = 1000
//   prune 1
//   aggregate MD: M, D
//   caps M=200, D=200
//
// Species without a `levels` line get the default partition.
struct Config {
  LevelPartition partition;
  unsigned prune_level = 0;
  std::map<std::string, std::vector<std::size_t>> aggregates;  // display only
  std::optional<std::vector<Count>> caps;  // oracle caps for validation mode
  std::string out_dir;                     // empty: decided by the caller
};

Config parse_config(std::string_view text, const Crn& crn);

// Partition with default levels for every species.
LevelPartition default_partition(const Crn& crn);

}  // namespace sqcrn
