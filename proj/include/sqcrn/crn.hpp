#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqcrn {

using Count = std::int64_t;

// Population vector, one entry per species, entries >= 0.
using State = std::vector<Count>;

struct Species {
  std::string name;
  std::size_t index = 0;
};

struct Reaction {
  std::string label;
  std::vector<Count> reactants;  // stoichiometric coefficients, length |species|
  std::vector<Count> products;
  double rate_coefficient = 0.0;
  std::vector<Count> change;  // products - reactants, derived
};

// Reaction network with a distinguished initial state. Immutable after
// construction; all operations below are pure.
struct Crn {
  std::vector<Species> species;
  std::vector<Reaction> reactions;
  State initial_state;
  std::string time_unit = "s";  // display only

  std::size_t species_index(const std::string& name) const;
  const Species* find_species(const std::string& name) const noexcept;
  // Largest reactant coefficient of the species over all reactions.
  Count max_reactant_coefficient(std::size_t species_idx) const;
};

// Binomial coefficient C(n, k) as a double; 0 when n < k.
double binomial(Count n, Count k);

// True iff every reactant is present in sufficient number.
bool enabled(const Reaction& reaction, const State& state);

// state + change; throws std::invalid_argument when the reaction is not
// enabled in the given state.
State apply_reaction(const State& state, const Reaction& reaction);

// Mass-action propensity k * prod_l C(x_l, r_l); 0 iff not enabled.
double propensity(const Crn& crn, const Reaction& reaction, const State& state);

// Sum of propensities over all reactions taking `from` to `to`.
double total_rate_entry(const Crn& crn, const State& from, const State& to);

// Canonical text form; parse_crn(print_crn(c)) reproduces c exactly.
std::string print_crn(const Crn& crn);

}  // namespace sqcrn
