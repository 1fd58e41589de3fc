#include "sqcrn/crn.hpp"

#include <algorithm>
#include <sstream>

namespace sqcrn {

std::size_t Crn::species_index(const std::string& name) const {
  const Species* sp = find_species(name);
  if (!sp)
    throw std::invalid_argument("unknown species: " + name);
  return sp->index;
}

const Species* Crn::find_species(const std::string& name) const noexcept {
  for (const Species& sp : species)
    if (sp.name == name)
      return &sp;
  return nullptr;
}

Count Crn::max_reactant_coefficient(std::size_t species_idx) const {
  Count max_r = 0;
  for (const Reaction& r : reactions)
    max_r = std::max(max_r, r.reactants[species_idx]);
  return max_r;
}

double binomial(Count n, Count k) {
  if (k < 0 || n < k)
    return 0.0;
  double result = 1.0;
  for (Count i = 0; i < k; ++i)
    result *= static_cast<double>(n - i) / static_cast<double>(k - i);
  return result;
}

bool enabled(const Reaction& reaction, const State& state) {
  if (reaction.reactants.size() != state.size())
    throw std::invalid_argument("state/reaction dimension mismatch");
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] < reaction.reactants[i])
      return false;
  return true;
}

State apply_reaction(const State& state, const Reaction& reaction) {
  if (!enabled(reaction, state))
    throw std::invalid_argument("reaction " + reaction.label +
                                " not enabled in this state");
  State next(state);
  for (std::size_t i = 0; i < next.size(); ++i)
    next[i] += reaction.change[i];
  return next;
}

double propensity(const Crn&, const Reaction& reaction, const State& state) {
  if (!enabled(reaction, state))
    return 0.0;
  double combinations = 1.0;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (reaction.reactants[i] > 0)
      combinations *= binomial(state[i], reaction.reactants[i]);
  return reaction.rate_coefficient * combinations;
}

double total_rate_entry(const Crn& crn, const State& from, const State& to) {
  double sum = 0.0;
  for (const Reaction& r : crn.reactions) {
    if (!enabled(r, from))
      continue;
    bool matches = true;
    for (std::size_t i = 0; i < from.size() && matches; ++i)
      matches = (from[i] + r.change[i] == to[i]);
    if (matches && from != to)
      sum += propensity(crn, r, from);
  }
  return sum;
}

namespace {

void print_complex(std::ostream& os, const Crn& crn,
                   const std::vector<Count>& coefficients) {
  bool empty = true;
  bool first = true;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] == 0)
      continue;
    empty = false;
    if (!first)
      os << " + ";
    first = false;
    if (coefficients[i] != 1)
      os << coefficients[i] << ' ';
    os << crn.species[i].name;
  }
  if (empty)
    os << '0';
}

std::string format_rate(double k) {
  std::ostringstream os;
  os.precision(17);
  os << k;
  return os.str();
}

}  // namespace

std::string print_crn(const Crn& crn) {
  std::ostringstream os;
  os << "species ";
  for (std::size_t i = 0; i < crn.species.size(); ++i) {
    if (i)
      os << ", ";
    os << crn.species[i].name;
  }
  os << '\n';
  os << "unit " << crn.time_unit << '\n';
  bool any_init = false;
  for (std::size_t i = 0; i < crn.species.size(); ++i) {
    if (crn.initial_state[i] == 0)
      continue;
    os << (any_init ? ", " : "init ") << crn.species[i].name << '='
       << crn.initial_state[i];
    any_init = true;
  }
  if (any_init)
    os << '\n';
  for (const Reaction& r : crn.reactions) {
    os << "r " << r.label << ": ";
    print_complex(os, crn, r.reactants);
    os << " -> ";
    print_complex(os, crn, r.products);
    os << " @ " << format_rate(r.rate_coefficient) << '\n';
  }
  return os.str();
}

}  // namespace sqcrn
