#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "sqcrn/crn.hpp"

namespace sqcrn {

struct StateLimitError : std::runtime_error {
  explicit StateLimitError(std::size_t limit)
      : std::runtime_error("bounded CTMC exceeds the state limit of " +
                           std::to_string(limit)) {}
};

// Explicit bounded CTMC built by breadth-first closure of the initial state
// under enabled reactions; successors beyond the caps are discarded and their
// propensity mass tallied so the truncation can be judged. Desk-scale oracle.
// Immutable after build; all analyses below are pure.
struct ConcreteCtmc {
  std::vector<State> states;             // BFS order, states[0..]
  std::map<State, std::uint32_t> index;  // state -> position
  std::vector<double> initial;           // pi0, Dirac at the initial state
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;  // sparse R
  std::vector<double> exit_rates;        // row sums
  std::vector<Count> caps;
  double dropped_mass = 0.0;  // total propensity discarded at the caps

  std::size_t size() const { return states.size(); }
  double rate(std::uint32_t from, std::uint32_t to) const;
};

ConcreteCtmc build_bounded_ctmc(const Crn& crn, const std::vector<Count>& caps,
                                std::size_t state_limit = 250000);

double exit_rate(const ConcreteCtmc& ctmc, std::uint32_t state);

// R(s,s')/E(s); throws std::domain_error for absorbing s.
double embedded_probability(const ConcreteCtmc& ctmc, std::uint32_t from,
                            std::uint32_t to);

// Alternating sequence s0 I0 s1 I1 ... s_{n+1}.
struct CylinderTemplate {
  std::vector<std::uint32_t> states;                  // n + 2 entries
  std::vector<std::pair<double, double>> intervals;   // n + 1 entries, inf <= sup
};

// pi0(s0) * prod P(s_i, s_{i+1}) * (e^{-E(s_i) inf I_i} - e^{-E(s_i) sup I_i});
// 0 when a consecutive pair is disconnected or the start has no mass.
double cylinder_probability(const ConcreteCtmc& ctmc, const CylinderTemplate& cylinder);

// Distribution over states at time t by uniformization (rate = 1.02 * max
// exit rate, Poisson tail truncated below eps).
std::vector<double> transient_distribution(const ConcreteCtmc& ctmc, double t,
                                           double eps = 1e-8);

// Expected first-passage time into the target set, per start state; +infinity
// where the target is unreachable. Sparse direct solve below 10^4 states,
// damped Gauss-Seidel refinement above.
std::vector<double> mean_hitting_time(const ConcreteCtmc& ctmc,
                                      const std::function<bool(const State&)>& target);

// Stationary distribution of the chain restricted to a bottom SCC; throws
// std::invalid_argument when the set is not one.
std::vector<double> bscc_steady_state(const ConcreteCtmc& ctmc,
                                      const std::vector<std::uint32_t>& bscc);

struct TimedRun {
  std::vector<std::pair<State, double>> steps;  // (state, sojourn)
  State final_state;
};

// Gillespie simulation of the CRN up to the horizon; deterministic per seed.
TimedRun ssa_sample(const Crn& crn, double horizon, std::uint64_t seed);

// Sparse triplet dump (row col rate), one entry per line.
void dump_triplets(const ConcreteCtmc& ctmc, std::ostream& os);

}  // namespace sqcrn
