#include "sqcrn/concrete_ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "sqcrn/scc.hpp"

namespace sqcrn {

double ConcreteCtmc::rate(std::uint32_t from, std::uint32_t to) const {
  for (const auto& [col, value] : rows[from])
    if (col == to)
      return value;
  return 0.0;
}

ConcreteCtmc build_bounded_ctmc(const Crn& crn, const std::vector<Count>& caps,
                                std::size_t state_limit) {
  if (caps.size() != crn.species.size())
    throw std::invalid_argument("caps must name every species");
  for (std::size_t sp = 0; sp < caps.size(); ++sp)
    if (crn.initial_state[sp] > caps[sp])
      throw std::invalid_argument("initial population of " + crn.species[sp].name +
                                  " exceeds its cap");

  ConcreteCtmc ctmc;
  ctmc.caps = caps;
  std::deque<std::uint32_t> queue;

  auto intern = [&](const State& state) {
    auto it = ctmc.index.find(state);
    if (it != ctmc.index.end())
      return it->second;
    if (ctmc.states.size() >= state_limit)
      throw StateLimitError(state_limit);
    std::uint32_t id = static_cast<std::uint32_t>(ctmc.states.size());
    ctmc.index.emplace(state, id);
    ctmc.states.push_back(state);
    ctmc.rows.emplace_back();
    queue.push_back(id);
    return id;
  };

  intern(crn.initial_state);
  while (!queue.empty()) {
    std::uint32_t id = queue.front();
    queue.pop_front();
    const State state = ctmc.states[id];
    std::map<std::uint32_t, double> row;
    for (const Reaction& reaction : crn.reactions) {
      if (!enabled(reaction, state))
        continue;
      double rate = propensity(crn, reaction, state);
      if (!(rate > 0.0))
        continue;
      State next = apply_reaction(state, reaction);
      if (next == state)  // zero-change reaction, no transition
        continue;
      bool beyond_caps = false;
      for (std::size_t sp = 0; sp < next.size(); ++sp)
        if (next[sp] > caps[sp])
          beyond_caps = true;
      if (beyond_caps) {
        ctmc.dropped_mass += rate;
        continue;
      }
      row[intern(next)] += rate;
    }
    ctmc.rows[id].assign(row.begin(), row.end());
  }

  ctmc.initial.assign(ctmc.states.size(), 0.0);
  ctmc.initial[0] = 1.0;
  ctmc.exit_rates.resize(ctmc.states.size());
  for (std::uint32_t s = 0; s < ctmc.states.size(); ++s) {
    double total = 0.0;
    for (const auto& [col, value] : ctmc.rows[s])
      total += value;
    ctmc.exit_rates[s] = total;
  }
  return ctmc;
}

double exit_rate(const ConcreteCtmc& ctmc, std::uint32_t state) {
  return ctmc.exit_rates[state];
}

double embedded_probability(const ConcreteCtmc& ctmc, std::uint32_t from,
                            std::uint32_t to) {
  double total = ctmc.exit_rates[from];
  if (!(total > 0.0))
    throw std::domain_error("embedded probability undefined for absorbing state");
  return ctmc.rate(from, to) / total;
}

double cylinder_probability(const ConcreteCtmc& ctmc, const CylinderTemplate& cylinder) {
  if (cylinder.states.size() < 2 || cylinder.intervals.size() + 1 != cylinder.states.size())
    throw std::invalid_argument("cylinder needs states s0..s_{n+1} and intervals I0..In");
  double probability = ctmc.initial[cylinder.states.front()];
  for (std::size_t i = 0; i + 1 < cylinder.states.size(); ++i) {
    if (!(probability > 0.0))
      return 0.0;
    std::uint32_t s = cylinder.states[i];
    std::uint32_t next = cylinder.states[i + 1];
    double rate = ctmc.rate(s, next);
    if (!(rate > 0.0))
      return 0.0;
    double exit = ctmc.exit_rates[s];
    auto [inf, sup] = cylinder.intervals[i];
    if (inf > sup)
      throw std::invalid_argument("cylinder interval with inf > sup");
    double window = std::exp(-exit * inf) -
                    (std::isinf(sup) ? 0.0 : std::exp(-exit * sup));
    probability *= (rate / exit) * window;
  }
  return probability;
}

namespace {

std::vector<double> uniformization_chunk(const ConcreteCtmc& ctmc,
                                         std::vector<double> current, double lambda,
                                         double t, double eps) {
  const std::size_t n = ctmc.size();
  auto step = [&](const std::vector<double>& v) {
    // P = I + Q/lambda, applied as row vector * P.
    std::vector<double> out(n, 0.0);
    for (std::uint32_t s = 0; s < n; ++s) {
      if (v[s] == 0.0)
        continue;
      out[s] += v[s] * (1.0 - ctmc.exit_rates[s] / lambda);
      for (const auto& [col, rate] : ctmc.rows[s])
        out[col] += v[s] * rate / lambda;
    }
    return out;
  };

  // Poisson(lambda t) weights by the stable recurrence; iterate until the
  // accumulated weight covers 1 - eps.
  const double lt = lambda * t;
  std::vector<double> result(n, 0.0);
  double weight = std::exp(-lt);
  double covered = 0.0;
  const std::size_t max_terms =
      static_cast<std::size_t>(lt + 12.0 * std::sqrt(lt) + 200.0);
  for (std::size_t k = 0; k <= max_terms; ++k) {
    if (k > 0) {
      weight *= lt / static_cast<double>(k);
      current = step(current);
    }
    if (weight > 0.0) {
      for (std::size_t s = 0; s < n; ++s)
        result[s] += weight * current[s];
      covered += weight;
    }
    if (covered >= 1.0 - eps)
      break;
  }
  return result;
}

}  // namespace

std::vector<double> transient_distribution(const ConcreteCtmc& ctmc, double t,
                                           double eps) {
  std::vector<double> current = ctmc.initial;
  if (t <= 0.0)
    return current;

  double max_exit = 0.0;
  for (double e : ctmc.exit_rates)
    max_exit = std::max(max_exit, e);
  if (!(max_exit > 0.0))
    return current;
  const double lambda = 1.02 * max_exit;

  // Split long horizons so the leading Poisson weight never underflows.
  const double max_lt_per_chunk = 500.0;
  const std::size_t chunks =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(lambda * t /
                                                                  max_lt_per_chunk)));
  const double chunk_t = t / static_cast<double>(chunks);
  const double chunk_eps = eps / static_cast<double>(chunks);
  for (std::size_t i = 0; i < chunks; ++i)
    current = uniformization_chunk(ctmc, std::move(current), lambda, chunk_t, chunk_eps);
  return current;
}

namespace {

std::vector<bool> can_reach(const ConcreteCtmc& ctmc, const std::vector<bool>& in_target) {
  // Backward reachability over the transition graph.
  std::vector<std::vector<std::uint32_t>> predecessors(ctmc.size());
  for (std::uint32_t s = 0; s < ctmc.size(); ++s)
    for (const auto& [col, rate] : ctmc.rows[s])
      predecessors[col].push_back(s);
  std::vector<bool> reaches(ctmc.size(), false);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < ctmc.size(); ++s)
    if (in_target[s]) {
      reaches[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    for (std::uint32_t p : predecessors[s])
      if (!reaches[p]) {
        reaches[p] = true;
        queue.push_back(p);
      }
  }
  return reaches;
}

}  // namespace

std::vector<double> mean_hitting_time(const ConcreteCtmc& ctmc,
                                      const std::function<bool(const State&)>& target) {
  const std::size_t n = ctmc.size();
  std::vector<bool> in_target(n);
  for (std::uint32_t s = 0; s < n; ++s)
    in_target[s] = target(ctmc.states[s]);
  std::vector<bool> reaches = can_reach(ctmc, in_target);

  // Unknowns: states that reach the target but are not inside it.
  std::vector<std::int64_t> unknown_index(n, -1);
  std::vector<std::uint32_t> unknowns;
  for (std::uint32_t s = 0; s < n; ++s)
    if (reaches[s] && !in_target[s]) {
      unknown_index[s] = static_cast<std::int64_t>(unknowns.size());
      unknowns.push_back(s);
    }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> hitting(n, inf);
  for (std::uint32_t s = 0; s < n; ++s)
    if (in_target[s])
      hitting[s] = 0.0;
  if (unknowns.empty())
    return hitting;

  // E(s) h(s) - sum_{s' not target} R(s,s') h(s') = 1. A transition into a
  // non-target state that cannot reach the target makes h(s) infinite too.
  const std::size_t m = unknowns.size();
  for (std::uint32_t s : unknowns)
    for (const auto& [col, rate] : ctmc.rows[s])
      if (!reaches[col])
        hitting[s] = inf;  // positive chance of escaping the target forever
  // Assemble only rows whose hitting time is finite by the argument above;
  // escape routes make the expectation diverge.
  std::vector<bool> finite(n, false);
  for (std::uint32_t s = 0; s < n; ++s)
    finite[s] = reaches[s];
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t s : unknowns) {
      if (!finite[s])
        continue;
      for (const auto& [col, rate] : ctmc.rows[s])
        if (!finite[col]) {
          finite[s] = false;
          changed = true;
          break;
        }
    }
  }

  std::vector<std::int64_t> solve_index(n, -1);
  std::vector<std::uint32_t> solve_states;
  for (std::uint32_t s : unknowns)
    if (finite[s]) {
      solve_index[s] = static_cast<std::int64_t>(solve_states.size());
      solve_states.push_back(s);
    }
  for (std::uint32_t s : unknowns)
    if (!finite[s])
      hitting[s] = inf;
  if (solve_states.empty())
    return hitting;

  const std::size_t k = solve_states.size();
  if (k < 10000) {
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(k),
                                  static_cast<Eigen::Index>(k));
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd b = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k));
    for (std::size_t row = 0; row < k; ++row) {
      std::uint32_t s = solve_states[row];
      triplets.emplace_back(row, row, ctmc.exit_rates[s]);
      for (const auto& [col, rate] : ctmc.rows[s]) {
        if (in_target[col])
          continue;
        triplets.emplace_back(row, solve_index[col], -rate);
      }
    }
    a.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.compute(a);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("hitting-time system is singular");
    Eigen::VectorXd h = solver.solve(b);
    for (std::size_t row = 0; row < k; ++row)
      hitting[solve_states[row]] = h(static_cast<Eigen::Index>(row));
    return hitting;
  }

  // Damped Gauss-Seidel sweeps for larger systems.
  std::vector<double> h(k, 0.0);
  const double damping = 0.9;
  for (int sweep = 0; sweep < 20000; ++sweep) {
    double worst = 0.0;
    for (std::size_t row = 0; row < k; ++row) {
      std::uint32_t s = solve_states[row];
      double sum = 1.0;
      for (const auto& [col, rate] : ctmc.rows[s])
        if (!in_target[col])
          sum += rate * h[solve_index[col]];
      double updated = sum / ctmc.exit_rates[s];
      double next = damping * updated + (1.0 - damping) * h[row];
      worst = std::max(worst, std::abs(next - h[row]));
      h[row] = next;
    }
    if (worst < 1e-12)
      break;
  }
  for (std::size_t row = 0; row < k; ++row)
    hitting[solve_states[row]] = h[row];
  return hitting;
}

std::vector<double> bscc_steady_state(const ConcreteCtmc& ctmc,
                                      const std::vector<std::uint32_t>& bscc) {
  if (bscc.empty())
    throw std::invalid_argument("empty component");
  std::set<std::uint32_t> member_set(bscc.begin(), bscc.end());
  for (std::uint32_t s : bscc)
    for (const auto& [col, rate] : ctmc.rows[s])
      if (!member_set.count(col))
        throw std::invalid_argument("set is not bottom: transition leaves it");

  std::vector<std::uint32_t> members(bscc.begin(), bscc.end());
  std::sort(members.begin(), members.end());
  std::map<std::uint32_t, std::size_t> local;
  for (std::size_t i = 0; i < members.size(); ++i)
    local[members[i]] = i;

  std::vector<std::vector<std::uint32_t>> successors(members.size());
  for (std::size_t i = 0; i < members.size(); ++i)
    for (const auto& [col, rate] : ctmc.rows[members[i]])
      successors[i].push_back(static_cast<std::uint32_t>(local.at(col)));
  if (strongly_connected_components(successors).size() != 1)
    throw std::invalid_argument("set is not strongly connected");

  const std::size_t k = members.size();
  if (k == 1)
    return {1.0};

  // pi Q = 0 with sum(pi) = 1; solve Q^T pi = 0 with one balance row replaced
  // by the normalization.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                            static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    std::uint32_t s = members[i];
    double exit = 0.0;
    for (const auto& [col, rate] : ctmc.rows[s]) {
      a(static_cast<Eigen::Index>(local.at(col)), static_cast<Eigen::Index>(i)) += rate;
      exit += rate;
    }
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= exit;
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i)
    a(0, static_cast<Eigen::Index>(i)) = 1.0;
  b(0) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);
  std::vector<double> result(k);
  for (std::size_t i = 0; i < k; ++i)
    result[i] = pi(static_cast<Eigen::Index>(i));
  return result;
}

TimedRun ssa_sample(const Crn& crn, double horizon, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  TimedRun run;
  State current = crn.initial_state;
  double elapsed = 0.0;
  while (true) {
    std::vector<double> rates;
    double total = 0.0;
    for (const Reaction& reaction : crn.reactions) {
      double rate = propensity(crn, reaction, current);
      rates.push_back(rate);
      total += rate;
    }
    if (!(total > 0.0))
      break;  // absorbing
    // Inverse-transform draws keep runs reproducible across platforms.
    double u = uniform(rng);
    double wait = -std::log(1.0 - u) / total;
    if (elapsed + wait > horizon) {
      break;
    }
    elapsed += wait;
    double pick = uniform(rng) * total;
    std::size_t chosen = 0;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      cumulative += rates[i];
      if (pick <= cumulative) {
        chosen = i;
        break;
      }
    }
    run.steps.push_back({current, wait});
    current = apply_reaction(current, crn.reactions[chosen]);
  }
  run.final_state = current;
  return run;
}

void dump_triplets(const ConcreteCtmc& ctmc, std::ostream& os) {
  os.precision(17);
  for (std::uint32_t s = 0; s < ctmc.size(); ++s)
    for (const auto& [col, rate] : ctmc.rows[s])
      os << s << ' ' << col << ' ' << rate << '\n';
}

}  // namespace sqcrn
