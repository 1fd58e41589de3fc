#include "sqcrn/oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "sqcrn/analysis.hpp"
#include "sqcrn/magnitude.hpp"
#include "sqcrn/scc.hpp"

namespace sqcrn {

double abstract_hitting_time(const AbstractCtmc& actmc, const std::vector<bool>& target) {
  const std::size_t n = actmc.state_count();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<std::uint32_t>> predecessors(n);
  for (const AbstractTransition& t : actmc.transitions)
    predecessors[t.target].push_back(t.source);
  std::vector<bool> reaches(n, false);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < n; ++s)
    if (target[s]) {
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
  if (!reaches[actmc.initial])
    return inf;

  // Sure reaching only: a possible escape makes the expectation diverge.
  std::vector<bool> finite = reaches;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t s = 0; s < n; ++s) {
      if (!finite[s] || target[s])
        continue;
      for (std::uint32_t t : actmc.outgoing[s])
        if (!finite[actmc.transitions[t].target]) {
          finite[s] = false;
          changed = true;
          break;
        }
    }
  }
  if (!finite[actmc.initial])
    return inf;

  std::vector<std::int64_t> idx(n, -1);
  std::vector<std::uint32_t> unknowns;
  for (std::uint32_t s = 0; s < n; ++s)
    if (finite[s] && !target[s]) {
      idx[s] = static_cast<std::int64_t>(unknowns.size());
      unknowns.push_back(s);
    }
  if (target[actmc.initial])
    return 0.0;

  const std::size_t k = unknowns.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                            static_cast<Eigen::Index>(k));
  Eigen::VectorXd b = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k));
  for (std::size_t row = 0; row < k; ++row) {
    std::uint32_t s = unknowns[row];
    double exit = 0.0;
    for (std::uint32_t t : actmc.outgoing[s]) {
      const AbstractTransition& tr = actmc.transitions[t];
      exit += tr.rate;
      if (!target[tr.target] && tr.target != s)
        a(static_cast<Eigen::Index>(row), idx[tr.target]) -= tr.rate;
      if (tr.target == s)
        exit -= tr.rate;  // self-loops do not advance the walk
    }
    a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(row)) += exit;
  }
  Eigen::VectorXd h = a.fullPivLu().solve(b);
  return h(idx[actmc.initial]);
}

namespace {

int magnitude_of_time(double t) { return magnitude(t); }

OracleComparison make_entry(std::string quantity, double abstract_value,
                            double oracle_value) {
  OracleComparison entry;
  entry.quantity = std::move(quantity);
  entry.abstract_value = abstract_value;
  entry.oracle_value = oracle_value;
  entry.abstract_mag = magnitude_of_time(abstract_value);
  entry.oracle_mag = magnitude_of_time(oracle_value);
  entry.delta = std::abs(entry.abstract_mag - entry.oracle_mag);
  return entry;
}

OracleComparison skipped_entry(std::string quantity, std::string note) {
  OracleComparison entry;
  entry.quantity = std::move(quantity);
  entry.skipped = true;
  entry.note = std::move(note);
  return entry;
}

bool zero_level_is_zero(const LevelPartition& partition, std::size_t sp) {
  const Interval& first = partition.levels[sp].front();
  return first.singleton() && first.lo == 0;
}

}  // namespace

std::vector<OracleComparison> validate_against_oracle(const Crn& crn,
                                                      const LevelPartition& partition,
                                                      const ValidationOptions& options) {
  std::vector<OracleComparison> entries;
  AbstractCtmc actmc = build_abstraction(crn, partition);

  ConcreteCtmc oracle;
  try {
    oracle = build_bounded_ctmc(crn, options.caps, options.state_limit);
  } catch (const StateLimitError& e) {
    entries.push_back(skipped_entry("oracle", e.what()));
    return entries;
  }

  const double inf = std::numeric_limits<double>::infinity();

  // Extinction times, per species and total.
  auto compare_hitting = [&](const std::string& name,
                             const std::function<bool(const State&)>& concrete_target,
                             const std::vector<bool>& abstract_target) {
    bool any_target = std::find(abstract_target.begin(), abstract_target.end(), true) !=
                      abstract_target.end();
    if (!any_target) {
      entries.push_back(skipped_entry(name, "no abstract state matches the target"));
      return;
    }
    double abstract_time = abstract_hitting_time(actmc, abstract_target);
    std::vector<double> oracle_times = mean_hitting_time(oracle, concrete_target);
    double oracle_time = oracle_times[0];
    if (!std::isfinite(abstract_time) || !std::isfinite(oracle_time) ||
        abstract_time <= 0.0 || oracle_time <= 0.0) {
      if (!std::isfinite(abstract_time) && !std::isfinite(oracle_time))
        entries.push_back(skipped_entry(name, "target unreachable on both sides"));
      else
        entries.push_back(skipped_entry(name, "target reachable on one side only"));
      return;
    }
    entries.push_back(make_entry(name, abstract_time, oracle_time));
  };

  for (std::size_t sp = 0; sp < crn.species.size(); ++sp) {
    std::string name = "extinction time (" + crn.species[sp].name + ")";
    if (!zero_level_is_zero(partition, sp)) {
      entries.push_back(skipped_entry(name, "partition does not isolate zero"));
      continue;
    }
    std::vector<bool> abstract_target(actmc.state_count(), false);
    for (std::uint32_t s = 0; s < actmc.state_count(); ++s)
      abstract_target[s] = actmc.states[s][sp] == 0;
    compare_hitting(
        name, [sp](const State& x) { return x[sp] == 0; }, abstract_target);
  }
  {
    std::vector<bool> abstract_target(actmc.state_count(), false);
    for (std::uint32_t s = 0; s < actmc.state_count(); ++s) {
      bool all_zero = true;
      for (std::size_t sp = 0; sp < crn.species.size(); ++sp)
        if (!(zero_level_is_zero(partition, sp) && actmc.states[s][sp] == 0))
          all_zero = false;
      abstract_target[s] = all_zero;
    }
    compare_hitting(
        "extinction time (all species)",
        [](const State& x) {
          return std::all_of(x.begin(), x.end(), [](Count c) { return c == 0; });
        },
        abstract_target);
  }

  // Bottom steady states: oracle BSCC mass aggregated by abstract state
  // against the matching final component of the pruned analysis.
  {
    PrunedGraph pruned = prune(actmc, 0);
    AnalysisReport report = analyze(actmc, pruned);

    std::vector<std::vector<std::uint32_t>> successors(oracle.size());
    for (std::uint32_t s = 0; s < oracle.size(); ++s)
      for (const auto& [col, rate] : oracle.rows[s])
        successors[s].push_back(col);
    auto sccs = strongly_connected_components(successors);
    for (const auto& scc : sccs) {
      bool bottom = true;
      std::set<std::uint32_t> member_set(scc.begin(), scc.end());
      for (std::uint32_t s : scc)
        for (const auto& [col, rate] : oracle.rows[s])
          if (!member_set.count(col))
            bottom = false;
      if (!bottom)
        continue;
      std::vector<double> pi = bscc_steady_state(oracle, scc);
      std::map<AbstractState, double> aggregated;
      for (std::size_t i = 0; i < scc.size(); ++i)
        aggregated[abstract_state(oracle.states[scc[i]], partition)] += pi[i];

      // The component whose members cover the aggregation, if any.
      const ComponentRecord* match = nullptr;
      for (const ComponentRecord& c : report.components) {
        if (c.superseded || c.kind == ComponentKind::seed)
          continue;
        bool covers = true;
        for (const auto& [astate, mass] : aggregated) {
          bool found = false;
          for (std::uint32_t m : c.members)
            if (actmc.states[m] == astate)
              found = true;
          if (!found)
            covers = false;
        }
        if (covers && (!match || c.members.size() < match->members.size()))
          match = &c;
      }
      std::string name = "bottom steady state (" +
                         std::to_string(scc.front()) + ")";
      if (!match) {
        entries.push_back(skipped_entry(name, "no abstract component covers the BSCC"));
        continue;
      }
      double total = 0.0;
      for (const SteadyStateEntry& e : match->steady)
        total += e.weight;
      for (const auto& [astate, mass] : aggregated) {
        for (const SteadyStateEntry& e : match->steady) {
          if (actmc.states[e.state] != astate)
            continue;
          if (mass > 0.0 && e.weight > 0.0)
            entries.push_back(make_entry(name + " " +
                                             actmc.labels[e.state],
                                         e.weight / total, mass));
        }
      }
    }

    // Seeded SSA extinction frequency against the oracle transient mass.
    if (options.ssa_runs > 0) {
      std::vector<bool> dead(oracle.size(), false);
      std::int64_t zero_state = -1;
      for (std::uint32_t s = 0; s < oracle.size(); ++s)
        if (std::all_of(oracle.states[s].begin(), oracle.states[s].end(),
                        [](Count c) { return c == 0; }))
          zero_state = s;
      if (zero_state >= 0) {
        std::vector<double> hit = mean_hitting_time(oracle, [](const State& x) {
          return std::all_of(x.begin(), x.end(), [](Count c) { return c == 0; });
        });
        double horizon = std::isfinite(hit[0]) ? hit[0] : 0.0;
        if (horizon > 0.0) {
          std::vector<double> at = transient_distribution(oracle, horizon);
          double expected = at[static_cast<std::size_t>(zero_state)];
          unsigned extinct = 0;
          for (unsigned run = 0; run < options.ssa_runs; ++run) {
            TimedRun trace = ssa_sample(crn, horizon, options.ssa_seed + run);
            if (std::all_of(trace.final_state.begin(), trace.final_state.end(),
                            [](Count c) { return c == 0; }))
              ++extinct;
          }
          double frequency = static_cast<double>(extinct) / options.ssa_runs;
          if (frequency > 0.0 && expected > 0.0) {
            OracleComparison entry =
                make_entry("ssa extinction frequency", frequency, expected);
            double sigma =
                std::sqrt(expected * (1.0 - expected) / options.ssa_runs);
            entry.note = std::abs(frequency - expected) <= 3.0 * sigma
                             ? "within 3 sigma"
                             : "outside 3 sigma";
            entries.push_back(std::move(entry));
          } else {
            entries.push_back(skipped_entry("ssa extinction frequency",
                                            "no extinction mass at the horizon"));
          }
        }
      }
    }
  }

  return entries;
}

}  // namespace sqcrn
