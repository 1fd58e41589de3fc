#include "sqcrn/analysis.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>

#include "sqcrn/magnitude.hpp"
#include "sqcrn/scc.hpp"

namespace sqcrn {

const ComponentRecord* AnalysisReport::component_of_state(std::uint32_t state) const {
  const ComponentRecord* found = nullptr;
  for (const ComponentRecord& c : components)
    if (!c.superseded && std::binary_search(c.members.begin(), c.members.end(), state))
      found = &c;
  return found;
}

std::vector<std::uint32_t> AnalysisReport::bottom_components() const {
  std::vector<std::uint32_t> ids;
  for (const ComponentRecord& c : components)
    if (!c.superseded && c.kind == ComponentKind::confirmed_bottom)
      ids.push_back(c.id);
  return ids;
}

namespace {

struct MinStaying {
  double rate = 0.0;
  std::uint64_t occurrences = 0;
};

MinStaying min_staying(const PrunedGraph& pruned, const std::vector<std::uint32_t>& members) {
  MinStaying result;
  for (std::uint32_t s : members) {
    double staying = pruned.staying_rate(s);
    if (!(staying > 0.0))
      continue;
    if (result.occurrences == 0 || staying < result.rate) {
      result.rate = staying;
      result.occurrences = 1;
    } else if (staying == result.rate) {
      ++result.occurrences;
    }
  }
  return result;
}

}  // namespace

std::vector<SteadyStateEntry> component_steady_state(const PrunedGraph& pruned,
                                                     const std::vector<std::uint32_t>& members) {
  std::vector<SteadyStateEntry> entries;
  MinStaying min = min_staying(pruned, members);
  double total = 0.0;
  for (std::uint32_t s : members) {
    double staying = pruned.staying_rate(s);
    // A lone absorbing state has no staying rate; all mass sits on it.
    double weight = staying > 0.0
                        ? min.rate / (static_cast<double>(min.occurrences) * staying)
                        : 1.0;
    entries.push_back({s, weight, 0});
    total += weight;
  }
  for (SteadyStateEntry& e : entries)
    e.mag = magnitude(e.weight / total);
  return entries;
}

TimeEstimate transient_time(const std::vector<double>& edge_rates) {
  if (edge_rates.empty())
    return {0.0, 0};
  double min_rate = *std::min_element(edge_rates.begin(), edge_rates.end());
  std::uint64_t occurrences = static_cast<std::uint64_t>(
      std::count(edge_rates.begin(), edge_rates.end(), min_rate));
  TimeEstimate t;
  t.value = static_cast<double>(occurrences) / min_rate;
  t.mag = magnitude(occurrences) - magnitude(min_rate);
  return t;
}

namespace {

template <typename Pred>
double max_exiting_rate(const PrunedGraph& pruned, std::uint32_t state, Pred eligible) {
  const AbstractCtmc& model = *pruned.model;
  double max_rate = 0.0;
  for (std::uint32_t t : model.outgoing[state])
    if (!pruned.is_kept(t) && eligible(t))
      max_rate = std::max(max_rate, model.transitions[t].rate);
  return max_rate;
}

template <typename Pred>
std::vector<std::uint32_t> select_exit_states_filtered(
    const PrunedGraph& pruned, const std::vector<std::uint32_t>& members, Pred eligible) {
  std::vector<std::uint32_t> best;
  int best_ratio = 0;
  for (std::uint32_t s : members) {
    double exiting = max_exiting_rate(pruned, s, eligible);
    if (!(exiting > 0.0))
      continue;
    double staying = pruned.staying_rate(s);
    assert(staying > 0.0);
    int ratio = magnitude(staying) - magnitude(exiting);
    if (best.empty() || ratio < best_ratio) {
      best.assign(1, s);
      best_ratio = ratio;
    } else if (ratio == best_ratio) {
      best.push_back(s);
    }
  }
  return best;
}

template <typename Pred>
TimeEstimate time_to_exit_filtered(const PrunedGraph& pruned,
                                   const std::vector<std::uint32_t>& members,
                                   std::uint32_t exit_state, std::size_t exit_state_count,
                                   Pred eligible) {
  double staying = pruned.staying_rate(exit_state);
  double exiting = max_exiting_rate(pruned, exit_state, eligible);
  MinStaying min = min_staying(pruned, members);
  TimeEstimate t;
  t.value = staying * static_cast<double>(min.occurrences) /
            (static_cast<double>(exit_state_count) * min.rate * exiting);
  t.mag = magnitude(staying) + magnitude(min.occurrences) -
          magnitude(static_cast<std::uint64_t>(exit_state_count)) -
          magnitude(min.rate) - magnitude(exiting);
  return t;
}

}  // namespace

std::vector<std::uint32_t> select_exit_states(const PrunedGraph& pruned,
                                              const std::vector<std::uint32_t>& members) {
  return select_exit_states_filtered(pruned, members, [](std::uint32_t) { return true; });
}

TimeEstimate time_to_exit(const PrunedGraph& pruned,
                          const std::vector<std::uint32_t>& members,
                          std::uint32_t exit_state) {
  auto all = [](std::uint32_t) { return true; };
  std::size_t count = select_exit_states_filtered(pruned, members, all).size();
  return time_to_exit_filtered(pruned, members, exit_state, std::max<std::size_t>(count, 1),
                               all);
}

std::vector<std::pair<double, int>> exit_distribution(
    const PrunedGraph& pruned, const std::vector<std::uint32_t>& members,
    const std::vector<std::pair<std::uint32_t, double>>& exits) {
  std::vector<SteadyStateEntry> steady = component_steady_state(pruned, members);
  std::map<std::uint32_t, double> weight;
  for (const SteadyStateEntry& e : steady)
    weight[e.state] = e.weight;
  std::vector<std::pair<double, int>> shares;
  double total = 0.0;
  for (const auto& [state, rate] : exits) {
    double share = weight.at(state) * rate;
    shares.push_back({share, 0});
    total += share;
  }
  for (auto& [share, mag] : shares) {
    share /= total;
    mag = magnitude(share);
  }
  return shares;
}

// ---------------------------------------------------------------------------

namespace {

class Analyzer {
 public:
  Analyzer(const AbstractCtmc& model, const PrunedGraph& pruned)
      : model_(model), pruned_(pruned) {}

  AnalysisReport run();

 private:
  struct Comp {
    std::vector<std::uint32_t> members;
    int iteration = 0;
    ComponentKind kind = ComponentKind::candidate;
    bool from_alternation = false;
    bool finalized = false;
    std::uint32_t superseded_by = kNoId;
    std::set<std::uint32_t> records;        // analysed exit transitions
    std::map<std::uint32_t, double> scale;  // per-state steady-state rescale
    std::optional<double> last_time_to_exit;
    int rounds = 0;
    std::vector<SteadyStateEntry> steady;
    bool steady_approximate = false;
  };

  struct Discovery {
    std::uint32_t component = kNoId;
    bool created = false;
    std::vector<std::uint32_t> path_states;
    std::vector<std::uint32_t> path_edges;
  };

  const AbstractCtmc& model_;
  const PrunedGraph& pruned_;

  std::vector<std::uint32_t> scc_of_;
  std::vector<std::vector<std::uint32_t>> sccs_;
  std::vector<bool> scc_candidate_;

  std::vector<Comp> comps_;
  std::vector<std::uint32_t> comp_of_state_;
  std::vector<std::vector<std::uint32_t>> history_;  // component DAG, parent -> child
  std::deque<std::uint32_t> worklist_;
  std::vector<int> transition_iteration_;
  AnalysisReport report_;

  std::uint32_t live(std::uint32_t comp) const {
    while (comp != kNoId && comps_[comp].superseded_by != kNoId)
      comp = comps_[comp].superseded_by;
    return comp;
  }

  std::uint32_t component_of(std::uint32_t state) const {
    return live(comp_of_state_[state]);
  }

  void assign_iteration(std::uint32_t transition, int iteration) {
    if (transition_iteration_[transition] == -1)
      transition_iteration_[transition] = iteration;
  }

  bool is_member(std::uint32_t comp, std::uint32_t state) const {
    const auto& members = comps_[comp].members;
    return std::binary_search(members.begin(), members.end(), state);
  }

  // True when `descendant` is reachable from `ancestor` in the history DAG,
  // i.e. the analysis previously flowed from `ancestor` towards `descendant`.
  bool is_ancestor(std::uint32_t ancestor, std::uint32_t descendant) const;

  std::uint32_t make_component(std::vector<std::uint32_t> members, int iteration,
                               ComponentKind kind);
  std::uint32_t create_from_scc(std::uint32_t scc, int iteration);
  std::vector<Discovery> discover(std::uint32_t entry, int iteration,
                                  bool ignore_entry_component);
  void record_path(const Discovery& d, std::uint32_t via, std::uint32_t entry,
                   int iteration);
  void pop_and_process(std::uint32_t comp_id);
  void exit_round(std::uint32_t comp_id);
  void flow_through(std::uint32_t comp_id);
  std::uint32_t grow(std::uint32_t comp_id, const Discovery& d, double factor);
  std::uint32_t alternation_merge(std::uint32_t earlier, std::uint32_t current);
  void emit_steady(std::uint32_t comp_id);
  void finalize_report();
};

bool Analyzer::is_ancestor(std::uint32_t ancestor, std::uint32_t descendant) const {
  std::set<std::uint32_t> seen;
  std::deque<std::uint32_t> queue{ancestor};
  while (!queue.empty()) {
    std::uint32_t c = queue.front();
    queue.pop_front();
    if (c == descendant)
      return true;
    if (!seen.insert(c).second)
      continue;
    for (std::uint32_t next : history_[c])
      queue.push_back(next);
  }
  return false;
}

std::uint32_t Analyzer::make_component(std::vector<std::uint32_t> members, int iteration,
                                       ComponentKind kind) {
  Comp c;
  std::sort(members.begin(), members.end());
  c.members = std::move(members);
  c.iteration = iteration;
  c.kind = kind;
  std::uint32_t id = static_cast<std::uint32_t>(comps_.size());
  comps_.push_back(std::move(c));
  history_.emplace_back();
  for (std::uint32_t s : comps_[id].members)
    comp_of_state_[s] = id;
  return id;
}

std::uint32_t Analyzer::create_from_scc(std::uint32_t scc, int iteration) {
  std::uint32_t id = make_component(sccs_[scc], iteration, ComponentKind::candidate);
  for (std::uint32_t s : comps_[id].members)
    for (std::uint32_t t : model_.outgoing[s])
      if (pruned_.is_kept(t) && is_member(id, model_.transitions[t].target))
        assign_iteration(t, iteration);
  return id;
}

std::vector<Analyzer::Discovery> Analyzer::discover(std::uint32_t entry, int iteration,
                                                    bool ignore_entry_component) {
  std::vector<Discovery> found;
  std::map<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>> parent;
  std::set<std::uint32_t> visited;
  std::set<std::uint32_t> reported;
  std::deque<std::uint32_t> queue;

  auto reconstruct = [&](std::uint32_t terminal, Discovery& d) {
    std::uint32_t s = terminal;
    while (s != entry) {
      auto [prev, edge] = parent.at(s);
      d.path_edges.push_back(edge);
      d.path_states.push_back(prev);
      s = prev;
    }
    std::reverse(d.path_states.begin(), d.path_states.end());
    std::reverse(d.path_edges.begin(), d.path_edges.end());
  };

  visited.insert(entry);
  queue.push_back(entry);
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();

    std::uint32_t terminal = kNoId;
    bool created = false;
    std::uint32_t comp = component_of(s);
    if (comp != kNoId && !(ignore_entry_component && s == entry)) {
      terminal = comp;
    } else if (comp == kNoId && scc_candidate_[scc_of_[s]]) {
      terminal = create_from_scc(scc_of_[s], iteration);
      created = true;
    }
    if (terminal != kNoId) {
      if (reported.insert(terminal).second) {
        Discovery d;
        d.component = terminal;
        d.created = created;
        reconstruct(s, d);
        found.push_back(std::move(d));
      }
      continue;
    }

    for (std::uint32_t t : model_.outgoing[s]) {
      if (!pruned_.is_kept(t))
        continue;
      assign_iteration(t, iteration);
      std::uint32_t next = model_.transitions[t].target;
      if (visited.insert(next).second) {
        parent[next] = {s, t};
        queue.push_back(next);
      }
    }
  }
  return found;
}

void Analyzer::record_path(const Discovery& d, std::uint32_t via, std::uint32_t entry,
                           int iteration) {
  PathRecord p;
  p.via_transition = via;
  p.entry_state = entry;
  p.to_component = d.component;
  p.states = d.path_states;
  std::vector<double> rates;
  rates.reserve(d.path_edges.size());
  for (std::uint32_t t : d.path_edges)
    rates.push_back(model_.transitions[t].rate);
  p.time = transient_time(rates);
  if (!rates.empty()) {
    p.min_rate = *std::min_element(rates.begin(), rates.end());
    p.occurrences =
        static_cast<std::uint64_t>(std::count(rates.begin(), rates.end(), p.min_rate));
  }
  p.iteration = iteration;
  report_.paths.push_back(std::move(p));
}

void Analyzer::emit_steady(std::uint32_t comp_id) {
  Comp& c = comps_[comp_id];
  c.steady = component_steady_state(pruned_, c.members);
  if (!c.scale.empty()) {
    double total = 0.0;
    for (SteadyStateEntry& e : c.steady) {
      auto it = c.scale.find(e.state);
      if (it != c.scale.end())
        e.weight *= it->second;
      total += e.weight;
    }
    for (SteadyStateEntry& e : c.steady)
      e.mag = magnitude(e.weight / total);
    c.steady_approximate = true;
  }
}

std::uint32_t Analyzer::grow(std::uint32_t comp_id, const Discovery& d, double factor) {
  std::vector<std::uint32_t> members = comps_[comp_id].members;
  std::vector<std::uint32_t> added;
  for (std::uint32_t s : d.path_states)
    if (component_of(s) == kNoId) {
      members.push_back(s);
      added.push_back(s);
    }
  if (added.empty())
    return comp_id;

  const int iteration = comps_[comp_id].iteration;
  const ComponentKind kind = comps_[comp_id].kind;
  const bool from_alternation = comps_[comp_id].from_alternation;
  auto records = comps_[comp_id].records;
  auto scale = comps_[comp_id].scale;
  const int rounds = comps_[comp_id].rounds;

  std::uint32_t id = make_component(std::move(members), iteration, kind);
  Comp& merged = comps_[id];
  merged.from_alternation = from_alternation;
  merged.records = std::move(records);
  merged.scale = std::move(scale);
  merged.rounds = rounds;
  for (std::uint32_t s : added)
    merged.scale[s] = factor;
  comps_[comp_id].superseded_by = id;
  history_[comp_id].push_back(id);

  MergeEvent event;
  event.kind = MergeEvent::Kind::grow;
  event.result = id;
  event.parts = {comp_id};
  event.iteration = iteration;
  report_.merges.push_back(event);
  return id;
}

std::uint32_t Analyzer::alternation_merge(std::uint32_t earlier, std::uint32_t current) {
  // Everything the analysis visited between the two, inclusive: components on
  // history paths from `earlier` to `current`.
  std::set<std::uint32_t> forward;
  std::deque<std::uint32_t> queue{earlier};
  while (!queue.empty()) {
    std::uint32_t c = queue.front();
    queue.pop_front();
    if (!forward.insert(c).second)
      continue;
    for (std::uint32_t next : history_[c])
      queue.push_back(next);
  }
  std::vector<std::vector<std::uint32_t>> parents(history_.size());
  for (std::uint32_t p = 0; p < history_.size(); ++p)
    for (std::uint32_t child : history_[p])
      parents[child].push_back(p);
  std::set<std::uint32_t> on_path{earlier, current};
  std::set<std::uint32_t> seen;
  std::deque<std::uint32_t> back{current};
  while (!back.empty()) {
    std::uint32_t c = back.front();
    back.pop_front();
    if (!seen.insert(c).second)
      continue;
    if (forward.count(c))
      on_path.insert(c);
    for (std::uint32_t p : parents[c])
      if (forward.count(p))
        back.push_back(p);
  }

  std::set<std::uint32_t> parts;
  for (std::uint32_t c : on_path)
    parts.insert(live(c));

  std::vector<std::uint32_t> members;
  std::set<std::uint32_t> records;
  std::map<std::uint32_t, double> scale;
  int iteration = 0;
  bool have_iteration = false;
  // Residence time per alternation cycle: the recorded time to exit, or a
  // plain sojourn when the part never had an exit analysis (the seed). The
  // times are normalized to cycle fractions so the scales stay dimensionless.
  std::map<std::uint32_t, double> residence;
  double cycle_time = 0.0;
  for (std::uint32_t c : parts) {
    const Comp& part = comps_[c];
    double time = 1.0;
    if (part.last_time_to_exit) {
      time = *part.last_time_to_exit;
    } else {
      double staying = 0.0;
      for (std::uint32_t s : part.members)
        staying = std::max(staying, pruned_.staying_rate(s));
      if (staying > 0.0)
        time = 1.0 / staying;
    }
    residence[c] = time;
    cycle_time += time;
  }
  for (std::uint32_t c : parts) {
    const Comp& part = comps_[c];
    members.insert(members.end(), part.members.begin(), part.members.end());
    records.insert(part.records.begin(), part.records.end());
    double factor = residence[c] / cycle_time;
    for (std::uint32_t s : part.members) {
      auto it = part.scale.find(s);
      scale[s] = (it != part.scale.end() ? it->second : 1.0) * factor;
    }
    if (part.kind != ComponentKind::seed) {
      iteration = have_iteration ? std::min(iteration, part.iteration) : part.iteration;
      have_iteration = true;
    }
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  std::uint32_t id = make_component(std::move(members), have_iteration ? iteration : 1,
                                    ComponentKind::transient_merged);
  {
    Comp& merged = comps_[id];
    merged.from_alternation = true;
    merged.records = std::move(records);
    merged.scale = std::move(scale);
  }
  MergeEvent event;
  event.kind = MergeEvent::Kind::alternation;
  event.result = id;
  event.parts.assign(parts.begin(), parts.end());
  event.iteration = comps_[id].iteration;
  report_.merges.push_back(event);
  for (std::uint32_t c : parts) {
    comps_[c].superseded_by = id;
    history_[c].push_back(id);
  }
  return id;
}

void Analyzer::exit_round(std::uint32_t comp_id) {
  const int round = ++comps_[comp_id].rounds;
  const int iteration = comps_[comp_id].iteration;
  auto unrecorded = [&](std::uint32_t t) { return !comps_[comp_id].records.count(t); };

  std::vector<std::uint32_t> exit_states =
      select_exit_states_filtered(pruned_, comps_[comp_id].members, unrecorded);
  assert(!exit_states.empty());

  struct RoundRecord {
    std::uint32_t state;
    std::uint32_t transition;
    double staying, exiting;
    TimeEstimate tte;
  };
  std::vector<RoundRecord> round_records;
  for (std::uint32_t s : exit_states) {
    double exiting = max_exiting_rate(pruned_, s, unrecorded);
    int exiting_mag = magnitude(exiting);
    TimeEstimate tte = time_to_exit_filtered(pruned_, comps_[comp_id].members, s,
                                             exit_states.size(), unrecorded);
    comps_[comp_id].last_time_to_exit = tte.value;
    for (std::uint32_t t : model_.outgoing[s]) {
      if (pruned_.is_kept(t) || !unrecorded(t))
        continue;
      if (magnitude(model_.transitions[t].rate) != exiting_mag)
        continue;
      round_records.push_back({s, t, pruned_.staying_rate(s), exiting, tte});
    }
  }

  std::map<std::uint32_t, double> weight;
  for (const SteadyStateEntry& e : comps_[comp_id].steady)
    weight[e.state] = e.weight;
  double total = 0.0;
  for (const RoundRecord& r : round_records)
    total += weight.at(r.state) * model_.transitions[r.transition].rate;

  std::vector<std::uint32_t> record_ids;
  for (const RoundRecord& r : round_records) {
    comps_[comp_id].records.insert(r.transition);
    assign_iteration(r.transition, iteration + 1);
    ExitRecord record;
    record.component = comp_id;
    record.state = r.state;
    record.transition = r.transition;
    record.staying_rate = r.staying;
    record.exiting_rate = r.exiting;
    record.time_to_exit = r.tte;
    record.share = weight.at(r.state) * model_.transitions[r.transition].rate / total;
    record.share_mag = magnitude(record.share);
    record.iteration = iteration + 1;
    record.round = round;
    record.internal = is_member(comp_id, model_.transitions[r.transition].target);
    record_ids.push_back(static_cast<std::uint32_t>(report_.exits.size()));
    report_.exits.push_back(record);
  }

  // Structural consequences, in record order. Component storage may grow
  // below, so everything is re-looked-up by id.
  for (std::uint32_t record_id : record_ids) {
    const std::uint32_t transition = report_.exits[record_id].transition;
    const std::uint32_t target = model_.transitions[transition].target;
    std::uint32_t current = live(comp_id);
    if (is_member(current, target)) {
      report_.exits[record_id].internal = true;
      continue;
    }
    std::uint32_t target_comp = component_of(target);
    if (target_comp != kNoId) {
      history_[current].push_back(target_comp);
      if (target_comp != current && is_ancestor(target_comp, current))
        worklist_.push_back(alternation_merge(target_comp, current));
      continue;
    }
    const int next_iteration = comps_[current].iteration + 1;
    for (const Discovery& d : discover(target, next_iteration, false)) {
      record_path(d, transition, target, next_iteration);
      current = live(comp_id);
      std::uint32_t found = live(d.component);
      if (found == current) {
        double factor =
            report_.exits[record_id].exiting_rate / report_.exits[record_id].staying_rate;
        std::uint32_t grown = grow(current, d, factor);
        if (grown != current)
          worklist_.push_back(grown);
      } else if (d.created) {
        history_[current].push_back(found);
        worklist_.push_back(found);
      } else {
        history_[current].push_back(found);
        if (is_ancestor(found, current))
          worklist_.push_back(alternation_merge(found, current));
      }
    }
  }

  if (live(comp_id) == comp_id && !comps_[comp_id].finalized)
    worklist_.push_back(comp_id);
}

void Analyzer::flow_through(std::uint32_t comp_id) {
  const std::vector<std::uint32_t> members = comps_[comp_id].members;
  const int next_iteration = comps_[comp_id].iteration + 1;
  for (std::uint32_t s : members) {
    for (std::uint32_t t : model_.outgoing[s]) {
      if (!pruned_.is_kept(t))
        continue;
      std::uint32_t target = model_.transitions[t].target;
      if (is_member(comp_id, target))
        continue;
      assign_iteration(t, next_iteration);
      std::uint32_t target_comp = component_of(target);
      if (target_comp != kNoId) {
        if (target_comp != comp_id)
          history_[comp_id].push_back(target_comp);
        continue;
      }
      for (const Discovery& d : discover(target, next_iteration, false)) {
        record_path(d, t, target, next_iteration);
        std::uint32_t found = live(d.component);
        if (found == comp_id)
          continue;
        history_[comp_id].push_back(found);
        if (d.created)
          worklist_.push_back(found);
      }
    }
  }
}

void Analyzer::pop_and_process(std::uint32_t comp_id) {
  if (comps_[comp_id].superseded_by != kNoId || comps_[comp_id].finalized)
    return;
  emit_steady(comp_id);

  bool has_unrecorded = false;
  for (std::uint32_t s : comps_[comp_id].members)
    for (std::uint32_t t : model_.outgoing[s])
      if (!pruned_.is_kept(t) && !comps_[comp_id].records.count(t))
        has_unrecorded = true;
  if (has_unrecorded) {
    exit_round(comp_id);
    return;
  }

  bool kept_leaving = false;
  for (std::uint32_t s : comps_[comp_id].members)
    for (std::uint32_t t : model_.outgoing[s])
      if (pruned_.is_kept(t) && !is_member(comp_id, model_.transitions[t].target))
        kept_leaving = true;

  if (kept_leaving && !comps_[comp_id].from_alternation) {
    flow_through(comp_id);
    comps_[comp_id].finalized = true;
    return;
  }

  if (!kept_leaving && comps_[comp_id].records.empty() &&
      comps_[comp_id].kind == ComponentKind::candidate)
    comps_[comp_id].kind = ComponentKind::confirmed_bottom;
  comps_[comp_id].finalized = true;
}

AnalysisReport Analyzer::run() {
  const std::size_t n = model_.state_count();
  report_.prune_level = pruned_.level;
  transition_iteration_.assign(model_.transitions.size(), -1);
  comp_of_state_.assign(n, kNoId);

  std::vector<std::vector<std::uint32_t>> kept_successors(n);
  for (std::uint32_t s = 0; s < n; ++s)
    kept_successors[s] = pruned_.kept_successors(s);
  sccs_ = strongly_connected_components(kept_successors);
  scc_of_.assign(n, 0);
  for (std::uint32_t i = 0; i < sccs_.size(); ++i)
    for (std::uint32_t s : sccs_[i])
      scc_of_[s] = i;

  // Candidate components: where a trajectory can settle for a while.
  scc_candidate_.assign(sccs_.size(), false);
  for (std::uint32_t i = 0; i < sccs_.size(); ++i) {
    if (sccs_[i].size() >= 2) {
      scc_candidate_[i] = true;
      continue;
    }
    std::uint32_t s = sccs_[i].front();
    bool out = false, self_loop = false;
    for (std::uint32_t t : model_.outgoing[s]) {
      if (!pruned_.is_kept(t))
        continue;
      if (model_.transitions[t].target == s)
        self_loop = true;
      else
        out = true;
    }
    scc_candidate_[i] = self_loop || !out;
  }

  std::uint32_t init = model_.initial;
  std::uint32_t seed = kNoId;
  if (!scc_candidate_[scc_of_[init]])
    seed = make_component({init}, 0, ComponentKind::seed);
  for (const Discovery& d : discover(init, 1, seed != kNoId)) {
    record_path(d, kNoId, init, 1);
    if (seed != kNoId)
      history_[seed].push_back(d.component);
    worklist_.push_back(d.component);
  }
  if (seed != kNoId)
    comps_[seed].finalized = true;

  const std::size_t pop_limit = 100 * (n + model_.transitions.size()) + 100;
  std::size_t pops = 0;
  while (!worklist_.empty()) {
    if (++pops > pop_limit)
      throw std::logic_error("analysis worklist failed to terminate");
    std::uint32_t comp = worklist_.front();
    worklist_.pop_front();
    pop_and_process(comp);
  }

  finalize_report();
  return std::move(report_);
}

void Analyzer::finalize_report() {
  for (std::uint32_t id = 0; id < comps_.size(); ++id) {
    const Comp& c = comps_[id];
    ComponentRecord record;
    record.id = id;
    record.iteration = c.iteration;
    record.kind = c.kind;
    record.members = c.members;
    record.steady = c.steady;
    record.steady_approximate = c.steady_approximate;
    record.superseded = c.superseded_by != kNoId;
    record.superseded_by = c.superseded_by;
    report_.components.push_back(std::move(record));
  }
  report_.transition_iteration = transition_iteration_;
}

}  // namespace

AnalysisReport analyze(const AbstractCtmc& model, const PrunedGraph& pruned) {
  return Analyzer(model, pruned).run();
}

}  // namespace sqcrn
