#include "sqcrn/report_io.hpp"

#include <sstream>

#include <json.hpp>

namespace sqcrn {

using ordered_json = nlohmann::ordered_json;

const char* component_kind_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::seed:
      return "seed";
    case ComponentKind::candidate:
      return "candidate";
    case ComponentKind::confirmed_bottom:
      return "confirmed-bottom";
    case ComponentKind::transient_merged:
      return "transient-merged";
  }
  return "unknown";
}

namespace {

ordered_json time_json(const TimeEstimate& t) {
  return ordered_json{{"value", t.value}, {"magnitude", t.mag}};
}

}  // namespace

std::string report_to_json(const AbstractCtmc& actmc, const AnalysisReport& report) {
  ordered_json j;
  j["schema"] = "sqcrn-report-1";
  j["prune_level"] = report.prune_level;

  ordered_json components = ordered_json::array();
  for (const ComponentRecord& c : report.components) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["iteration"] = c.iteration;
    jc["kind"] = component_kind_name(c.kind);
    jc["superseded"] = c.superseded;
    ordered_json members = ordered_json::array();
    for (std::uint32_t s : c.members)
      members.push_back(actmc.labels[s]);
    jc["states"] = std::move(members);
    ordered_json steady = ordered_json::array();
    for (const SteadyStateEntry& e : c.steady) {
      steady.push_back(ordered_json{{"state", actmc.labels[e.state]},
                                    {"weight", e.weight},
                                    {"magnitude", e.mag}});
    }
    jc["steady_state"] = std::move(steady);
    jc["steady_state_approximate"] = c.steady_approximate;
    components.push_back(std::move(jc));
  }
  j["components"] = std::move(components);

  ordered_json exits = ordered_json::array();
  for (const ExitRecord& e : report.exits) {
    const AbstractTransition& tr = actmc.transitions[e.transition];
    exits.push_back(ordered_json{
        {"component", e.component},
        {"state", actmc.labels[e.state]},
        {"reaction", actmc.reaction_name(tr.reaction)},
        {"target", actmc.labels[tr.target]},
        {"staying_rate", e.staying_rate},
        {"exiting_rate", e.exiting_rate},
        {"time_to_exit", time_json(e.time_to_exit)},
        {"share", e.share},
        {"share_magnitude", e.share_mag},
        {"iteration", e.iteration},
        {"round", e.round},
        {"internal", e.internal}});
  }
  j["exits"] = std::move(exits);

  ordered_json paths = ordered_json::array();
  for (const PathRecord& p : report.paths) {
    ordered_json jp;
    jp["via"] = p.via_transition == kNoId
                    ? "initial"
                    : actmc.reaction_name(actmc.transitions[p.via_transition].reaction);
    jp["entry"] = actmc.labels[p.entry_state];
    jp["component"] = p.to_component;
    ordered_json states = ordered_json::array();
    for (std::uint32_t s : p.states)
      states.push_back(actmc.labels[s]);
    jp["states"] = std::move(states);
    jp["min_rate"] = p.min_rate;
    jp["occurrences"] = p.occurrences;
    jp["time"] = time_json(p.time);
    jp["iteration"] = p.iteration;
    paths.push_back(std::move(jp));
  }
  j["paths"] = std::move(paths);

  ordered_json merges = ordered_json::array();
  for (const MergeEvent& m : report.merges) {
    merges.push_back(ordered_json{
        {"kind", m.kind == MergeEvent::Kind::grow ? "grow" : "alternation"},
        {"result", m.result},
        {"parts", m.parts},
        {"iteration", m.iteration}});
  }
  j["merges"] = std::move(merges);

  ordered_json iterations = ordered_json::array();
  for (std::uint32_t t = 0; t < actmc.transitions.size(); ++t) {
    const AbstractTransition& tr = actmc.transitions[t];
    iterations.push_back(ordered_json{
        {"source", actmc.labels[tr.source]},
        {"reaction", actmc.reaction_name(tr.reaction)},
        {"target", actmc.labels[tr.target]},
        {"rate", tr.rate},
        {"magnitude", tr.magnitude},
        {"accelerated", tr.accelerated},
        {"steps", tr.steps},
        {"iteration", report.transition_iteration[t]}});
  }
  j["transitions"] = std::move(iterations);

  return j.dump(2) + "\n";
}

std::string report_to_text(const AbstractCtmc& actmc, const AnalysisReport& report) {
  std::ostringstream os;
  os << "analysis at pruning level " << report.prune_level << "\n";
  for (const ComponentRecord& c : report.components) {
    if (c.kind == ComponentKind::seed)
      continue;
    os << "\ncomponent " << c.id << " (iteration " << c.iteration << ", "
       << component_kind_name(c.kind) << (c.superseded ? ", superseded" : "") << ")\n";
    for (const SteadyStateEntry& e : c.steady)
      os << "  ~" << actmc.labels[e.state] << "  weight " << e.weight << "  10^"
         << e.mag << "\n";
    for (const ExitRecord& e : report.exits) {
      if (e.component != c.id)
        continue;
      const AbstractTransition& tr = actmc.transitions[e.transition];
      os << "  exit via " << actmc.reaction_name(tr.reaction) << " from "
         << actmc.labels[e.state] << " to " << actmc.labels[tr.target]
         << "  time 10^" << e.time_to_exit.mag << " (" << e.time_to_exit.value
         << ")  share 10^" << e.share_mag << (e.internal ? "  [returns]" : "") << "\n";
    }
  }
  os << "\ntransient paths\n";
  for (const PathRecord& p : report.paths) {
    os << "  -> component " << p.to_component << " entering at "
       << actmc.labels[p.entry_state] << "  time 10^" << p.time.mag << " ("
       << p.time.value << ")  iteration " << p.iteration << "\n";
  }
  return os.str();
}

}  // namespace sqcrn
