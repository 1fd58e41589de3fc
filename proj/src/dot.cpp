#include "sqcrn/dot.hpp"

#include <array>
#include <sstream>

namespace sqcrn {

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\')
      out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// One color class per iteration index, cycled.
const std::array<const char*, 8> kIterationColors = {
    "black",      "red3",    "blue3", "green4",
    "darkorange", "purple3", "cyan4", "magenta3"};

}  // namespace

std::string export_dot(const AbstractCtmc& actmc, const PrunedGraph* pruned,
                       const AnalysisReport* report, bool kept_only) {
  std::ostringstream os;
  os << "digraph abstraction {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box, style=rounded];\n";
  for (std::uint32_t s = 0; s < actmc.state_count(); ++s) {
    os << "  s" << s << " [label=\"" << escape(actmc.labels[s]) << '"';
    if (s == actmc.initial)
      os << ", penwidth=2";
    os << "];\n";
  }
  for (std::uint32_t t = 0; t < actmc.transitions.size(); ++t) {
    const AbstractTransition& tr = actmc.transitions[t];
    bool kept = !pruned || pruned->is_kept(t);
    if (kept_only && !kept)
      continue;
    os << "  s" << tr.source << " -> s" << tr.target << " [label=\""
       << escape(actmc.reaction_name(tr.reaction)) << ", 10^" << tr.magnitude << '"';
    if (!kept)
      os << ", style=dashed";
    else if (report && report->transition_iteration[t] >= 0)
      os << ", color="
         << kIterationColors[static_cast<std::size_t>(report->transition_iteration[t]) %
                             kIterationColors.size()];
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace sqcrn
