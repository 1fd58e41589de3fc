#pragma once

#include <string>

#include "sqcrn/analysis.hpp"
#include "sqcrn/pruning.hpp"

namespace sqcrn {

// DOT rendering of the abstract CTMC. One node per state labeled with the
// per-species interval text; edge labels carry "reaction, 10^m". With a
// pruned graph, pruned-away edges are dashed (or omitted when kept_only);
// with a report, kept edges are colored by iteration index. Node and edge
// order follow state/transition ids, so output is deterministic.
std::string export_dot(const AbstractCtmc& actmc, const PrunedGraph* pruned = nullptr,
                       const AnalysisReport* report = nullptr, bool kept_only = false);

}  // namespace sqcrn
