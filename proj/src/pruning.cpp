#include "sqcrn/pruning.hpp"

#include <algorithm>

namespace sqcrn {

double PrunedGraph::staying_rate(std::uint32_t state) const {
  double max_rate = 0.0;
  for (std::uint32_t t : model->outgoing[state])
    if (kept[t])
      max_rate = std::max(max_rate, model->transitions[t].rate);
  return max_rate;
}

std::vector<std::uint32_t> PrunedGraph::kept_successors(std::uint32_t state) const {
  std::vector<std::uint32_t> succ;
  for (std::uint32_t t : model->outgoing[state])
    if (kept[t])
      succ.push_back(model->transitions[t].target);
  std::sort(succ.begin(), succ.end());
  succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  return succ;
}

PrunedGraph prune(const AbstractCtmc& actmc, unsigned n) {
  PrunedGraph pruned;
  pruned.model = &actmc;
  pruned.level = n;
  pruned.kept.assign(actmc.transitions.size(), false);
  for (std::uint32_t state = 0; state < actmc.state_count(); ++state) {
    int max_magnitude = 0;
    bool any = false;
    for (std::uint32_t t : actmc.outgoing[state]) {
      int m = actmc.transitions[t].magnitude;
      max_magnitude = any ? std::max(max_magnitude, m) : m;
      any = true;
    }
    for (std::uint32_t t : actmc.outgoing[state])
      if (actmc.transitions[t].magnitude >= max_magnitude - static_cast<int>(n))
        pruned.kept[t] = true;
  }
  return pruned;
}

}  // namespace sqcrn
