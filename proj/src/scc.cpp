#include "sqcrn/scc.hpp"

#include <algorithm>

namespace sqcrn {

std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& successors) {
  const std::uint32_t n = static_cast<std::uint32_t>(successors.size());
  const std::uint32_t unvisited = UINT32_MAX;
  std::vector<std::uint32_t> dfs_number(n, unvisited);
  std::vector<std::uint32_t> low_link(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> components;
  std::uint32_t next_number = 0;

  struct Frame {
    std::uint32_t vertex;
    std::size_t edge;
  };
  std::vector<Frame> call_stack;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (dfs_number[root] != unvisited)
      continue;
    call_stack.push_back({root, 0});
    dfs_number[root] = low_link[root] = next_number++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      std::uint32_t v = frame.vertex;
      if (frame.edge < successors[v].size()) {
        std::uint32_t w = successors[v][frame.edge++];
        if (dfs_number[w] == unvisited) {
          dfs_number[w] = low_link[w] = next_number++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.push_back({w, 0});
        } else if (on_stack[w]) {
          low_link[v] = std::min(low_link[v], dfs_number[w]);
        }
        continue;
      }
      if (low_link[v] == dfs_number[v]) {
        std::vector<std::uint32_t> component;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        std::uint32_t parent = call_stack.back().vertex;
        low_link[parent] = std::min(low_link[parent], low_link[v]);
      }
    }
  }

  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

}  // namespace sqcrn
