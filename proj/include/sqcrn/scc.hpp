#pragma once

#include <cstdint>
#include <vector>

namespace sqcrn {

// Tarjan over an adjacency list, iterative to keep stack depth flat.
// Components are returned sorted by their smallest member, members ascending,
// so output order is deterministic and independent of traversal order.
std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& successors);

}  // namespace sqcrn
