#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sqcrn {

// Order of magnitude of a positive rate: floor of the decadic logarithm.
// The small guard keeps exact powers of ten that land a hair below the
// integer after binary rounding (e.g. log10(1000) == 2.999...96) on the
// intended side.
inline int magnitude(double rate) {
  if (!(rate > 0.0))
    throw std::invalid_argument("magnitude: rate must be positive");
  return static_cast<int>(std::floor(std::log10(rate) + 1e-9));
}

inline int magnitude(std::uint64_t count) {
  if (count == 0)
    throw std::invalid_argument("magnitude: count must be positive");
  return magnitude(static_cast<double>(count));
}

}  // namespace sqcrn
