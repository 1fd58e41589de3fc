#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "sqcrn/crn.hpp"

namespace sqcrn {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line(line) {}
  int line;
};

// Parses the line-oriented model format:
//
//   # comment
//   species A, B, C
//   unit h
//   init A=10, B=4
//   r t1: A + B -> 2 C @ 0.5
//   r d: A -> 0 @ 1e-4
//
// Unlisted species start at 0; the empty complex is written `0`.
Crn parse_crn(std::string_view text);

}  // namespace sqcrn
