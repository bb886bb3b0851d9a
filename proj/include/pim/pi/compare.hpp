#pragma once

#include <string>

#include "pim/pi/ast.hpp"

namespace pim::pi {

struct CompareResult {
  bool equivalent = false;
  std::string mismatch;  // empty when equivalent

  explicit operator bool() const { return equivalent; }
};

/// Structural equality of two programs up to channel and process renaming:
/// definitions are matched by position, values by their resolved indices,
/// rates numerically. Names never participate, so a program whose channels
/// were renamed consistently still compares equal.
CompareResult compare_programs(const Program& left, const Program& right);

}  // namespace pim::pi
