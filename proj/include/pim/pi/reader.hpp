#pragma once

#include <string_view>
#include <vector>

#include "pim/pi/ast.hpp"
#include "pim/source.hpp"

namespace pim::pi {

struct ReadResult {
  Program program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Parses SPiM source produced by render() (or written by hand in the same
/// dialect) back into a program. Name resolution follows lexical scope:
/// received names shadow locals, locals shadow parameters, parameters
/// shadow globals.
ReadResult read_program(std::string_view source);

}  // namespace pim::pi
