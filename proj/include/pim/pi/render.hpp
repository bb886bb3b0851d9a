#pragma once

#include <string>

#include "pim/pi/ast.hpp"

namespace pim::pi {

/// Pretty-prints a program as SPiM source: sample/plot directives, global
/// channel declarations, let/and process groups, run statements.
std::string render(const Program& program);

}  // namespace pim::pi
