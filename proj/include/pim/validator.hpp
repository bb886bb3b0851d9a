#pragma once

#include <string>
#include <vector>

#include "pim/model.hpp"

namespace pim {

/// One failed consistency condition. `condition` carries the reference
/// numbering 1-7; 8 marks the extra structural checks (self-association,
/// duplicate sentences). `sentences` holds the 0-based indices involved.
struct Violation {
  int condition = 0;
  std::vector<int> sentences;
  std::string message;
  SourceSpan span;
};

/// Checks conditions 1-7 plus the structural extras on a desugared model.
/// Returns every violation, ordered by (first sentence, condition number);
/// an empty result means the model is consistent.
std::vector<Violation> validate(const Model& model);

/// `condition N: <message> at line L`
std::string format_violation(const Violation& v);

}  // namespace pim
