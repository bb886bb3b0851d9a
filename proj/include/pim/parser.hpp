#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pim/model.hpp"
#include "pim/surface.hpp"

namespace pim {

struct ParseResult {
  std::vector<SurfaceSentence> surface;
  Model model;  // populated only when ok()
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Parses narrative-model text into surface sentences and, when clean,
/// desugars them into a Model. Recovery after a syntax error skips to the
/// next plausible sentence start, so one pass reports every sentence.
ParseResult parse(std::string_view text, const DesugarOptions& options = {});

/// Renders core sentences back in canonical surface syntax: one sentence
/// per line, rates always explicit, (Phosph, phosph) bodies written with
/// the phosphorylation forms. Re-parsing the output reproduces the model.
std::string pretty_print(const Model& model);

}  // namespace pim
