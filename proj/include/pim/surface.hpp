#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pim/source.hpp"

namespace pim {

/// One `site x on S is bound/unbound` clause.
struct SurfaceCondition {
  std::string site;
  std::string species;
  bool bound = false;
  SourceSpan span;
};

enum class SurfaceKind {
  Association,
  Dissociation,
  Phosphorylation,
  Dephosphorylation,
  Transformation,
  Decay,
};

/// A sentence as parsed, before desugaring into the three core primitives.
/// Which fields are populated depends on the production: the site/species
/// pairs for association-like forms, bare species for transformation/decay.
struct SurfaceSentence {
  SurfaceKind kind;
  std::string left_site;     // association, dissociation, (de)phosphorylation
  std::string left_species;  // always set
  std::string right_site;     // association, dissociation
  std::string right_species;  // association, dissociation, transformation
  std::optional<double> rate;
  std::vector<SurfaceCondition> conditions;
  SourceSpan span;
};

}  // namespace pim
