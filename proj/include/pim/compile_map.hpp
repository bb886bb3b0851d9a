#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pim/model.hpp"

namespace pim {

/// One end of a binary sentence, seen from the other end: the partner's
/// site, its admissible states, and the sentence's rate and label.
struct Partner {
  std::string species;
  std::string site;
  StateSet partner_states;
  double rate = 0.0;
  int sentence_label = 0;  // 1-based textual position

  friend bool operator==(const Partner&, const Partner&) = default;
};

struct TransformAction {
  std::string target;  // empty for decay
  double rate = 0.0;
  int sentence_label = 0;

  friend bool operator==(const TransformAction&,
                         const TransformAction&) = default;
};

/// Everything one species can do while in one state. Partner lists keep
/// sentence order; map keys are the sentence's own site.
struct StateActions {
  StateMask state = 0;
  std::map<std::string, std::vector<Partner>> assoc;
  std::map<std::string, std::vector<Partner>> dissoc;
  std::vector<TransformAction> transform;
};

struct SpeciesActions {
  std::string species;
  std::vector<StateActions> states;  // 2^sites entries, graded-lex order
};

struct CompileMap {
  std::vector<SpeciesActions> species;  // model species order

  const SpeciesActions* find(const std::string& name) const;
};

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 16;

/// Total states the map materializes: sum of 2^|sites| over species.
std::uint64_t total_state_count(const Model& model);

/// Builds the per-state action table for every species. The model must
/// have passed validation (throws std::invalid_argument otherwise); a
/// species pushing the state total past `state_cap` raises
/// std::length_error naming it.
CompileMap build_compile_map(const Model& model,
                             std::uint64_t state_cap = kDefaultStateCap);

/// Debug rendering, one state tuple per line:
/// `<{a1}, {(a2,{(C,c,{{}},1.0)})}, {(a1,{(B,b,{{b}},4.0)})}, {}>`
std::string dump(const CompileMap& map, const Model& model);

}  // namespace pim
