#pragma once

#include <string>
#include <vector>

#include "pim/compile_map.hpp"
#include "pim/model.hpp"
#include "pim/pi/ast.hpp"

namespace pim::pi {

/// One channel-parameter slot of a (species, site) pair: a private bond
/// channel the process carries while that site is bound.
struct Slot {
  std::string site;
  double rate = 0.0;  // halved sentence rate, or 1.0 for the default
  int label = 0;      // 1-based position within the site's slot list
  int sentence = -1;  // 0-based originating sentence; -1 for the default
  std::string name;   // identifier used for parameters and declarations

  bool is_default() const { return sentence < 0; }

  friend bool operator==(const Slot&, const Slot&) = default;
};

/// One slot per dissociation sentence mentioning (species, site) on either
/// side, each at half the sentence rate; a single default slot at rate 1.0
/// when no such sentence exists. Order follows the sentences.
std::vector<Slot> R_set(const Model& model, const std::string& species,
                        const std::string& site);

/// The slots `mine` must create fresh channels for when associating with
/// `theirs`: its R-slots restricted to dissociation sentences over exactly
/// this pair, or the default slot when the pair has none. Empty unless
/// mine precedes theirs in the site order — only the smaller side creates
/// the bond channels and sends them across.
std::vector<Slot> U_set(const Model& model, const SiteRef& mine,
                        const SiteRef& theirs);

/// Indices of the dissociation sentences whose bodies are exactly {x, y}.
std::vector<int> pair_dissociations(const Model& model, const SiteRef& x,
                                    const SiteRef& y);

/// Translates a validated model (via its compile map) into a pi program:
/// one definition per species state, association channels as globals,
/// private bond channels declared fresh on the smaller side.
Program generate(const Model& model, const CompileMap& map);

}  // namespace pim::pi
