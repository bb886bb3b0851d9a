#include "pim/compile_map.hpp"

#include <stdexcept>

#include "pim/format.hpp"
#include "pim/validator.hpp"

namespace pim {

const SpeciesActions* CompileMap::find(const std::string& name) const {
  for (const SpeciesActions& entry : species) {
    if (entry.species == name) return &entry;
  }
  return nullptr;
}

std::uint64_t total_state_count(const Model& model) {
  std::uint64_t total = 0;
  for (const std::string& sp : model.species()) {
    total += std::uint64_t{1} << model.sites(sp).size();
  }
  return total;
}

CompileMap build_compile_map(const Model& model, std::uint64_t state_cap) {
  if (!validate(model).empty()) {
    throw std::invalid_argument(
        "compile map requested for a model that failed validation");
  }
  std::uint64_t budget = 0;
  for (const std::string& sp : model.species()) {
    budget += std::uint64_t{1} << model.sites(sp).size();
    if (budget > state_cap) {
      throw std::length_error("species '" + sp + "' pushes the state total " +
                              "past the cap of " + std::to_string(state_cap));
    }
  }

  CompileMap map;
  for (const std::string& sp : model.species()) {
    SpeciesActions entry{sp, {}};
    for (StateMask m : all_states(model, sp)) {
      entry.states.push_back(StateActions{m, {}, {}, {}});
    }
    map.species.push_back(std::move(entry));
  }
  auto at = [&](const std::string& sp, StateMask m) -> StateActions& {
    auto& entry = map.species[static_cast<std::size_t>(
        model.species_index(sp))];
    return entry.states[static_cast<std::size_t>(state_index(model, sp, m))];
  };

  const auto& sentences = model.sentences();
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const Sentence& s = sentences[k];
    int label = static_cast<int>(k) + 1;
    if (s.is_binary()) {
      const SiteRef* ends[2] = {&s.left, &*s.right};
      for (int side = 0; side < 2; ++side) {
        const SiteRef& mine = *ends[side];
        const SiteRef& theirs = *ends[1 - side];
        Partner partner{theirs.species, theirs.site,
                        states_for(model, s, theirs), s.rate, label};
        for (StateMask m : states_for(model, s, mine)) {
          StateActions& actions = at(mine.species, m);
          auto& slot = s.kind == SentenceKind::Association
                           ? actions.assoc[mine.site]
                           : actions.dissoc[mine.site];
          slot.push_back(partner);
        }
      }
    } else {
      TransformAction action{s.right ? s.right->species : std::string{},
                             s.rate, label};
      for (StateMask m : states_for(model, s, s.left)) {
        at(s.left.species, m).transform.push_back(action);
      }
    }
  }
  return map;
}

namespace {

std::string render_state_set(const Model& model, const std::string& species,
                             const StateSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ",";
    out += state_name(model, species, set[i]);
  }
  return out + "}";
}

std::string render_partner_map(
    const Model& model,
    const std::map<std::string, std::vector<Partner>>& slots) {
  std::string out = "{";
  bool first_site = true;
  for (const auto& [site, partners] : slots) {
    if (!first_site) out += ",";
    first_site = false;
    out += "(" + site + ",{";
    for (std::size_t i = 0; i < partners.size(); ++i) {
      const Partner& p = partners[i];
      if (i) out += ",";
      out += "(" + p.species + "," + p.site + "," +
             render_state_set(model, p.species, p.partner_states) + "," +
             format_double(p.rate) + ")";
    }
    out += "})";
  }
  return out + "}";
}

}  // namespace

std::string dump(const CompileMap& map, const Model& model) {
  std::string out;
  for (const SpeciesActions& entry : map.species) {
    out += entry.species + ":\n";
    for (const StateActions& actions : entry.states) {
      out += "  <" + state_name(model, entry.species, actions.state) + ", " +
             render_partner_map(model, actions.assoc) + ", " +
             render_partner_map(model, actions.dissoc) + ", {";
      for (std::size_t i = 0; i < actions.transform.size(); ++i) {
        const TransformAction& t = actions.transform[i];
        if (i) out += ",";
        out += "(" + (t.target.empty() ? std::string("{}") : t.target) + "," +
               format_double(t.rate) + ")";
      }
      out += "}>\n";
    }
  }
  return out;
}

}  // namespace pim
