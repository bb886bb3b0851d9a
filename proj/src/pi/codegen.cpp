#include "pim/pi/codegen.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace pim::pi {

namespace {

bool mentions(const Sentence& s, const SiteRef& ref) {
  return s.left == ref || (s.right && *s.right == ref);
}

bool same_pair(const Sentence& s, const SiteRef& x, const SiteRef& y) {
  if (!s.right) return false;
  return (s.left == x && *s.right == y) || (s.left == y && *s.right == x);
}

bool precedes(const SiteRef& x, const SiteRef& y) {
  return site_precedes(x.site, x.species, y.site, y.species);
}

}  // namespace

std::vector<Slot> R_set(const Model& model, const std::string& species,
                        const std::string& site) {
  const SiteRef ref{species, site};
  std::vector<Slot> slots;
  const auto& sentences = model.sentences();
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const Sentence& s = sentences[k];
    if (s.kind != SentenceKind::Dissociation || !mentions(s, ref)) continue;
    int label = static_cast<int>(slots.size()) + 1;
    slots.push_back(Slot{site, s.rate / 2.0, label, static_cast<int>(k),
                         site + std::to_string(label)});
  }
  if (slots.empty()) {
    slots.push_back(Slot{site, 1.0, 1, -1, site});
  }
  return slots;
}

std::vector<int> pair_dissociations(const Model& model, const SiteRef& x,
                                    const SiteRef& y) {
  std::vector<int> out;
  const auto& sentences = model.sentences();
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const Sentence& s = sentences[k];
    if (s.kind == SentenceKind::Dissociation && same_pair(s, x, y)) {
      out.push_back(static_cast<int>(k));
    }
  }
  return out;
}

std::vector<Slot> U_set(const Model& model, const SiteRef& mine,
                        const SiteRef& theirs) {
  if (!precedes(mine, theirs)) return {};
  std::vector<int> pair = pair_dissociations(model, mine, theirs);
  std::vector<Slot> slots;
  if (pair.empty()) {
    slots.push_back(Slot{mine.site, 1.0, 1, -1, mine.site});
    return slots;
  }
  for (const Slot& slot : R_set(model, mine.species, mine.site)) {
    if (std::find(pair.begin(), pair.end(), slot.sentence) != pair.end()) {
      slots.push_back(slot);
    }
  }
  return slots;
}

namespace {

/// Per-species naming table: the R-slots of every site, with identifiers
/// made unique across the species and kept clear of the global namespace.
class SlotTable {
 public:
  SlotTable(const Model& model, const std::string& species,
            const std::set<std::string>& reserved)
      : model_(model), species_(species) {
    const auto& sites = model.sites(species);
    slots_.resize(sites.size());
    bare_.resize(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
      slots_[i] = R_set(model, species, sites[i]);
      bare_[i] = sites[i];
    }
    uniquify(reserved);
  }

  const std::vector<Slot>& slots(int site_index) const {
    return slots_[static_cast<std::size_t>(site_index)];
  }

  /// Identifier for the site's default bond channel (the one fresh channel
  /// sent when the pair being bound has no dissociation sentence).
  const std::string& bare_name(int site_index) const {
    return bare_[static_cast<std::size_t>(site_index)];
  }

  int slot_count(int site_index) const {
    return static_cast<int>(slots_[static_cast<std::size_t>(site_index)]
                                .size());
  }

  /// Position of the slot for `sentence` in the site's parameter block.
  int slot_of_sentence(int site_index, int sentence) const {
    const auto& list = slots_[static_cast<std::size_t>(site_index)];
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k].sentence == sentence) return static_cast<int>(k);
    }
    return -1;
  }

  /// Index of (site, slot) in the parameter list of a state's definition.
  int param_index(StateMask state, int site_index, int slot) const {
    int idx = 0;
    for (int i = 0; i < site_index; ++i) {
      if ((state >> i) & 1u) idx += slot_count(i);
    }
    return idx + slot;
  }

 private:
  void uniquify(const std::set<std::string>& reserved) {
    // Scheme A is the natural naming (bare site / site+label); a site whose
    // names collide with another site's or with a reserved identifier moves
    // to scheme B (site_0 / site_label), then to fresh v<n> names.
    std::vector<int> scheme(slots_.size(), 0);
    for (int round = 0; round < 2; ++round) {
      std::set<std::string> seen;
      std::set<std::size_t> clashed;
      for (std::size_t i = 0; i < slots_.size(); ++i) {
        for (const std::string& name : site_names(i)) {
          if (reserved.count(name) || !seen.insert(name).second) {
            clashed.insert(i);
          }
        }
      }
      if (clashed.empty()) return;
      // A clashing name may have been inserted first by an innocent site;
      // rename every site touching a contested name.
      std::set<std::string> contested;
      for (std::size_t i : clashed) {
        for (const std::string& name : site_names(i)) contested.insert(name);
      }
      for (std::size_t i = 0; i < slots_.size(); ++i) {
        bool hit = false;
        for (const std::string& name : site_names(i)) {
          if (contested.count(name)) hit = true;
        }
        if (hit && scheme[i] == round) {
          ++scheme[i];
          apply_scheme(i, scheme[i]);
        }
      }
    }
    // Last resort: species-wide fresh names.
    std::set<std::string> seen;
    int counter = 0;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      bool hit = false;
      for (const std::string& name : site_names(i)) {
        if (reserved.count(name) || !seen.insert(name).second) hit = true;
      }
      if (!hit) continue;
      auto fresh = [&] {
        std::string name;
        do {
          name = "v" + std::to_string(++counter);
        } while (reserved.count(name) || seen.count(name));
        seen.insert(name);
        return name;
      };
      bare_[i] = fresh();
      for (Slot& slot : slots_[i]) {
        slot.name = slot.is_default() ? bare_[i] : fresh();
      }
    }
  }

  std::vector<std::string> site_names(std::size_t i) const {
    std::vector<std::string> names{bare_[i]};
    for (const Slot& slot : slots_[i]) {
      if (slot.name != bare_[i]) names.push_back(slot.name);
    }
    return names;
  }

  void apply_scheme(std::size_t i, int scheme) {
    const std::string& site = model_.sites(species_)[i];
    if (scheme != 1) return;
    bare_[i] = site + "_0";
    for (Slot& slot : slots_[i]) {
      slot.name = slot.is_default() ? bare_[i]
                                    : site + "_" + std::to_string(slot.label);
    }
  }

  const Model& model_;
  const std::string& species_;
  std::vector<std::vector<Slot>> slots_;
  std::vector<std::string> bare_;
};

class Generator {
 public:
  Generator(const Model& model, const CompileMap& map)
      : model_(model), map_(map) {}

  Program run() {
    declare_globals();
    layout_defs();
    for (const SpeciesActions& entry : map_.species) {
      for (const StateActions& actions : entry.states) {
        emit_body(entry.species, actions);
      }
    }
    prog_.sample_time = model_.sample_time();
    for (const std::string& sp : model_.species()) {
      int offset = def_offset_[static_cast<std::size_t>(
          model_.species_index(sp))];
      int count = 1 << model_.sites(sp).size();
      for (int i = count - 1; i >= 0; --i) prog_.plot.push_back(offset + i);
      prog_.runs.push_back(RunStatement{model_.initial_count(sp), offset});
    }
    return std::move(prog_);
  }

 private:
  void declare_globals() {
    const auto& sentences = model_.sentences();
    for (std::size_t k = 0; k < sentences.size(); ++k) {
      const Sentence& s = sentences[k];
      if (s.kind != SentenceKind::Association) continue;
      const SiteRef& lo = precedes(s.left, *s.right) ? s.left : *s.right;
      const SiteRef& hi = precedes(s.left, *s.right) ? *s.right : s.left;
      int bonds =
          static_cast<int>(pair_dissociations(model_, s.left, *s.right)
                               .size());
      prog_.globals.push_back(
          GlobalChannel{lo.site + hi.site + std::to_string(k + 1), 1.0,
                        std::max(1, bonds)});
      global_of_sentence_[static_cast<int>(k)] =
          static_cast<int>(prog_.globals.size()) - 1;
    }
    prog_.globals.push_back(GlobalChannel{"nil", 0.0, 0});
    nil_index_ = static_cast<int>(prog_.globals.size()) - 1;
  }

  void layout_defs() {
    std::set<std::string> reserved{"nil",  "new", "chan",  "let", "and",
                                   "run",  "of",  "do",    "or",  "delay",
                                   "plot", "directive",    "sample"};
    for (const GlobalChannel& g : prog_.globals) reserved.insert(g.name);
    for (const std::string& sp : model_.species()) {
      std::size_t count = std::size_t{1} << model_.sites(sp).size();
      for (std::size_t i = 0; i < count; ++i) {
        reserved.insert(sp + std::to_string(i));
      }
    }
    for (const std::string& sp : model_.species()) {
      tables_.emplace_back(model_, sp, reserved);
    }
    for (const std::string& sp : model_.species()) {
      def_offset_.push_back(static_cast<int>(prog_.defs.size()));
      const SlotTable& table =
          tables_[static_cast<std::size_t>(model_.species_index(sp))];
      int site_count = static_cast<int>(model_.sites(sp).size());
      std::vector<StateMask> order = all_states(model_, sp);
      for (std::size_t i = 0; i < order.size(); ++i) {
        ProcessDef def;
        def.name = sp + std::to_string(i);
        def.starts_group = i == 0;
        for (int site = 0; site < site_count; ++site) {
          if (!((order[i] >> site) & 1u)) continue;
          for (const Slot& slot : table.slots(site)) {
            def.params.push_back(slot.name);
          }
        }
        prog_.defs.push_back(std::move(def));
      }
    }
  }

  int def_of(const std::string& species, StateMask state) const {
    return def_offset_[static_cast<std::size_t>(
               model_.species_index(species))] +
           state_index(model_, species, state);
  }

  /// Continuation arguments for moving to `target` state: bound sites other
  /// than `moved` pass their parameters through; the moved site's slots are
  /// produced by `fill(slot_index)`.
  template <typename Fill>
  std::vector<ValueRef> continuation_args(const SlotTable& table,
                                          StateMask current, StateMask target,
                                          int moved_site, Fill&& fill) const {
    std::vector<ValueRef> args;
    int site_count = 32;
    for (int site = 0; site < site_count; ++site) {
      if (!((target >> site) & 1u)) continue;
      for (int k = 0; k < table.slot_count(site); ++k) {
        if (site == moved_site) {
          args.push_back(fill(k));
        } else {
          args.push_back(
              ValueRef{ValueKind::Param, table.param_index(current, site, k)});
        }
      }
    }
    return args;
  }

  void emit_body(const std::string& species, const StateActions& actions) {
    const SlotTable& table =
        tables_[static_cast<std::size_t>(model_.species_index(species))];
    ProcessDef& def =
        prog_.defs[static_cast<std::size_t>(def_of(species, actions.state))];

    std::map<std::pair<std::string, double>, int> local_index;
    auto ensure_local = [&](const std::string& name, double rate) {
      auto [it, inserted] =
          local_index.try_emplace({name, rate},
                                  static_cast<int>(def.locals.size()));
      if (inserted) def.locals.push_back(LocalChannel{name, rate});
      return it->second;
    };

    for (const auto& [site, partners] : actions.assoc) {
      int site_idx = model_.site_index(species, site);
      const SiteRef mine{species, site};
      for (const Partner& p : partners) {
        const SiteRef theirs{p.species, p.site};
        int sentence = p.sentence_label - 1;
        StateMask target_state =
            actions.state | (StateMask{1} << site_idx);
        int target = def_of(species, target_state);
        std::vector<int> pair = pair_dissociations(model_, mine, theirs);
        Branch br;
        br.channel = ValueRef{ValueKind::Global,
                              global_of_sentence_.at(sentence)};
        br.target = target;
        if (precedes(mine, theirs)) {
          br.kind = BranchKind::Output;
          br.weight = p.rate;
          std::vector<int> sent_locals;  // local index per U-slot
          if (pair.empty()) {
            sent_locals.push_back(
                ensure_local(table.bare_name(site_idx), 1.0));
          } else {
            for (int k : pair) {
              int slot = table.slot_of_sentence(site_idx, k);
              assert(slot >= 0);
              const Slot& info = table.slots(site_idx)[
                  static_cast<std::size_t>(slot)];
              sent_locals.push_back(ensure_local(info.name, info.rate));
            }
          }
          for (int local : sent_locals) {
            br.payload.push_back(ValueRef{ValueKind::Local, local});
          }
          br.args = continuation_args(
              table, actions.state, target_state, site_idx,
              [&](int k) -> ValueRef {
                const Slot& slot = table.slots(site_idx)[
                    static_cast<std::size_t>(k)];
                if (slot.is_default()) {
                  return ValueRef{ValueKind::Local, sent_locals[0]};
                }
                auto it = std::find(pair.begin(), pair.end(), slot.sentence);
                if (it != pair.end()) {
                  return ValueRef{ValueKind::Local,
                                  sent_locals[static_cast<std::size_t>(
                                      it - pair.begin())]};
                }
                return ValueRef{ValueKind::Global, nil_index_};
              });
        } else {
          br.kind = BranchKind::Input;
          if (pair.empty()) {
            const auto& slots = table.slots(site_idx);
            bool keep = slots.size() == 1 && slots[0].is_default();
            br.recv_names.push_back(keep ? slots[0].name
                                         : table.bare_name(site_idx));
            br.args = continuation_args(
                table, actions.state, target_state, site_idx,
                [&](int k) -> ValueRef {
                  if (keep) return ValueRef{ValueKind::Recv, 0};
                  (void)k;
                  return ValueRef{ValueKind::Global, nil_index_};
                });
          } else {
            for (int k : pair) {
              int slot = table.slot_of_sentence(site_idx, k);
              assert(slot >= 0);
              br.recv_names.push_back(table.slots(site_idx)[
                  static_cast<std::size_t>(slot)].name);
            }
            br.args = continuation_args(
                table, actions.state, target_state, site_idx,
                [&](int k) -> ValueRef {
                  const Slot& slot = table.slots(site_idx)[
                      static_cast<std::size_t>(k)];
                  auto it =
                      std::find(pair.begin(), pair.end(), slot.sentence);
                  if (it != pair.end()) {
                    return ValueRef{ValueKind::Recv,
                                    static_cast<int>(it - pair.begin())};
                  }
                  return ValueRef{ValueKind::Global, nil_index_};
                });
          }
        }
        def.branches.push_back(std::move(br));
      }
    }

    for (const auto& [site, partners] : actions.dissoc) {
      int site_idx = model_.site_index(species, site);
      for (const Partner& p : partners) {
        int sentence = p.sentence_label - 1;
        int slot = table.slot_of_sentence(site_idx, sentence);
        assert(slot >= 0);
        int param = table.param_index(actions.state, site_idx, slot);
        StateMask target_state =
            actions.state & ~(StateMask{1} << site_idx);
        int target = def_of(species, target_state);
        std::vector<ValueRef> args = continuation_args(
            table, actions.state, target_state, site_idx,
            [](int) -> ValueRef { return {}; });
        for (BranchKind kind : {BranchKind::Output, BranchKind::Input}) {
          Branch br;
          br.kind = kind;
          br.channel = ValueRef{ValueKind::Param, param};
          br.target = target;
          br.args = args;
          def.branches.push_back(std::move(br));
        }
      }
    }

    for (const TransformAction& t : actions.transform) {
      Branch br;
      br.kind = BranchKind::Delay;
      br.weight = t.rate;
      br.target = t.target.empty() ? -1 : def_of(t.target, 0);
      def.branches.push_back(std::move(br));
    }
  }

  const Model& model_;
  const CompileMap& map_;
  Program prog_;
  std::vector<SlotTable> tables_;
  std::vector<int> def_offset_;
  std::map<int, int> global_of_sentence_;
  int nil_index_ = -1;
};

}  // namespace

Program generate(const Model& model, const CompileMap& map) {
  return Generator(model, map).run();
}

}  // namespace pim::pi
