#include "pim/validator.hpp"

#include <algorithm>
#include <set>

namespace pim {

namespace {

std::string ref_text(const SiteRef& ref) {
  return "'" + ref.site + "' on '" + ref.species + "'";
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

std::vector<std::string> body_species(const Sentence& s) {
  std::vector<std::string> out{s.left.species};
  if (s.right && s.right->species != s.left.species) {
    out.push_back(s.right->species);
  }
  return out;
}

bool ref_precedes(const SiteRef& x, const SiteRef& y) {
  return site_precedes(x.site, x.species, y.site, y.species);
}

/// Body pair as an unordered pair, smaller end first under the site order.
std::pair<SiteRef, SiteRef> canonical_body(const Sentence& s) {
  if (ref_precedes(*s.right, s.left)) return {*s.right, s.left};
  return {s.left, *s.right};
}

bool intersects(const StateSet& x, const StateSet& y) {
  std::set<StateMask> lookup(x.begin(), x.end());
  return std::any_of(y.begin(), y.end(),
                     [&](StateMask m) { return lookup.count(m) != 0; });
}

class Checker {
 public:
  explicit Checker(const Model& model) : model_(model) {}

  std::vector<Violation> run() {
    const auto& sentences = model_.sentences();
    for (int i = 0; i < static_cast<int>(sentences.size()); ++i) {
      check_single(i, sentences[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < static_cast<int>(sentences.size()); ++i) {
      for (int j = i + 1; j < static_cast<int>(sentences.size()); ++j) {
        check_pair(i, j);
      }
    }
    std::stable_sort(violations_.begin(), violations_.end(),
                     [](const Violation& x, const Violation& y) {
                       if (x.sentences[0] != y.sentences[0]) {
                         return x.sentences[0] < y.sentences[0];
                       }
                       return x.condition < y.condition;
                     });
    return std::move(violations_);
  }

 private:
  void add(int condition, std::vector<int> sentences, std::string message) {
    SourceSpan span =
        model_.sentences()[static_cast<std::size_t>(sentences[0])].span;
    violations_.push_back(
        {condition, std::move(sentences), std::move(message), span});
  }

  void check_single(int index, const Sentence& s) {
    const std::vector<std::string> bodies = body_species(s);
    auto in_body = [&](const std::string& species) {
      return std::find(bodies.begin(), bodies.end(), species) != bodies.end();
    };

    // 1: conditions name only the sentence's own species
    {
      std::set<std::string> foreign;
      for (const auto* set : {&s.pos, &s.neg}) {
        for (const SiteRef& ref : *set) {
          if (!in_body(ref.species)) foreign.insert(ref.species);
        }
      }
      if (!foreign.empty()) {
        std::vector<std::string> parts;
        for (const std::string& sp : foreign) parts.push_back("'" + sp + "'");
        add(1, {index},
            "species " + join(parts) + " in the conditions " +
                (foreign.size() == 1 ? "is" : "are") +
                " not part of the sentence body");
      }
    }

    // 2: Pos and Neg are disjoint
    {
      std::vector<SiteRef> both;
      std::set_intersection(s.pos.begin(), s.pos.end(), s.neg.begin(),
                            s.neg.end(), std::back_inserter(both));
      if (!both.empty()) {
        std::vector<std::string> parts;
        for (const SiteRef& ref : both) parts.push_back(ref_text(ref));
        add(2, {index},
            "site " + join(parts) + " required both bound and unbound");
      }
    }

    // 3: condition sites on the body species are declared in the model
    {
      std::set<SiteRef> unknown;
      for (const auto* set : {&s.pos, &s.neg}) {
        for (const SiteRef& ref : *set) {
          if (!in_body(ref.species)) continue;
          if (model_.site_index(ref.species, ref.site) < 0) {
            unknown.insert(ref);
          }
        }
      }
      if (!unknown.empty()) {
        std::vector<std::string> parts;
        for (const SiteRef& ref : unknown) {
          parts.push_back("'" + ref.site + "' is not declared on '" +
                          ref.species + "'");
        }
        add(3, {index}, "site " + join(parts));
      }
    }

    // 4/5: bodies conditioned unbound (association) or bound (dissociation)
    if (s.kind == SentenceKind::Association ||
        s.kind == SentenceKind::Dissociation) {
      bool assoc = s.kind == SentenceKind::Association;
      const std::vector<SiteRef>& required = assoc ? s.neg : s.pos;
      std::vector<std::string> missing;
      for (const SiteRef* body : {&s.left, &*s.right}) {
        if (!std::binary_search(required.begin(), required.end(), *body)) {
          missing.push_back(ref_text(*body));
        }
      }
      if (!missing.empty()) {
        add(assoc ? 4 : 5, {index},
            "body site " + join(missing) + " is not conditioned " +
                (assoc ? "unbound" : "bound"));
      }
    }

    // 6: transformation source unbound at every site
    if (s.kind == SentenceKind::Transformation) {
      std::vector<std::string> faults;
      if (!s.pos.empty()) faults.push_back("has bound conditions");
      std::vector<SiteRef> wanted;
      for (const std::string& site : model_.sites(s.left.species)) {
        wanted.push_back(SiteRef{s.left.species, site});
      }
      std::sort(wanted.begin(), wanted.end());
      if (s.neg != wanted) {
        faults.push_back("must leave every site of '" + s.left.species +
                         "' unbound and nothing else");
      }
      if (!faults.empty()) {
        add(6, {index}, "transformation " + join(faults));
      }
    }

    // 8: structural extras
    if (s.is_binary() && s.left.species == s.right->species) {
      add(8, {index},
          "both body sites are on species '" + s.left.species +
              "' (self-association is not supported)");
    }
  }

  void check_pair(int i, int j) {
    const Sentence& s1 = model_.sentences()[static_cast<std::size_t>(i)];
    const Sentence& s2 = model_.sentences()[static_cast<std::size_t>(j)];

    if (s1 == s2) {
      add(8, {j, i}, "duplicate of sentence " + std::to_string(i + 1));
    }

    // 7: same kind, same bodies => state sets must not overlap
    if (s1.kind != s2.kind) return;
    StateSet a1, a2, b1, b2;
    if (s1.is_binary()) {
      auto [lo1, hi1] = canonical_body(s1);
      auto [lo2, hi2] = canonical_body(s2);
      if (lo1 != lo2 || hi1 != hi2) return;
      a1 = states(model_, lo1.species, s1.pos, s1.neg);
      a2 = states(model_, lo1.species, s2.pos, s2.neg);
      b1 = states(model_, hi1.species, s1.pos, s1.neg);
      b2 = states(model_, hi1.species, s2.pos, s2.neg);
    } else {
      if (s1.left.species != s2.left.species) return;
      bool same_target =
          (!s1.right && !s2.right) ||
          (s1.right && s2.right && s1.right->species == s2.right->species);
      if (!same_target) return;
      a1 = states(model_, s1.left.species, s1.pos, s1.neg);
      a2 = states(model_, s2.left.species, s2.pos, s2.neg);
      if (s1.right) {
        b1 = states(model_, s1.right->species, s1.pos, s1.neg);
        b2 = states(model_, s2.right->species, s2.pos, s2.neg);
      } else {
        b1 = StateSet{0};
        b2 = StateSet{0};
      }
    }
    bool clash_a = intersects(a1, a2);
    bool clash_b = intersects(b1, b2);
    bool bad = (a1 == a2 && clash_b) || (b1 == b2 && clash_a) ||
               (a1 != a2 && b1 != b2 && (clash_a || clash_b));
    if (bad) {
      add(7, {i, j},
          "sentences " + std::to_string(i + 1) + " and " +
              std::to_string(j + 1) +
              " have overlapping conditions for the same bodies");
    }
  }

  const Model& model_;
  std::vector<Violation> violations_;
};

}  // namespace

std::vector<Violation> validate(const Model& model) {
  return Checker(model).run();
}

std::string format_violation(const Violation& v) {
  std::string out =
      "condition " + std::to_string(v.condition) + ": " + v.message;
  if (v.span.known()) out += " at line " + std::to_string(v.span.line);
  return out;
}

}  // namespace pim
