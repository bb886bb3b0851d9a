#include "pim/model.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace pim {

namespace {

const std::vector<std::string> kNoSites;

void sort_unique(std::vector<SiteRef>& refs) {
  std::sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
}

/// Graded-lexicographic order: fewer sites first; within one cardinality,
/// the ascending index sequences compare lexicographically, which reduces
/// to "the lowest differing site belongs to the smaller state".
bool graded_lex_less(StateMask a, StateMask b) {
  int ca = std::popcount(a);
  int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  StateMask diff = a ^ b;
  if (diff == 0) return false;
  return (a >> std::countr_zero(diff)) & 1u;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t result = 1;
  for (int i = 0; i < k; ++i) {
    result = result * static_cast<std::uint64_t>(n - i) /
             static_cast<std::uint64_t>(i + 1);
  }
  return result;
}

}  // namespace

const char* sentence_kind_name(SentenceKind kind) {
  switch (kind) {
    case SentenceKind::Association: return "association";
    case SentenceKind::Dissociation: return "dissociation";
    case SentenceKind::Transformation: return "transformation";
  }
  return "?";
}

Model::Model(std::vector<Sentence> sentences)
    : sentences_(std::move(sentences)) {
  auto touch = [&](const SiteRef& ref) {
    auto [it, inserted] =
        species_index_.try_emplace(ref.species,
                                   static_cast<int>(species_.size()));
    if (inserted) {
      species_.push_back(ref.species);
      sites_.emplace_back();
    }
    if (ref.has_site()) {
      auto& sites = sites_[static_cast<std::size_t>(it->second)];
      if (std::find(sites.begin(), sites.end(), ref.site) == sites.end()) {
        sites.push_back(ref.site);
      }
    }
  };
  for (const Sentence& s : sentences_) {
    touch(s.left);
    if (s.right) touch(*s.right);
  }
  for (auto& sites : sites_) std::sort(sites.begin(), sites.end());
}

bool Model::has_species(const std::string& name) const {
  return species_index_.count(name) != 0;
}

const std::vector<std::string>& Model::sites(
    const std::string& species) const {
  auto it = species_index_.find(species);
  if (it == species_index_.end()) return kNoSites;
  return sites_[static_cast<std::size_t>(it->second)];
}

int Model::site_index(const std::string& species,
                      const std::string& site) const {
  const auto& list = sites(species);
  auto it = std::find(list.begin(), list.end(), site);
  if (it == list.end()) return -1;
  return static_cast<int>(it - list.begin());
}

int Model::species_index(const std::string& name) const {
  auto it = species_index_.find(name);
  return it == species_index_.end() ? -1 : it->second;
}

long Model::initial_count(const std::string& species) const {
  auto it = initial_counts_.find(species);
  return it == initial_counts_.end() ? default_count_ : it->second;
}

void Model::set_initial_count(const std::string& species, long count) {
  initial_counts_[species] = count;
}

void Model::set_default_initial_count(long count) { default_count_ = count; }

std::set<std::string> species_of(const Model& model) {
  return {model.species().begin(), model.species().end()};
}

std::set<std::string> sites_of(const Model& model,
                               const std::string& species) {
  const auto& list = model.sites(species);
  return {list.begin(), list.end()};
}

std::vector<StateMask> all_states(const Model& model,
                                  const std::string& species) {
  int n = static_cast<int>(model.sites(species).size());
  assert(n < 31);
  std::vector<StateMask> result;
  result.reserve(1u << n);
  for (StateMask m = 0; m < (StateMask{1} << n); ++m) result.push_back(m);
  std::sort(result.begin(), result.end(), graded_lex_less);
  return result;
}

StateSet states(const Model& model, const std::string& species,
                const std::vector<SiteRef>& pos,
                const std::vector<SiteRef>& neg) {
  StateMask required = 0;
  StateMask forbidden = 0;
  for (const SiteRef& ref : pos) {
    if (ref.species != species) continue;
    int idx = model.site_index(species, ref.site);
    if (idx < 0) return {};  // no subset of the declared sites contains it
    required |= StateMask{1} << idx;
  }
  for (const SiteRef& ref : neg) {
    if (ref.species != species) continue;
    int idx = model.site_index(species, ref.site);
    if (idx < 0) continue;  // vacuously absent from every state
    forbidden |= StateMask{1} << idx;
  }
  StateSet result;
  for (StateMask m : all_states(model, species)) {
    if ((m & required) == required && (m & forbidden) == 0) {
      result.push_back(m);
    }
  }
  return result;
}

StateSet states_for(const Model& model, const Sentence& sentence,
                    const SiteRef& ref) {
  return states(model, ref.species, sentence.pos, sentence.neg);
}

int state_index(const Model& model, const std::string& species,
                StateMask mask) {
  int n = static_cast<int>(model.sites(species).size());
  int k = std::popcount(mask);
  std::uint64_t rank = 0;
  for (int j = 0; j < k; ++j) rank += binomial(n, j);
  // lexicographic rank of the ascending index sequence among n-choose-k
  int seen = 0;
  int prev = -1;
  for (int i = 0; i < n; ++i) {
    if (!((mask >> i) & 1u)) continue;
    for (int v = prev + 1; v < i; ++v) {
      rank += binomial(n - 1 - v, k - 1 - seen);
    }
    prev = i;
    ++seen;
  }
  return static_cast<int>(rank);
}

std::string state_name(const Model& model, const std::string& species,
                       StateMask mask) {
  const auto& sites = model.sites(species);
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!((mask >> i) & 1u)) continue;
    if (!first) out += ",";
    out += sites[i];
    first = false;
  }
  out += "}";
  return out;
}

bool site_precedes(const std::string& site_a, const std::string& species_a,
                   const std::string& site_b, const std::string& species_b) {
  if (site_a != site_b) return site_a < site_b;
  return species_a < species_b;
}

Sentence desugar(const SurfaceSentence& surface,
                 const DesugarOptions& options) {
  Sentence out;
  out.rate = surface.rate.value_or(kDefaultRate);
  out.span = surface.span;
  for (const SurfaceCondition& c : surface.conditions) {
    (c.bound ? out.pos : out.neg).push_back(SiteRef{c.species, c.site});
  }
  switch (surface.kind) {
    case SurfaceKind::Association:
    case SurfaceKind::Phosphorylation:
      out.kind = SentenceKind::Association;
      out.left = SiteRef{surface.left_species, surface.left_site};
      out.right = surface.kind == SurfaceKind::Association
                      ? SiteRef{surface.right_species, surface.right_site}
                      : SiteRef{kPhosphSpecies, kPhosphSite};
      if (options.implicit_conditions) {
        out.neg.push_back(out.left);
        out.neg.push_back(*out.right);
      }
      break;
    case SurfaceKind::Dissociation:
    case SurfaceKind::Dephosphorylation:
      out.kind = SentenceKind::Dissociation;
      out.left = SiteRef{surface.left_species, surface.left_site};
      out.right = surface.kind == SurfaceKind::Dissociation
                      ? SiteRef{surface.right_species, surface.right_site}
                      : SiteRef{kPhosphSpecies, kPhosphSite};
      if (options.implicit_conditions) {
        out.pos.push_back(out.left);
        out.pos.push_back(*out.right);
      }
      break;
    case SurfaceKind::Transformation:
      out.kind = SentenceKind::Transformation;
      out.left = SiteRef{surface.left_species, ""};
      out.right = SiteRef{surface.right_species, ""};
      break;
    case SurfaceKind::Decay:
      out.kind = SentenceKind::Transformation;
      out.left = SiteRef{surface.left_species, ""};
      out.right = std::nullopt;
      break;
  }
  sort_unique(out.pos);
  sort_unique(out.neg);
  return out;
}

Model build_model(const std::vector<SurfaceSentence>& surface,
                  const DesugarOptions& options) {
  std::vector<Sentence> core;
  core.reserve(surface.size());
  for (const SurfaceSentence& s : surface) core.push_back(desugar(s, options));
  if (options.implicit_conditions) {
    // A transformation leaves every site of its source unbound; the full
    // site list is only known once the whole model is assembled.
    Model prelim(core);
    for (Sentence& s : core) {
      if (s.kind != SentenceKind::Transformation) continue;
      for (const std::string& site : prelim.sites(s.left.species)) {
        s.neg.push_back(SiteRef{s.left.species, site});
      }
      sort_unique(s.neg);
    }
  }
  return Model(std::move(core));
}

}  // namespace pim
