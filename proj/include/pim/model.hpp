#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pim/source.hpp"
#include "pim/surface.hpp"

namespace pim {

/// Species introduced by the phosphorylation sugar; reserved in input text.
inline constexpr const char* kPhosphSpecies = "Phosph";
inline constexpr const char* kPhosphSite = "phosph";

inline constexpr double kDefaultRate = 1.0;
inline constexpr double kDefaultSampleTime = 10.0;
inline constexpr long kDefaultPopulation = 1000;

/// A (species, site) pair. Transformation bodies omit the site.
struct SiteRef {
  std::string species;
  std::string site;

  bool has_site() const { return !site.empty(); }
  friend auto operator<=>(const SiteRef&, const SiteRef&) = default;
};

enum class SentenceKind { Association, Dissociation, Transformation };

const char* sentence_kind_name(SentenceKind kind);

/// A core sentence: kind, two body endpoints, bound (pos) and unbound (neg)
/// condition sets, and a rate. Transformations have site-less endpoints and
/// may lack the right endpoint entirely (decay).
struct Sentence {
  SentenceKind kind;
  SiteRef left;
  std::optional<SiteRef> right;
  std::vector<SiteRef> pos;  // sorted, unique
  std::vector<SiteRef> neg;  // sorted, unique
  double rate = kDefaultRate;
  SourceSpan span;

  bool is_binary() const { return kind != SentenceKind::Transformation; }

  friend bool operator==(const Sentence& x, const Sentence& y) {
    return x.kind == y.kind && x.left == y.left && x.right == y.right &&
           x.pos == y.pos && x.neg == y.neg && x.rate == y.rate;
  }
};

/// Subset of one species' sites, as a bitmask over the model's per-species
/// site order.
using StateMask = std::uint32_t;

/// A set of states of one species, kept in graded-lexicographic order.
using StateSet = std::vector<StateMask>;

/// An ordered collection of core sentences plus the species/site tables
/// derived from their bodies. Immutable once built.
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const { return sentences_; }

  /// Species appearing in sentence bodies, in order of first occurrence.
  const std::vector<std::string>& species() const { return species_; }
  bool has_species(const std::string& name) const;

  /// Sites of `species` drawn from sentence bodies, sorted by name.
  /// Unknown species yield an empty list.
  const std::vector<std::string>& sites(const std::string& species) const;

  /// Index of `site` in the per-species site order, or -1.
  int site_index(const std::string& species, const std::string& site) const;

  int species_index(const std::string& name) const;

  long initial_count(const std::string& species) const;
  void set_initial_count(const std::string& species, long count);
  void set_default_initial_count(long count);
  double sample_time() const { return sample_time_; }
  void set_sample_time(double t) { sample_time_ = t; }

 private:
  std::vector<Sentence> sentences_;
  std::vector<std::string> species_;
  std::map<std::string, int> species_index_;
  std::vector<std::vector<std::string>> sites_;
  std::map<std::string, long> initial_counts_;
  long default_count_ = kDefaultPopulation;
  double sample_time_ = kDefaultSampleTime;
};

/// Species in sentence bodies, never those appearing only in conditions.
std::set<std::string> species_of(const Model& model);

/// Sites of `species` from sentence bodies only.
std::set<std::string> sites_of(const Model& model, const std::string& species);

/// States of `species` compatible with the given conditions: every subset S
/// of its sites with all pos-sites of the species inside S and no site of S
/// in neg. Result is in graded-lexicographic order.
StateSet states(const Model& model, const std::string& species,
                const std::vector<SiteRef>& pos,
                const std::vector<SiteRef>& neg);

/// states() for one sentence, on the side given by `ref`.
StateSet states_for(const Model& model, const Sentence& sentence,
                    const SiteRef& ref);

/// All subsets of the species' sites in graded-lexicographic order
/// (by cardinality, then lexicographically on the ordered site list).
std::vector<StateMask> all_states(const Model& model,
                                  const std::string& species);

/// Rank of `mask` in the graded-lexicographic enumeration.
int state_index(const Model& model, const std::string& species,
                StateMask mask);

std::string state_name(const Model& model, const std::string& species,
                       StateMask mask);

/// Total order on sites used wherever the translation needs to pick a side:
/// by site name, ties broken by species name.
bool site_precedes(const std::string& site_a, const std::string& species_a,
                   const std::string& site_b, const std::string& species_b);

struct DesugarOptions {
  /// When false, sentences are taken literally: no implicit bound/unbound
  /// entries are added and transformation condition sets stay as written.
  bool implicit_conditions = true;
};

/// Lowers one surface sentence to a core sentence: phosphorylation and
/// dephosphorylation become association/dissociation with (Phosph, phosph),
/// decay becomes a transformation without target, missing rates default to
/// 1.0, and (with implicit_conditions) association bodies are added to neg
/// and dissociation bodies to pos.
Sentence desugar(const SurfaceSentence& surface,
                 const DesugarOptions& options = {});

/// Desugars a whole surface model and fills the model-dependent implicit
/// conditions (a transformation's neg set is every site of its source).
Model build_model(const std::vector<SurfaceSentence>& surface,
                  const DesugarOptions& options = {});

}  // namespace pim
