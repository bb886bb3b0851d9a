#include <doctest.h>

#include "pim/model.hpp"
#include "pim/parser.hpp"
#include "testutil.hpp"

using namespace pim;

namespace {

Model from_text(const std::string& text, DesugarOptions options = {}) {
  ParseResult r = parse(text, options);
  REQUIRE(r.ok());
  return std::move(r.model);
}

}  // namespace

TEST_CASE("species keep first-occurrence order, sites sort by name") {
  Model m = load_model(models_dir() + "/fcr_src_kinase.pim");
  CHECK(m.species() ==
        std::vector<std::string>{"FcR", "IgG", "Phosph", "Src"});
  CHECK(m.sites("FcR") == std::vector<std::string>{"f", "s", "y", "z"});
  CHECK(m.sites("Src") == std::vector<std::string>{"sr"});
  CHECK(m.sites("nosuch").empty());
  CHECK(m.site_index("FcR", "y") == 2);
  CHECK(m.site_index("FcR", "q") == -1);
}

TEST_CASE("states enumerate in graded-lexicographic order") {
  Model m = load_model(models_dir() + "/fcr_src_kinase.pim");
  // Site bits: f=1, s=2, y=4, z=8.
  std::vector<StateMask> expected{0, 1,  2,  4,  8,  3,  5,  9,
                                  6, 10, 12, 7,  11, 13, 14, 15};
  CHECK(all_states(m, "FcR") == expected);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(state_index(m, "FcR", expected[i]) == static_cast<int>(i));
  }
  CHECK(state_name(m, "FcR", 5) == "{f,y}");
  CHECK(state_name(m, "FcR", 0) == "{}");
}

TEST_CASE("states respect bound and unbound conditions") {
  Model m = load_model(models_dir() + "/fcr_src_kinase.pim");
  StateSet got = states(m, "FcR", {SiteRef{"FcR", "f"}},
                        {SiteRef{"FcR", "y"}});
  CHECK(got == StateSet{1, 3, 9, 11});
  CHECK(states(m, "FcR", {}, {}).size() == 16);
  // Contradictory conditions leave nothing.
  CHECK(states(m, "FcR", {SiteRef{"FcR", "f"}}, {SiteRef{"FcR", "f"}})
            .empty());
}

TEST_CASE("site order is by site name, species breaks ties") {
  CHECK(site_precedes("a", "Z", "b", "A"));
  CHECK(!site_precedes("b", "A", "a", "Z"));
  CHECK(site_precedes("a", "A", "a", "B"));
  CHECK(!site_precedes("a", "B", "a", "A"));
}

TEST_CASE("phosphorylation desugars to an association with Phosph") {
  Model m = from_text("site y on FcR gets phosphorylated if site f on FcR is bound");
  REQUIRE(m.sentences().size() == 1);
  const Sentence& s = m.sentences()[0];
  CHECK(s.kind == SentenceKind::Association);
  CHECK(s.left == SiteRef{"FcR", "y"});
  CHECK(*s.right == SiteRef{kPhosphSpecies, kPhosphSite});
  CHECK(s.pos == std::vector<SiteRef>{SiteRef{"FcR", "f"}});
  CHECK(s.neg == std::vector<SiteRef>{SiteRef{"FcR", "y"},
                                      SiteRef{kPhosphSpecies, kPhosphSite}});
  CHECK(s.rate == 1.0);  // no rate clause
}

TEST_CASE("dephosphorylation desugars to a dissociation from Phosph") {
  Model m = from_text("site y on R gets dephosphorylated with rate 0.25");
  const Sentence& s = m.sentences()[0];
  CHECK(s.kind == SentenceKind::Dissociation);
  CHECK(s.pos == std::vector<SiteRef>{SiteRef{"Phosph", "phosph"},
                                      SiteRef{"R", "y"}});
  CHECK(s.neg.empty());
  CHECK(s.rate == 0.25);
}

TEST_CASE("decay is a transformation without a target") {
  Model m = from_text("A decays with rate 0.5");
  const Sentence& s = m.sentences()[0];
  CHECK(s.kind == SentenceKind::Transformation);
  CHECK(!s.right.has_value());
  CHECK(s.pos.empty());
  CHECK(s.neg.empty());  // A has no sites
}

TEST_CASE("transformations leave every site of the source unbound") {
  Model m = from_text(
      "site a on A associates site b on B with rate 1.0\n"
      "A becomes C with rate 2.0");
  const Sentence& s = m.sentences()[1];
  CHECK(s.neg == std::vector<SiteRef>{SiteRef{"A", "a"}});
}

TEST_CASE("raw mode keeps conditions literal") {
  DesugarOptions raw{false};
  Model m = from_text("site a on A associates site b on B with rate 1.0", raw);
  CHECK(m.sentences()[0].neg.empty());
  Model t = from_text(
      "site a on A associates site b on B with rate 1.0\n"
      "A becomes C with rate 2.0",
      raw);
  CHECK(t.sentences()[1].neg.empty());
}

TEST_CASE("initial counts default and override") {
  Model m = from_text("A decays with rate 0.5");
  CHECK(m.initial_count("A") == 1000);
  m.set_initial_count("A", 42);
  CHECK(m.initial_count("A") == 42);
  m.set_default_initial_count(7);
  CHECK(m.initial_count("A") == 42);  // explicit value wins
  Model n = from_text("A decays with rate 0.5");
  n.set_default_initial_count(7);
  CHECK(n.initial_count("A") == 7);
}

TEST_CASE("condition-only species do not become model species") {
  // Conditions may name species outside the body; the validator rejects
  // them, but the tables must not invent species from them.
  DesugarOptions raw{false};
  Model m = from_text(
      "site a on A associates site b on B with rate 1.0 if site c on C is bound",
      raw);
  CHECK(m.species() == std::vector<std::string>{"A", "B"});
  CHECK(!m.has_species("C"));
}
