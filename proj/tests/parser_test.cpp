#include <doctest.h>

#include "pim/parser.hpp"
#include "testutil.hpp"

using namespace pim;

TEST_CASE("the three-sentence receptor model parses to exact tuples") {
  ParseResult r = parse(read_file(models_dir() + "/fcr_phospho.pim"));
  REQUIRE(r.ok());
  const auto& s = r.model.sentences();
  REQUIRE(s.size() == 3);

  CHECK(s[0].kind == SentenceKind::Association);
  CHECK(s[0].left == SiteRef{"FcR", "f"});
  CHECK(*s[0].right == SiteRef{"IgG", "i"});
  CHECK(s[0].rate == 2.0);
  CHECK(s[0].pos.empty());
  CHECK(s[0].neg ==
        std::vector<SiteRef>{SiteRef{"FcR", "f"}, SiteRef{"IgG", "i"}});

  for (int k : {1, 2}) {
    CHECK(s[k].kind == SentenceKind::Association);
    CHECK(*s[k].right == SiteRef{"Phosph", "phosph"});
    CHECK(s[k].rate == 1.0);
    CHECK(s[k].pos == std::vector<SiteRef>{SiteRef{"FcR", "f"}});
  }
  CHECK(s[1].left == SiteRef{"FcR", "y"});
  CHECK(s[2].left == SiteRef{"FcR", "z"});
}

TEST_CASE("the five-sentence kinase model includes the Src dissociation") {
  ParseResult r = parse(read_file(models_dir() + "/fcr_src_kinase.pim"));
  REQUIRE(r.ok());
  const auto& s = r.model.sentences();
  REQUIRE(s.size() == 5);
  CHECK(s[3].kind == SentenceKind::Association);
  CHECK(s[3].pos == std::vector<SiteRef>{SiteRef{"FcR", "f"}});
  CHECK(s[4].kind == SentenceKind::Dissociation);
  CHECK(s[4].left == SiteRef{"FcR", "s"});
  CHECK(*s[4].right == SiteRef{"Src", "sr"});
  CHECK(s[4].rate == 1.0);  // rateless sentence
  CHECK(s[4].pos ==
        std::vector<SiteRef>{SiteRef{"FcR", "s"}, SiteRef{"Src", "sr"}});
}

TEST_CASE("explicit transformation") {
  ParseResult r = parse("A becomes B with rate 3.0");
  REQUIRE(r.ok());
  const Sentence& s = r.model.sentences()[0];
  CHECK(s.kind == SentenceKind::Transformation);
  CHECK(s.left.species == "A");
  CHECK(!s.left.has_site());
  CHECK(s.right->species == "B");
  CHECK(s.rate == 3.0);
}

TEST_CASE("syntax errors recover at the next sentence") {
  ParseResult r = parse("A jumps\nB becomes C with rate 1.0\nD hops");
  CHECK(!r.ok());
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].span.line == 1);
  CHECK(r.diagnostics[1].span.line == 3);
  REQUIRE(r.surface.size() == 1);  // the good sentence still came through
  CHECK(r.surface[0].left_species == "B");
}

TEST_CASE("rates must be positive") {
  ParseResult r = parse("A decays with rate 0.0");
  CHECK(!r.ok());
}

TEST_CASE("transformations take no conditions") {
  ParseResult r = parse("A becomes B with rate 1.0 if site a on A is bound");
  CHECK(!r.ok());
}

TEST_CASE("the sugar species name is reserved") {
  ParseResult r = parse("A becomes Phosph with rate 1.0");
  CHECK(!r.ok());
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics[0].message.find("reserved") != std::string::npos);
}

TEST_CASE("empty input is an error") {
  ParseResult r = parse("(* nothing here *)");
  CHECK(!r.ok());
}

TEST_CASE("pretty_print round-trips every shipped model") {
  for (const char* name :
       {"fcr_phospho", "fcr_src_kinase", "ab_dimer", "decay", "chain",
        "competing_partners", "phospho_cycle"}) {
    ParseResult first =
        parse(read_file(models_dir() + "/" + name + ".pim"));
    REQUIRE(first.ok());
    std::string printed = pretty_print(first.model);
    ParseResult second = parse(printed);
    REQUIRE(second.ok());
    CHECK(first.model.sentences() == second.model.sentences());
  }
}

TEST_CASE("pretty_print writes the sugar forms and explicit rates") {
  ParseResult r = parse(
      "site y on R gets phosphorylated\n"
      "site y on R gets dephosphorylated with rate 2.0");
  REQUIRE(r.ok());
  std::string printed = pretty_print(r.model);
  CHECK(printed.find("gets phosphorylated") != std::string::npos);
  CHECK(printed.find("gets dephosphorylated") != std::string::npos);
  CHECK(printed.find("with rate 1.0") != std::string::npos);
}
