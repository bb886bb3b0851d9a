#include <doctest.h>

#include "pim/lexer.hpp"

using namespace pim;

TEST_CASE("association sentence tokenizes to twelve tokens") {
  LexResult r =
      tokenize("site f on FcR associates site i on IgG with rate 2.0");
  REQUIRE(r.ok());
  REQUIRE(r.tokens.size() == 13);  // 12 plus the end marker
  CHECK(r.tokens[0].kind == TokenKind::KwSite);
  CHECK(r.tokens[1].kind == TokenKind::Identifier);
  CHECK(r.tokens[1].text == "f");
  CHECK(r.tokens[2].kind == TokenKind::KwOn);
  CHECK(r.tokens[3].text == "FcR");
  CHECK(r.tokens[4].kind == TokenKind::KwAssociates);
  CHECK(r.tokens[9].kind == TokenKind::KwWith);
  CHECK(r.tokens[10].kind == TokenKind::KwRate);
  CHECK(r.tokens[11].kind == TokenKind::Float);
  CHECK(r.tokens[11].value == doctest::Approx(2.0));
  CHECK(r.tokens[12].kind == TokenKind::EndOfInput);
}

TEST_CASE("keywords are case-sensitive") {
  LexResult r = tokenize("Site site BOUND bound");
  REQUIRE(r.ok());
  CHECK(r.tokens[0].kind == TokenKind::Identifier);
  CHECK(r.tokens[1].kind == TokenKind::KwSite);
  CHECK(r.tokens[2].kind == TokenKind::Identifier);
  CHECK(r.tokens[3].kind == TokenKind::KwBound);
}

TEST_CASE("newlines only advance positions") {
  LexResult one = tokenize("A becomes B with rate 1.0");
  LexResult split = tokenize("A\nbecomes\n  B with\nrate 1.0");
  REQUIRE(one.ok());
  REQUIRE(split.ok());
  REQUIRE(one.tokens.size() == split.tokens.size());
  for (std::size_t i = 0; i < one.tokens.size(); ++i) {
    CHECK(one.tokens[i].kind == split.tokens[i].kind);
    CHECK(one.tokens[i].text == split.tokens[i].text);
  }
  CHECK(split.tokens[1].span.line == 2);
  CHECK(split.tokens[2].span.line == 3);
}

TEST_CASE("comments nest and vanish") {
  LexResult r = tokenize("(* note (* nested *) still a note *) A decays");
  REQUIRE(r.ok());
  REQUIRE(r.tokens.size() == 3);
  CHECK(r.tokens[0].text == "A");
  CHECK(r.tokens[1].kind == TokenKind::KwDecays);
}

TEST_CASE("unterminated comment is reported") {
  LexResult r = tokenize("A decays (* lost");
  CHECK(!r.ok());
  REQUIRE(r.diagnostics.size() == 1);
}

TEST_CASE("stray characters are reported with their position") {
  LexResult r = tokenize("A becomes % B");
  CHECK(!r.ok());
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics[0].span.line == 1);
}

TEST_CASE("name validity") {
  CHECK(is_valid_name("FcR"));
  CHECK(is_valid_name("a1"));
  CHECK(is_valid_name("sr_2"));
  CHECK(!is_valid_name("rate"));
  CHECK(!is_valid_name("2x"));
  CHECK(!is_valid_name(""));
}
