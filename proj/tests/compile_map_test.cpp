#include <doctest.h>

#include <stdexcept>

#include "pim/compile_map.hpp"
#include "testutil.hpp"

using namespace pim;

TEST_CASE("the dimer model's compile map is exact") {
  Model m = load_model(models_dir() + "/ab_dimer.pim");
  CompileMap map = build_compile_map(m);

  const char* expected =
      "A:\n"
      "  <{}, {(a1,{(B,b,{{}},1.0)}),(a2,{(C,c,{{}},1.0)})}, {}, {}>\n"
      "  <{a1}, {(a2,{(C,c,{{}},1.0)})}, {(a1,{(B,b,{{b}},4.0)})}, {}>\n"
      "  <{a2}, {(a1,{(B,b,{{}},1.0)})}, {}, {}>\n"
      "  <{a1,a2}, {}, {(a1,{(B,b,{{b}},2.0)})}, {}>\n"
      "B:\n"
      "  <{}, {(b,{(A,a1,{{},{a2}},1.0)})}, {}, {}>\n"
      "  <{b}, {}, {(b,{(A,a1,{{a1,a2}},2.0),(A,a1,{{a1}},4.0)})}, {}>\n"
      "C:\n"
      "  <{}, {(c,{(A,a2,{{},{a1}},1.0)})}, {}, {}>\n"
      "  <{c}, {}, {}, {}>\n";
  CHECK(dump(map, m) == expected);

  // The same facts, structurally.
  const SpeciesActions* a = map.find("A");
  REQUIRE(a != nullptr);
  REQUIRE(a->states.size() == 4);
  const auto& at_a1 = a->states[1];
  CHECK(at_a1.state == 1);
  REQUIRE(at_a1.dissoc.count("a1") == 1);
  CHECK(at_a1.dissoc.at("a1")[0] ==
        Partner{"B", "b", StateSet{1}, 4.0, 4});

  const SpeciesActions* b = map.find("B");
  REQUIRE(b != nullptr);
  CHECK(b->states[0].assoc.at("b")[0] ==
        Partner{"A", "a1", StateSet{0, 2}, 1.0, 1});
  REQUIRE(b->states[1].dissoc.at("b").size() == 2);
  CHECK(b->states[1].dissoc.at("b")[0].rate == 2.0);
  CHECK(b->states[1].dissoc.at("b")[1].rate == 4.0);
}

TEST_CASE("transformation-only model maps to a single delay action") {
  ParseResult r = parse("A becomes B with rate 1.0");
  REQUIRE(r.ok());
  CompileMap map = build_compile_map(r.model);
  const SpeciesActions* a = map.find("A");
  REQUIRE(a != nullptr);
  REQUIRE(a->states.size() == 1);
  CHECK(a->states[0].assoc.empty());
  CHECK(a->states[0].dissoc.empty());
  REQUIRE(a->states[0].transform.size() == 1);
  CHECK(a->states[0].transform[0] == TransformAction{"B", 1.0, 1});
  const SpeciesActions* b = map.find("B");
  REQUIRE(b != nullptr);
  CHECK(b->states[0].transform.empty());
}

TEST_CASE("invalid models are refused") {
  Model m = load_model(data_dir() + "/invalid_mixed.pim",
                       DesugarOptions{false});
  CHECK_THROWS_AS(build_compile_map(m), std::invalid_argument);
}

TEST_CASE("the state budget is enforced per species") {
  std::string text;
  for (int i = 0; i < 5; ++i) {
    text += "site a" + std::to_string(i) +
            " on A associates site b on B with rate 1.0\n";
  }
  ParseResult r = parse(text);
  REQUIRE(r.ok());
  CHECK(total_state_count(r.model) == 34);  // 2^5 + 2^1

  CHECK_NOTHROW(build_compile_map(r.model, 34));
  CHECK_THROWS_AS(build_compile_map(r.model, 33), std::length_error);
  try {
    build_compile_map(r.model, 16);
  } catch (const std::length_error& e) {
    CHECK(std::string(e.what()).find("'A'") != std::string::npos);
  }
}
