#include <doctest.h>

#include "pim/pi/codegen.hpp"
#include "pim/pi/compare.hpp"
#include "pim/pi/reader.hpp"
#include "pim/pi/render.hpp"
#include "testutil.hpp"

using namespace pim;
using namespace pim::pi;

namespace {

Program compile_file(const std::string& path) {
  Model m = load_model(path);
  return generate(m, build_compile_map(m));
}

Program compile_text(const std::string& text) {
  ParseResult r = parse(text);
  REQUIRE(r.ok());
  return generate(r.model, build_compile_map(r.model));
}

}  // namespace

TEST_CASE("dissociation slots: one per sentence at half rate, else default") {
  Model m = load_model(models_dir() + "/ab_dimer.pim");

  auto a1 = R_set(m, "A", "a1");
  REQUIRE(a1.size() == 2);
  CHECK(a1[0] == Slot{"a1", 1.0, 1, 2, "a11"});
  CHECK(a1[1] == Slot{"a1", 2.0, 2, 3, "a12"});

  auto a2 = R_set(m, "A", "a2");
  REQUIRE(a2.size() == 1);
  CHECK(a2[0] == Slot{"a2", 1.0, 1, -1, "a2"});

  auto b = R_set(m, "B", "b");
  REQUIRE(b.size() == 2);
  CHECK(b[0].rate == 1.0);
  CHECK(b[1].rate == 2.0);
  CHECK(b[0].name == "b1");
}

TEST_CASE("only the smaller side of a pair creates bond channels") {
  Model m = load_model(models_dir() + "/ab_dimer.pim");
  SiteRef a1{"A", "a1"}, b{"B", "b"}, a2{"A", "a2"}, c{"C", "c"};

  CHECK(pair_dissociations(m, a1, b) == std::vector<int>{2, 3});
  CHECK(pair_dissociations(m, b, a1) == std::vector<int>{2, 3});
  CHECK(pair_dissociations(m, a2, c).empty());

  auto u = U_set(m, a1, b);
  REQUIRE(u.size() == 2);
  CHECK(u[0].name == "a11");
  CHECK(u[1].name == "a12");
  CHECK(U_set(m, b, a1).empty());  // b does not precede a1

  auto v = U_set(m, a2, c);
  REQUIRE(v.size() == 1);
  CHECK(v[0].is_default());
}

TEST_CASE("the receptor model compiles to the expected shape") {
  Program p = compile_file(models_dir() + "/fcr_phospho.pim");

  REQUIRE(p.defs.size() == 12);
  CHECK(p.defs[0].name == "FcR0");
  CHECK(p.defs[7].name == "FcR7");
  CHECK(p.defs[8].name == "IgG0");
  CHECK(p.defs[10].name == "Phosph0");
  CHECK(p.defs[4].params == std::vector<std::string>{"f", "y"});
  CHECK(p.defs[5].params == std::vector<std::string>{"f", "z"});
  CHECK(p.defs[7].params == std::vector<std::string>{"f", "y", "z"});
  CHECK(p.defs[7].branches.empty());

  REQUIRE(p.globals.size() == 4);
  CHECK(p.globals[0].name == "fi1");
  CHECK(p.globals[0].rate == 1.0);
  CHECK(p.globals[0].arity == 1);
  CHECK(p.globals[3].name == "nil");
  CHECK(p.globals[3].rate == 0.0);

  // FcR0: one weighted send of a fresh default channel.
  REQUIRE(p.defs[0].branches.size() == 1);
  const Branch& bind = p.defs[0].branches[0];
  CHECK(bind.kind == BranchKind::Output);
  CHECK(bind.weight == 2.0);
  CHECK(bind.channel == ValueRef{ValueKind::Global, 0});
  REQUIRE(p.defs[0].locals.size() == 1);
  CHECK(p.defs[0].locals[0].rate == 1.0);
  CHECK(bind.payload == std::vector<ValueRef>{{ValueKind::Local, 0}});
  CHECK(bind.target == 1);

  // FcR1: the two phosphorylation receives.
  REQUIRE(p.defs[1].branches.size() == 2);
  CHECK(p.defs[1].branches[0].kind == BranchKind::Input);
  CHECK(p.defs[1].branches[0].recv_names == std::vector<std::string>{"y"});
  CHECK(p.defs[1].branches[0].target == 4);
  CHECK(p.defs[1].branches[0].args ==
        std::vector<ValueRef>{{ValueKind::Param, 0}, {ValueKind::Recv, 0}});
  CHECK(p.defs[1].branches[1].target == 5);

  // Phosph0: both sends share one local channel.
  REQUIRE(p.defs[10].locals.size() == 1);
  REQUIRE(p.defs[10].branches.size() == 2);
  CHECK(p.defs[10].branches[0].payload == p.defs[10].branches[1].payload);
  CHECK(p.defs[10].branches[0].weight == 1.0);

  CHECK(p.sample_time == 10.0);
  CHECK(p.plot ==
        std::vector<int>{7, 6, 5, 4, 3, 2, 1, 0, 9, 8, 11, 10});
  REQUIRE(p.runs.size() == 3);
  for (const RunStatement& run : p.runs) CHECK(run.count == 1000);
  CHECK(p.runs[0].def == 0);
  CHECK(p.runs[1].def == 8);
  CHECK(p.runs[2].def == 10);
}

TEST_CASE("unused slots of a multi-partner site are filled with nil") {
  Program p = compile_file(models_dir() + "/competing_partners.pim");
  // Globals: ab1, ac2, nil.
  REQUIRE(p.globals.size() == 3);
  int nil = p.find_global("nil");
  REQUIRE(nil == 2);

  int a0 = p.find_def("A0");
  REQUIRE(a0 >= 0);
  REQUIRE(p.defs[a0].branches.size() == 2);
  const Branch& to_b = p.defs[a0].branches[0];
  const Branch& to_c = p.defs[a0].branches[1];
  CHECK(to_b.payload.size() == 1);
  REQUIRE(to_b.args.size() == 2);
  CHECK(to_b.args[0].kind == ValueKind::Local);
  CHECK(to_b.args[1] == ValueRef{ValueKind::Global, nil});
  REQUIRE(to_c.args.size() == 2);
  CHECK(to_c.args[0] == ValueRef{ValueKind::Global, nil});
  CHECK(to_c.args[1].kind == ValueKind::Local);
}

TEST_CASE("a receiver with no channels for the pair discards and fills nil") {
  Program p = compile_text(
      "site r on R associates site p on P with rate 1.0\n"
      "site r on R associates site q on Q with rate 1.0\n"
      "site r on R dissociates site p on P with rate 2.0");
  int nil = p.find_global("nil");
  int r0 = p.find_def("R0");
  REQUIRE(r0 >= 0);
  REQUIRE(p.defs[r0].branches.size() == 2);

  // Binding P uses the bond channel; binding Q has none to receive.
  const Branch& from_p = p.defs[r0].branches[0];
  CHECK(from_p.kind == BranchKind::Input);
  CHECK(from_p.recv_names == std::vector<std::string>{"r1"});
  CHECK(from_p.args == std::vector<ValueRef>{{ValueKind::Recv, 0}});

  const Branch& from_q = p.defs[r0].branches[1];
  CHECK(from_q.kind == BranchKind::Input);
  CHECK(from_q.recv_names.size() == 1);
  CHECK(from_q.args == std::vector<ValueRef>{{ValueKind::Global, nil}});
}

TEST_CASE("dissociation emits both polarities on the bond parameter") {
  Program p = compile_file(models_dir() + "/fcr_src_kinase.pim");
  REQUIRE(p.defs.size() == 22);
  int fcr15 = p.find_def("FcR15");
  REQUIRE(fcr15 == 15);
  REQUIRE(p.defs[15].branches.size() == 2);
  const Branch& give = p.defs[15].branches[0];
  const Branch& take = p.defs[15].branches[1];
  CHECK(give.kind == BranchKind::Output);
  CHECK(give.payload.empty());
  CHECK(take.kind == BranchKind::Input);
  CHECK(take.recv_names.empty());
  CHECK(give.channel == take.channel);
  CHECK(give.channel.kind == ValueKind::Param);
  CHECK(give.target == take.target);

  // The bond channel is declared at half the sentence rate.
  int fcr1 = p.find_def("FcR1");
  REQUIRE(p.defs[fcr1].locals.size() == 1);
  CHECK(p.defs[fcr1].locals[0].name == "s1");
  CHECK(p.defs[fcr1].locals[0].rate == 0.5);
}

TEST_CASE("transformations become delays") {
  Program p = compile_file(models_dir() + "/chain.pim");
  REQUIRE(p.defs.size() == 3);
  const Branch& a = p.defs[0].branches.at(0);
  CHECK(a.kind == BranchKind::Delay);
  CHECK(a.weight == 1.0);
  CHECK(a.target == 1);
  const Branch& c = p.defs[2].branches.at(0);
  CHECK(c.weight == 0.25);
  CHECK(c.target == -1);  // decay terminates
}

TEST_CASE("site names never collide with the generated namespace") {
  // A site named like the nil channel, and one named like a definition.
  for (const char* text :
       {"site nil on A associates site b on B with rate 1.0",
        "site A0 on A associates site b on B with rate 1.0",
        "site x on D associates site e on E with rate 1.0\n"
        "site x on D dissociates site e on E with rate 2.0\n"
        "site x1 on D associates site g on G with rate 1.0"}) {
    CAPTURE(text);
    Program p = compile_text(text);
    CHECK(lint(p).empty());
    // Round-tripping through the text form proves the names are unambiguous.
    ReadResult back = read_program(render(p));
    REQUIRE(back.ok());
    CHECK(compare_programs(p, back.program).equivalent);
  }
}

TEST_CASE("every shipped model compiles to a well-formed program") {
  for (const char* name :
       {"fcr_phospho", "fcr_src_kinase", "ab_dimer", "decay", "chain",
        "competing_partners", "phospho_cycle"}) {
    CAPTURE(name);
    Program p = compile_file(models_dir() + "/" + name + ".pim");
    CHECK(lint(p).empty());
  }
}
