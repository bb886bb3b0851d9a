#include <doctest.h>

#include <string>

#include "pim/pi/codegen.hpp"
#include "pim/pi/compare.hpp"
#include "pim/pi/reader.hpp"
#include "pim/pi/render.hpp"
#include "testutil.hpp"

using namespace pim;
using namespace pim::pi;

namespace {

const char* kCorpus[] = {"fcr_phospho",        "fcr_src_kinase", "ab_dimer",
                         "decay",              "chain",          "competing_partners",
                         "phospho_cycle"};

Program compile_file(const std::string& path) {
  Model m = load_model(path);
  return generate(m, build_compile_map(m));
}

}  // namespace

TEST_CASE("rendering produces the expected surface forms") {
  Program p = compile_file(models_dir() + "/fcr_phospho.pim");
  std::string text = render(p);

  CHECK(text.find("directive sample 10.0\n") != std::string::npos);
  CHECK(text.find("directive plot FcR7(); FcR6();") != std::string::npos);
  CHECK(text.find("new fi1@1.0:chan(chan)\n") != std::string::npos);
  CHECK(text.find("new nil@0.0:chan\n") != std::string::npos);
  CHECK(text.find("let FcR0() =\n") != std::string::npos);
  CHECK(text.find("and FcR1(f:chan) =\n") != std::string::npos);
  CHECK(text.find("new f@1.0:chan") != std::string::npos);
  CHECK(text.find("!fi1(f)*2.0; FcR1(f)") != std::string::npos);
  CHECK(text.find("do ?phosphy2(y); FcR4(f,y)") != std::string::npos);
  CHECK(text.find("or ?phosphz3(z); FcR5(f,z)") != std::string::npos);
  CHECK(text.find("run 1000 of FcR0()\n") != std::string::npos);
  CHECK(text.find("run 1000 of Phosph0()\n") != std::string::npos);

  // Unweighted sends and delays.
  Program q = compile_file(models_dir() + "/fcr_src_kinase.pim");
  std::string s = render(q);
  CHECK(s.find("new s1@0.5:chan") != std::string::npos);
  CHECK(s.find("or !s1; ") != std::string::npos);
  CHECK(s.find("or ?s1; ") != std::string::npos);

  Program d = compile_file(models_dir() + "/decay.pim");
  CHECK(render(d).find("delay@0.5; ()") != std::string::npos);
}

TEST_CASE("rendered programs read back unchanged") {
  for (const char* name : kCorpus) {
    CAPTURE(name);
    Program p = compile_file(models_dir() + "/" + name + ".pim");
    std::string text = render(p);
    ReadResult r = read_program(text);
    REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty()
                                 ? std::string{}
                                 : format_diagnostic(r.diagnostics[0])));
    CHECK(compare_programs(p, r.program).equivalent);
    // The text form is a fixed point.
    CHECK(render(r.program) == text);
  }
}

TEST_CASE("reference programs match the generated ones") {
  struct Case {
    const char* model;
    const char* golden;
  } cases[] = {
      {"fcr_phospho.pim", "fcr_phospho_golden.spim"},
      {"fcr_src_kinase.pim", "fcr_src_kinase_golden.spim"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.model);
    Program mine = compile_file(models_dir() + "/" + c.model);
    ReadResult golden = read_program(read_file(data_dir() + "/" + c.golden));
    REQUIRE_MESSAGE(golden.ok(),
                    (golden.diagnostics.empty()
                         ? std::string{}
                         : format_diagnostic(golden.diagnostics[0])));
    CompareResult cmp = compare_programs(mine, golden.program);
    CHECK_MESSAGE(cmp.equivalent, cmp.mismatch);
  }
}

TEST_CASE("comparison is name-blind but nothing else") {
  Program a = compile_file(models_dir() + "/fcr_phospho.pim");

  SUBCASE("consistent renaming stays equivalent") {
    Program b = a;
    b.globals[0].name = "bond";
    b.defs[0].name = "Receptor0";
    CHECK(compare_programs(a, b).equivalent);
  }
  SUBCASE("a channel rate difference is caught") {
    Program b = a;
    b.globals[0].rate = 2.0;
    CompareResult r = compare_programs(a, b);
    CHECK(!r.equivalent);
    CHECK(!r.mismatch.empty());
  }
  SUBCASE("a branch weight difference is caught") {
    Program b = a;
    b.defs[0].branches[0].weight = 2.5;
    CHECK(!compare_programs(a, b).equivalent);
  }
  SUBCASE("an initial population difference is caught") {
    Program b = a;
    b.runs[1].count = 999;
    CHECK(!compare_programs(a, b).equivalent);
  }
  SUBCASE("a plot reordering is caught") {
    Program b = a;
    std::swap(b.plot[0], b.plot[1]);
    CHECK(!compare_programs(a, b).equivalent);
  }
  SUBCASE("a retargeted continuation is caught") {
    Program b = a;
    b.defs[1].branches[0].target = 5;
    CHECK(!compare_programs(a, b).equivalent);
  }
}

TEST_CASE("reader reports malformed input") {
  CHECK(!read_program("directive sample 1.0\nrun 10 of X()").ok());
  CHECK(!read_program("(* never closed").ok());

  // An empty source is the (vacuously well-formed) empty program.
  ReadResult empty = read_program("");
  CHECK(empty.ok());
  CHECK(empty.program.defs.empty());

  // Out-of-scope name.
  ReadResult r = read_program(
      "directive sample 1.0\n"
      "let A() = ( !missing; () )\n"
      "run 1 of A()");
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].message.find("missing") != std::string::npos);
}
