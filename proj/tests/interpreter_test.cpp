#include <doctest.h>

#include <numeric>
#include <optional>
#include <stdexcept>

#include "pim/pi/codegen.hpp"
#include "pim/pi/interpreter.hpp"
#include "pim/pi/reader.hpp"
#include "testutil.hpp"

using namespace pim;
using namespace pim::pi;

namespace {

Program compile_file(const std::string& path) {
  Model m = load_model(path);
  return generate(m, build_compile_map(m));
}

double row_sum(const std::vector<double>& row, std::size_t lo,
               std::size_t hi) {
  return std::accumulate(row.begin() + static_cast<long>(lo),
                         row.begin() + static_cast<long>(hi), 0.0);
}

}  // namespace

TEST_CASE("the initial state matches the run statements") {
  Program p = compile_file(models_dir() + "/fcr_phospho.pim");
  Interpreter interp(p, 1);

  REQUIRE(interp.counts().size() == 12);
  CHECK(interp.count(0) == 1000);   // FcR0
  CHECK(interp.count(8) == 1000);   // IgG0
  CHECK(interp.count(10) == 1000);  // Phosph0
  for (int d : {1, 2, 3, 4, 5, 6, 7, 9, 11}) CHECK(interp.count(d) == 0);

  TraceTable t = interp.simulate(1.0, 4);
  REQUIRE(t.columns.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) CHECK(t.columns[i] == p.defs[i].name);
  REQUIRE(t.rows.size() == 5);
  CHECK(t.times[0] == 0.0);
  CHECK(t.times[2] == doctest::Approx(0.5));
  CHECK(t.times[4] == doctest::Approx(1.0));
  CHECK(t.rows[0][0] == 1000.0);
  CHECK(t.rows[0][8] == 1000.0);
  CHECK(t.rows[0][10] == 1000.0);
  CHECK(t.rows[0][4] == 0.0);
}

TEST_CASE("molecule counts are conserved across binding and modification") {
  Program p = compile_file(models_dir() + "/fcr_phospho.pim");
  Interpreter interp(p, 7);
  TraceTable t = interp.simulate(10.0, 20);
  REQUIRE(t.rows.size() == 21);
  for (const auto& row : t.rows) {
    CHECK(row_sum(row, 0, 8) == 1000.0);    // receptors
    CHECK(row_sum(row, 8, 10) == 1000.0);   // ligands
    CHECK(row_sum(row, 10, 12) == 1000.0);  // kinase molecules
  }
  // Something actually happened.
  CHECK(t.rows.back()[0] < 1000.0);
}

TEST_CASE("equal seeds give identical traces") {
  Program p = compile_file(models_dir() + "/fcr_phospho.pim");
  TraceTable a = Interpreter(p, 42).simulate(5.0, 10);
  TraceTable b = Interpreter(p, 42).simulate(5.0, 10);
  CHECK(to_csv(a) == to_csv(b));

  TraceTable c = Interpreter(p, 43).simulate(5.0, 10);
  CHECK(to_csv(a) != to_csv(c));
}

TEST_CASE("event times increase strictly") {
  Program p = compile_file(models_dir() + "/ab_dimer.pim");
  Interpreter interp(p, 11);
  double last = 0.0;
  for (int i = 0; i < 200; ++i) {
    std::optional<double> t = interp.step();
    REQUIRE(t.has_value());
    CHECK(*t > last);
    CHECK(*t == interp.time());
    last = *t;
  }
}

TEST_CASE("a system with nothing to do stops") {
  Program p = compile_file(models_dir() + "/fcr_phospho.pim");
  // Drop the ligand population: binding needs a partner, phosphorylation
  // needs a bound receptor, so no channel has a sender/receiver pairing.
  p.runs.erase(p.runs.begin() + 1);
  Interpreter interp(p, 3);
  CHECK(!interp.step().has_value());
  TraceTable t = interp.simulate(2.0, 4);
  REQUIRE(t.rows.size() == 5);
  for (const auto& row : t.rows) {
    CHECK(row[0] == 1000.0);
    CHECK(row[10] == 1000.0);
  }
}

TEST_CASE("run statements for one definition accumulate") {
  ReadResult r = read_program(
      "directive sample 10.0\n"
      "let X() = ( delay@1.0; () )\n"
      "run 500 of X()\n"
      "run 250 of X()");
  REQUIRE(r.ok());
  Interpreter interp(r.program, 1);
  CHECK(interp.count(0) == 750);
}

TEST_CASE("decay runs to extinction") {
  Program p = compile_file(models_dir() + "/decay.pim");
  Interpreter interp(p, 5);
  int steps = 0;
  while (interp.step().has_value()) ++steps;
  CHECK(steps == 1000);
  CHECK(interp.count(0) == 0);
}

TEST_CASE("ill-formed programs are rejected up front") {
  Program p;
  ProcessDef def;
  def.name = "A";
  def.starts_group = true;
  Branch b;
  b.kind = BranchKind::Delay;
  b.weight = 1.0;
  b.target = 5;  // no such definition
  def.branches.push_back(b);
  p.defs.push_back(def);
  p.runs.push_back(RunStatement{10, 0});
  REQUIRE(!lint(p).empty());
  CHECK_THROWS_AS(Interpreter(p, 1), std::invalid_argument);
}
