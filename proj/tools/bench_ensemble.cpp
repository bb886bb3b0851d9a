// Times the serial replicate loop against the OpenMP one on the same
// model and verifies that both produce identical traces.
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "pim/compile_map.hpp"
#include "pim/ensemble.hpp"
#include "pim/parser.hpp"
#include "pim/pi/codegen.hpp"
#include "pim/pi/interpreter.hpp"
#include "pim/validator.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: bench_ensemble <model.pim> [replicates] [seed]\n";
    return 2;
  }
  std::ifstream in(argv[1], std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << argv[1] << "'\n";
    return 2;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  pim::ParseResult parsed = pim::parse(buffer.str());
  if (!parsed.ok() || !pim::validate(parsed.model).empty()) {
    std::cerr << "error: model does not parse and validate cleanly\n";
    return 1;
  }
  const pim::Model& model = parsed.model;
  pim::pi::Program program =
      pim::pi::generate(model, pim::build_compile_map(model));

  pim::EnsembleOptions options;
  options.replicates = argc > 2 ? std::atoi(argv[2]) : 64;
  options.seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  auto runner = [&](std::uint64_t seed) {
    return pim::pi::Interpreter(program, seed)
        .simulate(model.sample_time(), 20);
  };

  auto t0 = std::chrono::steady_clock::now();
  pim::EnsembleResult serial = pim::run_ensemble_serial(runner, options);
  double serial_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  pim::EnsembleResult parallel = pim::run_ensemble_parallel(runner, options);
  double parallel_s = seconds_since(t0);

  bool identical = pim::to_csv(serial.mean) == pim::to_csv(parallel.mean) &&
                   pim::to_csv(serial.sem) == pim::to_csv(parallel.sem);

  std::cout << "replicates: " << options.replicates << "\n"
            << "serial:     " << serial_s << " s\n"
            << "parallel:   " << parallel_s << " s\n"
            << "speedup:    " << (parallel_s > 0 ? serial_s / parallel_s : 0)
            << "x\n"
            << "identical:  " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
