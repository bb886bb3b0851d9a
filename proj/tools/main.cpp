#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pim/compile_map.hpp"
#include "pim/ensemble.hpp"
#include "pim/parser.hpp"
#include "pim/pi/codegen.hpp"
#include "pim/pi/interpreter.hpp"
#include "pim/pi/render.hpp"
#include "pim/rules.hpp"
#include "pim/validator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitEnvironment = 2;

struct Config {
  std::string input;
  std::string output;
  std::string engine = "generated";
  double sample_time = pim::kDefaultSampleTime;
  int points = 20;
  std::uint64_t seed = 1;
  int replicates = 1;
  double threshold = 3.0;
  bool raw = false;
  bool serial = false;
  std::size_t state_cap = pim::kDefaultStateCap;
  std::vector<std::string> populations;
};

std::size_t env_state_cap() {
  const char* value = std::getenv("PIM_STATE_CAP");
  if (!value) return pim::kDefaultStateCap;
  char* end = nullptr;
  unsigned long long parsed = std::strtoull(value, &end, 10);
  if (!end || *end != '\0' || parsed == 0) {
    std::cerr << "warning: ignoring invalid PIM_STATE_CAP value '" << value
              << "'\n";
    return pim::kDefaultStateCap;
  }
  return static_cast<std::size_t>(parsed);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = std::move(buffer).str();
  return true;
}

/// Loads, parses, and (for full pipelines) applies CLI overrides. Returns
/// kExitOk or the exit code to bail with.
int load_model(const Config& config, bool raw, pim::Model& model) {
  std::string source;
  if (!read_file(config.input, source)) {
    std::cerr << "error: cannot read '" << config.input << "'\n";
    return kExitEnvironment;
  }
  pim::ParseResult parsed =
      pim::parse(source, pim::DesugarOptions{!raw});
  if (!parsed.ok()) {
    for (const pim::Diagnostic& d : parsed.diagnostics) {
      std::cerr << pim::format_diagnostic(d) << "\n";
    }
    return kExitEnvironment;
  }
  model = std::move(parsed.model);
  return kExitOk;
}

int apply_populations(const Config& config, pim::Model& model) {
  for (const std::string& entry : config.populations) {
    std::size_t eq = entry.find('=');
    std::string name = eq == std::string::npos ? "" : entry.substr(0, eq);
    std::string count_text =
        eq == std::string::npos ? entry : entry.substr(eq + 1);
    char* end = nullptr;
    long count = std::strtol(count_text.c_str(), &end, 10);
    if (!end || *end != '\0' || count < 0) {
      std::cerr << "error: bad population '" << entry
                << "' (use COUNT or SPECIES=COUNT)\n";
      return kExitEnvironment;
    }
    if (name.empty()) {
      model.set_default_initial_count(count);
    } else if (model.has_species(name)) {
      model.set_initial_count(name, count);
    } else {
      std::cerr << "error: unknown species '" << name << "'\n";
      return kExitEnvironment;
    }
  }
  model.set_sample_time(config.sample_time);
  return kExitOk;
}

int report_violations(const pim::Model& model) {
  std::vector<pim::Violation> violations = pim::validate(model);
  if (violations.empty()) return kExitOk;
  for (const pim::Violation& v : violations) {
    std::cout << pim::format_violation(v) << "\n";
  }
  return kExitSemantic;
}

bool write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << content;
  return true;
}

std::string companion_path(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + ".stderr";
  }
  return path.substr(0, dot) + ".stderr" + path.substr(dot);
}

int cmd_validate(const Config& config) {
  pim::Model model;
  if (int rc = load_model(config, config.raw, model); rc != kExitOk) {
    return rc;
  }
  if (int rc = report_violations(model); rc != kExitOk) return rc;
  std::cout << "model OK\n";
  return kExitOk;
}

/// Shared front half of compile/simulate/diff: parse, validate, configure,
/// and build the compile map.
int prepare(const Config& config, pim::Model& model, pim::CompileMap& map) {
  if (int rc = load_model(config, false, model); rc != kExitOk) return rc;
  if (int rc = report_violations(model); rc != kExitOk) return rc;
  if (int rc = apply_populations(config, model); rc != kExitOk) return rc;
  try {
    map = pim::build_compile_map(model, config.state_cap);
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  return kExitOk;
}

int cmd_compile(const Config& config) {
  pim::Model model;
  pim::CompileMap map;
  if (int rc = prepare(config, model, map); rc != kExitOk) return rc;
  pim::pi::Program program = pim::pi::generate(model, map);
  std::vector<std::string> lint_errors = pim::pi::lint(program);
  if (!lint_errors.empty()) {
    std::cerr << "internal error: generated program failed checks: "
              << lint_errors.front() << "\n";
    return kExitSemantic;
  }
  for (const std::string& sp : model.species()) {
    std::cerr << sp << ": " << (std::size_t{1} << model.sites(sp).size())
              << " states\n";
  }
  return write_output(config.output, pim::pi::render(program))
             ? kExitOk
             : kExitEnvironment;
}

int cmd_simulate(const Config& config) {
  pim::Model model;
  pim::CompileMap map;
  if (int rc = prepare(config, model, map); rc != kExitOk) return rc;

  pim::ReplicateRunner runner;
  pim::pi::Program program;
  if (config.engine == "generated") {
    program = pim::pi::generate(model, map);
    runner = [&program, &config](std::uint64_t seed) {
      return pim::pi::Interpreter(program, seed)
          .simulate(config.sample_time, config.points);
    };
  } else {
    runner = [&model, &config](std::uint64_t seed) {
      return pim::rules::Simulator(model, seed, config.state_cap)
          .run(config.sample_time, config.points);
    };
  }

  pim::EnsembleOptions options;
  options.replicates = config.replicates;
  options.seed = config.seed;
  options.parallel = !config.serial;
  pim::EnsembleResult result;
  try {
    result = pim::run_ensemble(runner, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }

  if (!write_output(config.output, pim::to_csv(result.mean))) {
    return kExitEnvironment;
  }
  if (config.replicates > 1 && !config.output.empty()) {
    if (!write_output(companion_path(config.output),
                      pim::to_csv(result.sem))) {
      return kExitEnvironment;
    }
  }
  return kExitOk;
}

int cmd_diff(const Config& config) {
  pim::Model model;
  pim::CompileMap map;
  if (int rc = prepare(config, model, map); rc != kExitOk) return rc;
  pim::pi::Program program = pim::pi::generate(model, map);

  pim::DiffOptions options;
  options.replicates = config.replicates;
  options.points = config.points;
  options.until = config.sample_time;
  options.seed = config.seed;
  options.threshold = config.threshold;
  options.parallel = !config.serial;
  pim::DiffReport report;
  try {
    report = pim::diff_engines(model, program, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  std::cout << report.text;
  return report.pass ? kExitOk : kExitSemantic;
}

}  // namespace

int main(int argc, char** argv) {
  Config config;
  config.state_cap = env_state_cap();

  CLI::App app{
      "Compiler and simulator for narrative biochemical models: validates "
      "them, translates them to stochastic pi-calculus, and runs them."};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("input", config.input, "model file")->required();
  };
  auto add_cap = [&](CLI::App* cmd) {
    cmd->add_option("--state-cap", config.state_cap,
                    "total state-count budget (env PIM_STATE_CAP)");
  };
  auto add_run_config = [&](CLI::App* cmd) {
    cmd->add_option("--time", config.sample_time, "sample horizon")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--population", config.populations,
                    "initial count, COUNT or SPECIES=COUNT (repeatable)");
    add_cap(cmd);
  };

  CLI::App* validate =
      app.add_subcommand("validate", "check a model's conditions");
  add_input(validate);
  validate->add_flag("--raw", config.raw,
                     "take conditions literally, without the implicit "
                     "bound/unbound entries");

  CLI::App* compile =
      app.add_subcommand("compile", "translate a model to a SPiM program");
  add_input(compile);
  compile->add_option("-o,--output", config.output, "output .spim path");
  add_run_config(compile);

  CLI::App* simulate =
      app.add_subcommand("simulate", "run a model and write a CSV trace");
  add_input(simulate);
  simulate->add_option("--engine", config.engine, "simulation engine")
      ->check(CLI::IsMember({"generated", "direct"}))
      ->capture_default_str();
  simulate->add_option("-o,--output", config.output, "output .csv path");
  simulate->add_option("--points", config.points, "sample points after t=0")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", config.seed, "random seed")
      ->capture_default_str();
  simulate
      ->add_option("--replicates", config.replicates,
                   "average this many runs; also writes a standard-error "
                   "companion CSV when writing to a file")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--serial", config.serial,
                     "run replicates on one thread");
  add_run_config(simulate);

  CLI::App* diff = app.add_subcommand(
      "diff", "compare the generated-program and direct engines");
  add_input(diff);
  diff->add_option("--points", config.points, "sample points after t=0")
      ->check(CLI::PositiveNumber);
  diff->add_option("--seed", config.seed, "random seed")
      ->capture_default_str();
  diff->add_option("--replicates", config.replicates, "runs per engine")
      ->check(CLI::PositiveNumber);
  diff->add_option("--threshold", config.threshold,
                   "max |z| accepted per column")
      ->capture_default_str();
  diff->add_flag("--serial", config.serial, "run replicates on one thread");
  add_run_config(diff);
  diff->parse_complete_callback([&] {
    if (!diff->count("--replicates")) config.replicates = 200;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitEnvironment;
  }

  if (validate->parsed()) return cmd_validate(config);
  if (compile->parsed()) return cmd_compile(config);
  if (simulate->parsed()) return cmd_simulate(config);
  return cmd_diff(config);
}
