#include "pim/ensemble.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pim/format.hpp"
#include "pim/pi/interpreter.hpp"
#include "pim/random.hpp"
#include "pim/rules.hpp"

namespace pim {

namespace {

std::vector<TraceTable> run_serial(const ReplicateRunner& runner,
                                   const EnsembleOptions& options) {
  std::vector<TraceTable> tables(static_cast<std::size_t>(options.replicates));
  for (int i = 0; i < options.replicates; ++i) {
    tables[static_cast<std::size_t>(i)] =
        runner(replicate_seed(options.seed, i));
  }
  return tables;
}

std::vector<TraceTable> run_parallel(const ReplicateRunner& runner,
                                     const EnsembleOptions& options) {
#ifdef _OPENMP
  std::vector<TraceTable> tables(static_cast<std::size_t>(options.replicates));
  bool failed = false;
  std::string what;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < options.replicates; ++i) {
    try {
      tables[static_cast<std::size_t>(i)] =
          runner(replicate_seed(options.seed, i));
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        what = e.what();
      }
    }
  }
  if (failed) throw std::runtime_error(what);
  return tables;
#else
  return run_serial(runner, options);
#endif
}

/// Index-order reduction shared by both drivers; summing in replicate
/// order keeps serial and parallel results bit-identical.
EnsembleResult reduce(const std::vector<TraceTable>& tables) {
  EnsembleResult result;
  if (tables.empty()) return result;
  const TraceTable& first = tables.front();
  result.mean.columns = first.columns;
  result.mean.times = first.times;
  result.sem.columns = first.columns;
  result.sem.times = first.times;
  const std::size_t n = tables.size();
  const std::size_t cols = first.columns.size();
  for (std::size_t r = 0; r < first.rows.size(); ++r) {
    std::vector<double> mean(cols, 0.0);
    std::vector<double> sem(cols, 0.0);
    for (const TraceTable& t : tables) {
      for (std::size_t c = 0; c < cols; ++c) mean[c] += t.rows[r][c];
    }
    for (std::size_t c = 0; c < cols; ++c) {
      mean[c] /= static_cast<double>(n);
    }
    if (n > 1) {
      for (const TraceTable& t : tables) {
        for (std::size_t c = 0; c < cols; ++c) {
          double d = t.rows[r][c] - mean[c];
          sem[c] += d * d;
        }
      }
      for (std::size_t c = 0; c < cols; ++c) {
        sem[c] = std::sqrt(sem[c] /
                           (static_cast<double>(n) *
                            static_cast<double>(n - 1)));
      }
    }
    result.mean.rows.push_back(std::move(mean));
    result.sem.rows.push_back(std::move(sem));
  }
  return result;
}

}  // namespace

EnsembleResult run_ensemble_serial(const ReplicateRunner& runner,
                                   const EnsembleOptions& options) {
  return reduce(run_serial(runner, options));
}

EnsembleResult run_ensemble_parallel(const ReplicateRunner& runner,
                                     const EnsembleOptions& options) {
  return reduce(run_parallel(runner, options));
}

EnsembleResult run_ensemble(const ReplicateRunner& runner,
                            const EnsembleOptions& options) {
  return options.parallel ? run_ensemble_parallel(runner, options)
                          : run_ensemble_serial(runner, options);
}

namespace {

double cell_z(double m1, double se1, double m2, double se2) {
  double pooled = std::sqrt(se1 * se1 + se2 * se2);
  if (pooled == 0.0) {
    return m1 == m2 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (m1 - m2) / pooled;
}

/// Site-less species that only transform away decay as N*exp(-lambda*t);
/// anything that can bind, or that some transformation produces, does not.
struct ClosedForm {
  std::string column;
  double population;
  double lambda;
};

std::vector<ClosedForm> closed_forms(const Model& model) {
  std::vector<ClosedForm> out;
  for (const std::string& sp : model.species()) {
    if (!model.sites(sp).empty()) continue;
    double lambda = 0.0;
    bool produced = false;
    for (const Sentence& s : model.sentences()) {
      if (s.kind != SentenceKind::Transformation) continue;
      if (s.left.species == sp) lambda += s.rate;
      if (s.right && s.right->species == sp) produced = true;
    }
    if (produced || lambda == 0.0) continue;
    out.push_back(ClosedForm{sp + "0",
                             static_cast<double>(model.initial_count(sp)),
                             lambda});
  }
  return out;
}

}  // namespace

DiffReport diff_engines(const Model& model, const pi::Program& program,
                        const DiffOptions& options) {
  EnsembleOptions ensemble;
  ensemble.replicates = options.replicates;
  ensemble.parallel = options.parallel;

  ensemble.seed = options.seed;
  EnsembleResult generated = run_ensemble(
      [&](std::uint64_t seed) {
        return pi::Interpreter(program, seed)
            .simulate(options.until, options.points);
      },
      ensemble);

  ensemble.seed = splitmix64(options.seed ^ 0x632BE59BD9B4E019ull);
  EnsembleResult direct = run_ensemble(
      [&](std::uint64_t seed) {
        return rules::Simulator(model, seed).run(options.until,
                                                 options.points);
      },
      ensemble);

  if (generated.mean.columns != direct.mean.columns) {
    throw std::logic_error("engines disagree on the column set");
  }

  DiffReport report;
  std::ostringstream text;
  report.pass = true;
  const std::size_t cols = generated.mean.columns.size();
  for (std::size_t c = 0; c < cols; ++c) {
    DiffColumn column;
    column.name = generated.mean.columns[c];
    for (std::size_t r = 0; r < generated.mean.rows.size(); ++r) {
      double z = std::fabs(cell_z(
          generated.mean.rows[r][c], generated.sem.rows[r][c],
          direct.mean.rows[r][c], direct.sem.rows[r][c]));
      if (z >= column.max_abs_z) {
        column.max_abs_z = z;
        column.at_time = generated.mean.times[r];
      }
    }
    if (!(column.max_abs_z <= options.threshold)) report.pass = false;
    text << "column " << column.name << ": max |z| = "
         << format_double(column.max_abs_z) << " at t = "
         << format_double(column.at_time) << "\n";
    report.columns.push_back(std::move(column));
  }

  for (const ClosedForm& cf : closed_forms(model)) {
    std::size_t c = generated.mean.column_index(cf.column);
    if (c >= cols) continue;
    double worst_gen = 0.0;
    double worst_dir = 0.0;
    for (std::size_t r = 0; r < generated.mean.rows.size(); ++r) {
      double expected =
          cf.population *
          std::exp(-cf.lambda * generated.mean.times[r]);
      worst_gen = std::max(
          worst_gen, std::fabs(cell_z(generated.mean.rows[r][c],
                                      generated.sem.rows[r][c], expected,
                                      0.0)));
      worst_dir = std::max(
          worst_dir, std::fabs(cell_z(direct.mean.rows[r][c],
                                      direct.sem.rows[r][c], expected,
                                      0.0)));
    }
    text << "closed form " << cf.column << " ~ "
         << format_double(cf.population) << "*exp(-"
         << format_double(cf.lambda) << "*t): max |z| = "
         << format_double(worst_gen) << " (generated), "
         << format_double(worst_dir) << " (direct)\n";
    if (!(worst_gen <= options.threshold) ||
        !(worst_dir <= options.threshold)) {
      report.pass = false;
    }
  }

  text << "overall: " << (report.pass ? "agree" : "DISAGREE")
       << " (threshold " << format_double(options.threshold) << ", "
       << options.replicates << " replicates)\n";
  report.text = std::move(text).str();
  return report;
}

}  // namespace pim
