#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pim/model.hpp"
#include "pim/pi/ast.hpp"
#include "pim/trace.hpp"

namespace pim {

/// Runs one replicate with the given seed; every replicate must return the
/// same column set and sample grid.
using ReplicateRunner = std::function<TraceTable(std::uint64_t)>;

struct EnsembleOptions {
  int replicates = 1;
  std::uint64_t seed = 0;
  bool parallel = true;  // ignored when built without OpenMP
};

/// Per-cell mean and standard error of the mean across replicates.
struct EnsembleResult {
  TraceTable mean;
  TraceTable sem;
};

/// Reference implementation: replicates run one after another on the
/// calling thread.
EnsembleResult run_ensemble_serial(const ReplicateRunner& runner,
                                   const EnsembleOptions& options);

/// OpenMP implementation. Replicate seeds depend only on the replicate
/// index and results are reduced in index order after the parallel region,
/// so its output is identical to the serial implementation's, byte for
/// byte. Falls back to the serial path when OpenMP is unavailable.
EnsembleResult run_ensemble_parallel(const ReplicateRunner& runner,
                                     const EnsembleOptions& options);

EnsembleResult run_ensemble(const ReplicateRunner& runner,
                            const EnsembleOptions& options);

struct DiffOptions {
  int replicates = 200;
  int points = 20;
  double until = kDefaultSampleTime;
  std::uint64_t seed = 0;
  double threshold = 3.0;
  bool parallel = true;
};

struct DiffColumn {
  std::string name;
  double max_abs_z = 0.0;
  double at_time = 0.0;
};

struct DiffReport {
  bool pass = false;
  std::vector<DiffColumn> columns;
  std::string text;  // printable per-column summary
};

/// Simulates the generated program and the rule system side by side and
/// compares replicate means column by column with a pooled z-score. For
/// site-less species that only transform away, the report also checks both
/// engines against the exact exponential-decay mean.
DiffReport diff_engines(const Model& model, const pi::Program& program,
                        const DiffOptions& options);

}  // namespace pim
