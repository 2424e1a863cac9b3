#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "icll/dataset.hpp"
#include "icll/evaluation.hpp"

namespace icll {

struct BenchmarkConfig {
  std::vector<std::string> dataset_paths;
  std::vector<std::string> methods;  // defaults to all_method_names()
  int repeats = 2;
  int folds = 5;
  std::uint64_t seed = 0;
  std::string out_dir = "bench-out";
  double rope_percent = 1.0;
  double difficulty_cutoff = 0.9;
  std::string reference = "ICLL";            // pct-diff / ROPE anchor
  std::string baseline = "NoResample-RF";    // difficulty filter anchor
  int workers = 0;                           // 0: hardware concurrency
  bool scale = false;                        // min-max scale features at load
  std::string csv_label_column = "class";
};

/// The comparative-study grid: two no-resampling baselines, the balanced
/// forest, six resampling baselines (each feeding a standard forest), and the
/// six layered-model variants.
const std::vector<std::string>& all_method_names();

struct FailureRecord {
  std::string dataset;
  std::string stage;  // "load", "folds", or "cell"
  std::string message;
};

struct BenchmarkResult {
  ScoreTable table;
  std::vector<FailureRecord> failures;
};

/// Score one method on one train/test split. cell_seed drives every random
/// choice inside the cell (resampling, bootstraps, feature subsets).
double run_cell(const Dataset& train, const Dataset& test, const std::string& method,
                std::uint64_t cell_seed);

/// Run the full grid. Cell seeds derive from (seed, dataset, method, repeat,
/// fold), and rows are assembled in grid order, so the resulting table is
/// identical for any worker count. A dataset is dropped whole (and recorded
/// in failures) if loading, fold planning, or any of its cells fail.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, std::ostream& log);

/// Write scores.csv plus the failures manifest into config.out_dir.
void write_scores(const BenchmarkResult& result, const BenchmarkConfig& config);

/// Aggregate a complete table into rank / percentage-difference / ROPE /
/// difficult-subset reports (CSV + JSON + plain-text summary) in
/// config.out_dir. Shared by the benchmark and report commands.
void write_aggregates(const ScoreTable& table, const BenchmarkConfig& config);

}  // namespace icll
