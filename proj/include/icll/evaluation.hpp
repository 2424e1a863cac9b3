#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "icll/dataset.hpp"

namespace icll {

/// Repeated stratified k-fold assignment: one length-n vector of fold ids per
/// repeat. Within a repeat, per-fold class counts differ by at most one.
struct FoldPlan {
  int repeats = 2;
  int folds = 5;
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXi> assignments;
};

/// Shuffles each class separately and deals indices round-robin. Repeats use
/// distinct derived seeds. Throws if the minority class has fewer rows than
/// folds, naming the dataset.
FoldPlan stratified_kfold(const Dataset& d, int repeats, int folds, std::uint64_t seed);

/// Mann-Whitney AUC: the fraction of (positive, negative) pairs where the
/// positive scores higher, ties counted half. Computed via tie-averaged
/// ranks. Throws when labels are single-class.
double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels);

struct ScoreCell {
  std::string dataset;
  std::string method;
  int repeat = 0;
  int fold = 0;
  double auc = 0.0;
};

/// Benchmark results, one AUC per (dataset, method, repeat, fold). Kept in
/// insertion order; datasets() and methods() report first-appearance order.
class ScoreTable {
 public:
  void add(ScoreCell cell);
  const std::vector<ScoreCell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

  std::vector<std::string> datasets() const;
  std::vector<std::string> methods() const;

  /// Mean AUC over all (repeat, fold) cells of one dataset/method pair.
  double mean_auc(const std::string& dataset, const std::string& method) const;

  /// Rows restricted to the given datasets (kept in table order).
  ScoreTable filtered(const std::vector<std::string>& keep) const;

  /// Verifies every (dataset, method, repeat, fold) combination is present
  /// exactly once, inferring repeat and fold counts from the data. Throws
  /// with the missing cells listed.
  void check_complete() const;

  void write_csv(std::ostream& out) const;
  static ScoreTable read_csv(std::istream& in);

 private:
  std::vector<ScoreCell> cells_;
};

struct MethodRank {
  std::string method;
  double avg_rank = 0.0;
};

/// Per-dataset ranks of mean AUC (1 = best, ties averaged), then averaged
/// over datasets. Result is sorted by average rank, ties keeping table
/// method order.
std::vector<MethodRank> average_rank(const ScoreTable& table);

struct PctDiffCell {
  std::string dataset;
  std::string method;
  double value = 0.0;  // 100 * (auc_method - auc_reference) / auc_reference
};

/// Percentage difference of every non-reference method against the reference,
/// per dataset, on mean AUCs.
std::vector<PctDiffCell> pct_diff(const ScoreTable& table, const std::string& reference);

struct RopeSummary {
  std::string method;
  Eigen::Index wins = 0;   // reference better: diff below -rope
  Eigen::Index draws = 0;  // practically equivalent: diff within [-rope, rope]
  Eigen::Index losses = 0; // reference worse: diff above +rope
  double p_win = 0.0;
  double p_draw = 0.0;
  double p_loss = 0.0;
};

/// Win/draw/loss frequencies from the reference method's perspective under a
/// region of practical equivalence of +/- rope_percent.
std::vector<RopeSummary> rope_outcomes(const std::vector<PctDiffCell>& diffs,
                                       double rope_percent = 1.0);

/// Datasets on which the baseline's mean AUC falls below the cutoff.
std::vector<std::string> filter_difficult(const ScoreTable& table,
                                          const std::string& baseline_method,
                                          double cutoff = 0.9);

}  // namespace icll
