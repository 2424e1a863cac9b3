#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace icll {

/// In-memory binary classification dataset. Labels follow the convention
/// that 0 is the majority class and 1 the minority class; ingestion
/// normalizes arbitrary class names to that convention by counting.
struct Dataset {
  Eigen::MatrixXd features;               // n x p
  Eigen::VectorXi labels;                 // n, each 0 or 1
  std::vector<std::string> feature_names; // p
  std::string name;
  std::string label_name = "class";
  std::array<std::string, 2> class_names = {"0", "1"};  // [majority, minority]

  Eigen::Index n_rows() const { return features.rows(); }
  Eigen::Index n_features() const { return features.cols(); }
};

struct ImbalanceSummary {
  Eigen::Index n_majority = 0;
  Eigen::Index n_minority = 0;
  double imbalance_ratio = 0.0;  // n_majority / n_minority
};

/// Parse a KEEL .dat file: @relation, @attribute lines (real/integer/nominal),
/// optional @inputs/@outputs, @data rows. Nominal inputs are one-hot encoded.
/// The minority class string maps to label 1 (tie broken toward the
/// lexicographically smaller class name). Missing values ('?' or empty cells)
/// are rejected with the offending row index.
Dataset parse_keel(const std::string& text);

/// Parse an RFC-4180-style CSV with a header row. All feature columns must be
/// numeric; the label column must hold exactly two distinct values, mapped to
/// 0/1 by the same counting rule as parse_keel.
Dataset parse_csv(const std::string& text, const std::string& label_column);

/// CSV emission for debugging; parse_csv(serialize_csv(d), d.label_name)
/// reproduces d exactly (features round-trip through shortest decimal form).
std::string serialize_csv(const Dataset& d);

ImbalanceSummary summarize(const Dataset& d);

/// Per-column min-max scaling to [0, 1]; constant columns map to 0.
Dataset min_max_scaled(const Dataset& d);

/// Row subset in the given order; metadata is carried over unchanged.
Dataset subset(const Dataset& d, const std::vector<Eigen::Index>& rows);

/// Load from a path, dispatching on extension (.dat -> KEEL, otherwise CSV
/// with the given label column). The dataset name defaults to the file stem.
Dataset load_dataset(const std::string& path, const std::string& csv_label_column = "class");

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// RFC-4180 records: quoted fields may contain commas, doubled quotes and
/// newlines. Returns one vector of cells per record; unquoted cells are
/// whitespace-trimmed.
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text);

std::string csv_escape(const std::string& s);

}  // namespace icll
