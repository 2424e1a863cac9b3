#include "icll/evaluation.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "icll/rng.hpp"

namespace icll {

FoldPlan stratified_kfold(const Dataset& d, int repeats, int folds, std::uint64_t seed) {
  if (repeats < 1 || folds < 2) {
    throw std::invalid_argument("need at least 1 repeat and 2 folds");
  }
  const ImbalanceSummary summary = summarize(d);
  if (summary.n_minority < folds) {
    throw std::runtime_error("dataset '" + d.name + "' has " +
                             std::to_string(summary.n_minority) +
                             " minority rows, fewer than " + std::to_string(folds) +
                             " folds");
  }

  std::vector<Eigen::Index> by_class[2];
  for (Eigen::Index i = 0; i < d.labels.size(); ++i) {
    by_class[d.labels[i]].push_back(i);
  }

  FoldPlan plan;
  plan.repeats = repeats;
  plan.folds = folds;
  plan.seed = seed;
  plan.assignments.reserve(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    Rng rng(derive_seed(seed, 0x666f6c64ULL, (std::uint64_t)r));
    Eigen::VectorXi fold_of(d.labels.size());
    for (auto& members : by_class) {
      std::vector<Eigen::Index> order = members;
      rng.shuffle(order);
      for (std::size_t i = 0; i < order.size(); ++i) {
        fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
      }
    }
    plan.assignments.push_back(std::move(fold_of));
  }
  return plan;
}

double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores and labels differ in length");
  }
  const Eigen::Index n = scores.size();
  Eigen::Index positives = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
    positives += labels[i];
  }
  const Eigen::Index negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw std::runtime_error("AUC is undefined for single-class labels");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return scores[a] < scores[b]; });

  // Tie-averaged ranks: every member of a tie block gets the block's mean
  // rank, which realizes the half-credit convention for tied pairs.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += mean_rank;
    }
    i = j + 1;
  }
  const double n1 = static_cast<double>(positives);
  const double n0 = static_cast<double>(negatives);
  return (positive_rank_sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n0);
}

void ScoreTable::add(ScoreCell cell) { cells_.push_back(std::move(cell)); }

namespace {

std::vector<std::string> first_appearance(const std::vector<ScoreCell>& cells,
                                          std::string ScoreCell::*field) {
  std::vector<std::string> out;
  for (const auto& c : cells) {
    if (std::find(out.begin(), out.end(), c.*field) == out.end()) out.push_back(c.*field);
  }
  return out;
}

}  // namespace

std::vector<std::string> ScoreTable::datasets() const {
  return first_appearance(cells_, &ScoreCell::dataset);
}

std::vector<std::string> ScoreTable::methods() const {
  return first_appearance(cells_, &ScoreCell::method);
}

double ScoreTable::mean_auc(const std::string& dataset, const std::string& method) const {
  double total = 0.0;
  Eigen::Index count = 0;
  for (const auto& c : cells_) {
    if (c.dataset == dataset && c.method == method) {
      total += c.auc;
      ++count;
    }
  }
  if (count == 0) {
    throw std::runtime_error("no cells for dataset '" + dataset + "', method '" + method + "'");
  }
  return total / static_cast<double>(count);
}

ScoreTable ScoreTable::filtered(const std::vector<std::string>& keep) const {
  ScoreTable out;
  for (const auto& c : cells_) {
    if (std::find(keep.begin(), keep.end(), c.dataset) != keep.end()) out.add(c);
  }
  return out;
}

void ScoreTable::check_complete() const {
  if (cells_.empty()) throw std::runtime_error("score table is empty");
  int repeats = 0;
  int folds = 0;
  for (const auto& c : cells_) {
    repeats = std::max(repeats, c.repeat + 1);
    folds = std::max(folds, c.fold + 1);
  }
  std::map<std::string, std::set<std::pair<int, int>>> seen;
  for (const auto& c : cells_) {
    const std::string key = c.dataset + "\x1f" + c.method;
    if (!seen[key].insert({c.repeat, c.fold}).second) {
      throw std::runtime_error("duplicate cell: " + c.dataset + "/" + c.method + " repeat " +
                               std::to_string(c.repeat) + " fold " + std::to_string(c.fold));
    }
  }
  std::string missing;
  Eigen::Index n_missing = 0;
  for (const auto& ds : datasets()) {
    for (const auto& m : methods()) {
      const auto& have = seen[ds + "\x1f" + m];
      for (int r = 0; r < repeats; ++r) {
        for (int f = 0; f < folds; ++f) {
          if (!have.count({r, f})) {
            ++n_missing;
            if (n_missing <= 20) {
              missing += "\n  " + ds + "," + m + ",repeat " + std::to_string(r) + ",fold " +
                         std::to_string(f);
            }
          }
        }
      }
    }
  }
  if (n_missing > 0) {
    if (n_missing > 20) missing += "\n  ... and " + std::to_string(n_missing - 20) + " more";
    throw std::runtime_error("score table is missing " + std::to_string(n_missing) +
                             " cells:" + missing);
  }
}

void ScoreTable::write_csv(std::ostream& out) const {
  out << "dataset,method,repeat,fold,auc\n";
  for (const auto& c : cells_) {
    out << csv_escape(c.dataset) << ',' << csv_escape(c.method) << ',' << c.repeat << ','
        << c.fold << ',' << format_double(c.auc) << '\n';
  }
}

ScoreTable ScoreTable::read_csv(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto records = parse_csv_records(buffer.str());
  if (records.empty() || records[0] != std::vector<std::string>{"dataset", "method", "repeat",
                                                                "fold", "auc"}) {
    throw std::runtime_error("score CSV must start with header dataset,method,repeat,fold,auc");
  }
  ScoreTable table;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.size() != 5) {
      throw std::runtime_error("score CSV row " + std::to_string(i + 1) + " has " +
                               std::to_string(rec.size()) + " cells, expected 5");
    }
    ScoreCell cell;
    cell.dataset = rec[0];
    cell.method = rec[1];
    try {
      cell.repeat = std::stoi(rec[2]);
      cell.fold = std::stoi(rec[3]);
    } catch (const std::exception&) {
      throw std::runtime_error("score CSV row " + std::to_string(i + 1) +
                               ": unparseable repeat/fold");
    }
    char* end = nullptr;
    cell.auc = std::strtod(rec[4].c_str(), &end);
    if (end == rec[4].c_str() || *end != '\0') {
      throw std::runtime_error("score CSV row " + std::to_string(i + 1) + ": unparseable auc '" +
                               rec[4] + "'");
    }
    table.add(std::move(cell));
  }
  return table;
}

std::vector<MethodRank> average_rank(const ScoreTable& table) {
  const auto datasets = table.datasets();
  const auto methods = table.methods();
  if (datasets.empty()) throw std::runtime_error("score table is empty");

  std::vector<double> rank_sum(methods.size(), 0.0);
  for (const auto& ds : datasets) {
    std::vector<double> mean(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
      mean[m] = table.mean_auc(ds, methods[m]);
    }
    // Rank 1 is the best AUC; tied methods share the mean of the ranks they
    // would occupy.
    for (std::size_t m = 0; m < methods.size(); ++m) {
      Eigen::Index better = 0;
      Eigen::Index equal = 0;
      for (std::size_t o = 0; o < methods.size(); ++o) {
        if (mean[o] > mean[m]) ++better;
        if (mean[o] == mean[m]) ++equal;
      }
      rank_sum[m] += static_cast<double>(better) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
  }

  std::vector<MethodRank> out(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    out[m] = {methods[m], rank_sum[m] / static_cast<double>(datasets.size())};
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MethodRank& a, const MethodRank& b) { return a.avg_rank < b.avg_rank; });
  return out;
}

std::vector<PctDiffCell> pct_diff(const ScoreTable& table, const std::string& reference) {
  const auto datasets = table.datasets();
  const auto methods = table.methods();
  if (std::find(methods.begin(), methods.end(), reference) == methods.end()) {
    throw std::runtime_error("reference method '" + reference + "' not in score table");
  }
  std::vector<PctDiffCell> out;
  for (const auto& ds : datasets) {
    const double ref = table.mean_auc(ds, reference);
    if (ref == 0.0) throw std::runtime_error("reference AUC is zero on dataset '" + ds + "'");
    for (const auto& m : methods) {
      if (m == reference) continue;
      out.push_back({ds, m, 100.0 * (table.mean_auc(ds, m) - ref) / ref});
    }
  }
  return out;
}

std::vector<RopeSummary> rope_outcomes(const std::vector<PctDiffCell>& diffs,
                                       double rope_percent) {
  if (rope_percent < 0.0) throw std::invalid_argument("rope must be non-negative");
  std::vector<RopeSummary> out;
  auto row = [&](const std::string& method) -> RopeSummary& {
    for (auto& r : out) {
      if (r.method == method) return r;
    }
    out.push_back({method, 0, 0, 0, 0.0, 0.0, 0.0});
    return out.back();
  };
  for (const auto& d : diffs) {
    RopeSummary& r = row(d.method);
    if (d.value < -rope_percent) {
      ++r.wins;
    } else if (d.value > rope_percent) {
      ++r.losses;
    } else {
      ++r.draws;
    }
  }
  for (auto& r : out) {
    const double total = static_cast<double>(r.wins + r.draws + r.losses);
    r.p_win = r.wins / total;
    r.p_draw = r.draws / total;
    r.p_loss = r.losses / total;
  }
  return out;
}

std::vector<std::string> filter_difficult(const ScoreTable& table,
                                          const std::string& baseline_method,
                                          double cutoff) {
  const auto methods = table.methods();
  if (std::find(methods.begin(), methods.end(), baseline_method) == methods.end()) {
    throw std::runtime_error("baseline method '" + baseline_method + "' not in score table");
  }
  std::vector<std::string> out;
  for (const auto& ds : table.datasets()) {
    if (table.mean_auc(ds, baseline_method) < cutoff) out.push_back(ds);
  }
  return out;
}

}  // namespace icll
