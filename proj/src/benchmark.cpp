#include "icll/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "icll/icll.hpp"
#include "icll/rng.hpp"

namespace icll {

const std::vector<std::string>& all_method_names() {
  static const std::vector<std::string> names = {
      "NoResample-RF", "NoResample-LR", "BalancedRF",
      "RO", "RU", "SMOTE", "ADASYN", "NearMiss", "OSS",
      "ICLL", "ICLL+SMOTE", "ICLL+SMOTE(L1)", "ICLL+SMOTE(L2)",
      "ICLL(L1)", "ICLL(L2)"};
  return names;
}

namespace {

bool is_resampler_method(const std::string& m) {
  return m == "RO" || m == "RU" || m == "SMOTE" || m == "ADASYN" || m == "NearMiss" ||
         m == "OSS";
}

std::string lower_name(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

double run_cell(const Dataset& train, const Dataset& test, const std::string& method,
                std::uint64_t cell_seed) {
  Eigen::VectorXd scores;
  if (method == "NoResample-RF" || method == "BalancedRF") {
    ForestConfig fc;
    fc.seed = derive_seed_str(cell_seed, "model");
    RandomForestClassifier forest(fc, method == "BalancedRF");
    forest.fit(train.features, train.labels);
    scores = forest.score(test.features);
  } else if (method == "NoResample-LR") {
    LogisticRegressionClassifier lr;
    lr.fit(train.features, train.labels);
    scores = lr.score(test.features);
  } else if (is_resampler_method(method)) {
    ResamplePlan plan;
    plan.method = resample_method_from_string(lower_name(method));
    plan.seed = derive_seed_str(cell_seed, "resample");
    const Dataset resampled = resample(train, plan);
    ForestConfig fc;
    fc.seed = derive_seed_str(cell_seed, "model");
    RandomForestClassifier forest(fc);
    forest.fit(resampled.features, resampled.labels);
    scores = forest.score(test.features);
  } else {
    IcllConfig config;
    config.variant = icll_variant_from_string(method);
    config.seed = cell_seed;
    const IcllModel model = fit_icll(train, config);
    scores = model.score(test.features);
  }
  return auc(scores, test.labels);
}

namespace {

struct Prepared {
  Dataset data;
  FoldPlan plan;
};

struct CellJob {
  std::size_t dataset = 0;  // index into prepared
  std::size_t method = 0;
  int repeat = 0;
  int fold = 0;
};

struct CellOutcome {
  bool ok = false;
  double auc = 0.0;
  std::string error;
};

CellOutcome execute(const Prepared& p, const std::string& method, int repeat, int fold,
                    const BenchmarkConfig& config) {
  CellOutcome out;
  try {
    const Eigen::VectorXi& fold_of = p.plan.assignments[static_cast<std::size_t>(repeat)];
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    for (Eigen::Index i = 0; i < fold_of.size(); ++i) {
      (fold_of[i] == fold ? test_rows : train_rows).push_back(i);
    }
    const Dataset train = subset(p.data, train_rows);
    const Dataset test = subset(p.data, test_rows);
    const std::uint64_t cell_seed = derive_seed_str(
        config.seed, "cell|" + p.data.name + "|" + method + "|" + std::to_string(repeat) + "|" +
                         std::to_string(fold));
    out.auc = run_cell(train, test, method, cell_seed);
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = std::string(e.what()) + " [" + method + ", repeat " + std::to_string(repeat) +
                ", fold " + std::to_string(fold) + "]";
  }
  return out;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config, std::ostream& log) {
  if (config.dataset_paths.empty()) throw std::invalid_argument("no datasets given");
  const std::vector<std::string> methods =
      config.methods.empty() ? all_method_names() : config.methods;
  for (const auto& m : methods) {
    const auto& known = all_method_names();
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw std::invalid_argument("unknown method: " + m);
    }
  }

  BenchmarkResult result;
  std::vector<Prepared> prepared;
  std::vector<std::string> seen_names;
  for (const auto& path : config.dataset_paths) {
    const std::string stem = std::filesystem::path(path).stem().string();
    std::string stage = "load";
    try {
      Prepared p;
      p.data = load_dataset(path, config.csv_label_column);
      if (config.scale) p.data = min_max_scaled(p.data);
      if (std::find(seen_names.begin(), seen_names.end(), p.data.name) != seen_names.end()) {
        throw std::runtime_error("duplicate dataset name '" + p.data.name + "'");
      }
      stage = "folds";
      p.plan = stratified_kfold(p.data, config.repeats, config.folds,
                                derive_seed_str(config.seed, "folds|" + p.data.name));
      seen_names.push_back(p.data.name);
      const ImbalanceSummary s = summarize(p.data);
      log << "prepared " << p.data.name << ": n=" << p.data.n_rows()
          << " p=" << p.data.n_features() << " ratio=" << fixed4(s.imbalance_ratio) << "\n";
      prepared.push_back(std::move(p));
    } catch (const std::exception& e) {
      result.failures.push_back({stem, stage, e.what()});
      log << "skipped " << stem << ": " << e.what() << "\n";
    }
  }

  std::vector<CellJob> jobs;
  for (std::size_t d = 0; d < prepared.size(); ++d) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      for (int r = 0; r < config.repeats; ++r) {
        for (int f = 0; f < config.folds; ++f) {
          jobs.push_back({d, m, r, f});
        }
      }
    }
  }

  std::vector<CellOutcome> outcomes(jobs.size());
  const auto started = std::chrono::steady_clock::now();
  unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, jobs.empty() ? 1u : static_cast<unsigned>(jobs.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t at = next.fetch_add(1);
      if (at >= jobs.size()) break;
      const CellJob& job = jobs[at];
      outcomes[at] = execute(prepared[job.dataset], methods[job.method], job.repeat, job.fold,
                             config);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // A dataset enters the table only if every one of its cells succeeded;
  // otherwise the whole dataset moves to the failures manifest so the table
  // stays a complete grid.
  std::size_t at = 0;
  const std::size_t per_dataset = methods.size() * static_cast<std::size_t>(config.repeats) *
                                  static_cast<std::size_t>(config.folds);
  for (std::size_t d = 0; d < prepared.size(); ++d, at += per_dataset) {
    std::string error;
    for (std::size_t i = at; i < at + per_dataset; ++i) {
      if (!outcomes[i].ok) {
        error = outcomes[i].error;
        break;
      }
    }
    if (!error.empty()) {
      result.failures.push_back({prepared[d].data.name, "cell", error});
      log << "dropped " << prepared[d].data.name << ": " << error << "\n";
      continue;
    }
    for (std::size_t i = at; i < at + per_dataset; ++i) {
      const CellJob& job = jobs[i];
      result.table.add({prepared[job.dataset].data.name, methods[job.method], job.repeat,
                        job.fold, outcomes[i].auc});
    }
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  log << "ran " << jobs.size() << " cells on " << workers << " worker(s) in "
      << fixed4(static_cast<double>(elapsed) / 1000.0) << "s\n";
  return result;
}

void write_scores(const BenchmarkResult& result, const BenchmarkConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const auto dir = std::filesystem::path(config.out_dir);
  {
    std::ofstream out(dir / "scores.csv");
    if (!out) throw std::runtime_error("cannot write " + (dir / "scores.csv").string());
    result.table.write_csv(out);
  }
  {
    std::ofstream out(dir / "failures.csv");
    out << "dataset,stage,message\n";
    for (const auto& f : result.failures) {
      out << csv_escape(f.dataset) << ',' << csv_escape(f.stage) << ','
          << csv_escape(f.message) << '\n';
    }
  }
}

namespace {

void write_rank_csv(const std::filesystem::path& path, const std::vector<MethodRank>& ranks) {
  std::ofstream out(path);
  out << "method,avg_rank\n";
  for (const auto& r : ranks) {
    out << csv_escape(r.method) << ',' << format_double(r.avg_rank) << '\n';
  }
}

void write_pct_diff_csv(const std::filesystem::path& path,
                        const std::vector<PctDiffCell>& diffs) {
  std::ofstream out(path);
  out << "dataset,method,pct_diff\n";
  for (const auto& d : diffs) {
    out << csv_escape(d.dataset) << ',' << csv_escape(d.method) << ','
        << format_double(d.value) << '\n';
  }
}

void write_rope_csv(const std::filesystem::path& path, const std::vector<RopeSummary>& rope) {
  std::ofstream out(path);
  out << "method,wins,draws,losses,p_win,p_draw,p_loss\n";
  for (const auto& r : rope) {
    out << csv_escape(r.method) << ',' << r.wins << ',' << r.draws << ',' << r.losses << ','
        << format_double(r.p_win) << ',' << format_double(r.p_draw) << ','
        << format_double(r.p_loss) << '\n';
  }
}

nlohmann::json rank_json(const std::vector<MethodRank>& ranks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : ranks) out.push_back({{"method", r.method}, {"avg_rank", r.avg_rank}});
  return out;
}

nlohmann::json rope_json(const std::vector<RopeSummary>& rope) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rope) {
    out.push_back({{"method", r.method},
                   {"wins", r.wins},
                   {"draws", r.draws},
                   {"losses", r.losses},
                   {"p_win", r.p_win},
                   {"p_draw", r.p_draw},
                   {"p_loss", r.p_loss}});
  }
  return out;
}

}  // namespace

void write_aggregates(const ScoreTable& table, const BenchmarkConfig& config) {
  table.check_complete();
  std::filesystem::create_directories(config.out_dir);
  const auto dir = std::filesystem::path(config.out_dir);

  const auto ranks = average_rank(table);
  const auto diffs = pct_diff(table, config.reference);
  const auto rope = rope_outcomes(diffs, config.rope_percent);
  const auto difficult = filter_difficult(table, config.baseline, config.difficulty_cutoff);

  write_rank_csv(dir / "average_rank.csv", ranks);
  write_pct_diff_csv(dir / "pct_diff.csv", diffs);
  write_rope_csv(dir / "rope.csv", rope);
  {
    std::ofstream out(dir / "difficult_datasets.csv");
    out << "dataset\n";
    for (const auto& ds : difficult) out << csv_escape(ds) << '\n';
  }

  std::vector<MethodRank> ranks_difficult;
  std::vector<PctDiffCell> diffs_difficult;
  std::vector<RopeSummary> rope_difficult;
  if (!difficult.empty()) {
    const ScoreTable sub = table.filtered(difficult);
    ranks_difficult = average_rank(sub);
    diffs_difficult = pct_diff(sub, config.reference);
    rope_difficult = rope_outcomes(diffs_difficult, config.rope_percent);
  }
  write_rank_csv(dir / "average_rank_difficult.csv", ranks_difficult);
  write_pct_diff_csv(dir / "pct_diff_difficult.csv", diffs_difficult);
  write_rope_csv(dir / "rope_difficult.csv", rope_difficult);

  nlohmann::json summary = {
      {"datasets", table.datasets()},
      {"methods", table.methods()},
      {"reference", config.reference},
      {"baseline", config.baseline},
      {"rope_percent", config.rope_percent},
      {"difficulty_cutoff", config.difficulty_cutoff},
      {"avg_rank", rank_json(ranks)},
      {"rope_vs_reference", rope_json(rope)},
      {"difficult_datasets", difficult},
      {"avg_rank_difficult", rank_json(ranks_difficult)},
      {"rope_vs_reference_difficult", rope_json(rope_difficult)},
  };
  {
    std::ofstream out(dir / "summary.json");
    out << summary.dump(2) << '\n';
  }

  std::ofstream txt(dir / "summary.txt");
  txt << "benchmark summary\n";
  txt << "datasets: " << table.datasets().size() << ", methods: " << table.methods().size()
      << "\n";
  txt << "reference: " << config.reference << ", baseline: " << config.baseline << "\n\n";
  txt << "average rank (all datasets):\n";
  for (const auto& r : ranks) {
    txt << "  " << fixed4(r.avg_rank) << "  " << r.method << "\n";
  }
  txt << "\nwin/draw/loss for " << config.reference << " vs each method (ROPE +/-"
      << fixed4(config.rope_percent) << "%):\n";
  for (const auto& r : rope) {
    txt << "  " << r.wins << "/" << r.draws << "/" << r.losses << "  vs " << r.method << "\n";
  }
  txt << "\ndifficult datasets (baseline mean AUC < " << fixed4(config.difficulty_cutoff)
      << "): " << difficult.size() << "\n";
  for (const auto& ds : difficult) txt << "  " << ds << "\n";
  if (!difficult.empty()) {
    txt << "\naverage rank (difficult subset):\n";
    for (const auto& r : ranks_difficult) {
      txt << "  " << fixed4(r.avg_rank) << "  " << r.method << "\n";
    }
  }
}

}  // namespace icll
