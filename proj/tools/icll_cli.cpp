#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "icll/benchmark.hpp"
#include "icll/dataset.hpp"
#include "icll/distance.hpp"
#include "icll/evaluation.hpp"
#include "icll/hcluster.hpp"
#include "icll/icll.hpp"
#include "icll/layering.hpp"

namespace {

struct FitOptions {
  std::string data;
  std::string out = "model.json";
  std::string variant = "ICLL";
  std::string learner = "forest";
  std::uint64_t seed = 0;
  bool scale = false;
  std::string label_column = "class";
  std::string audit;
  std::string dendrogram;
  int trees = 100;
};

icll::Dataset load(const std::string& path, bool scale, const std::string& label_column) {
  icll::Dataset d = icll::load_dataset(path, label_column);
  return scale ? icll::min_max_scaled(d) : d;
}

void describe_fit(const icll::IcllModel& model, std::ostream& out) {
  out << "groups: pure_majority=" << model.groups.n_pure_majority
      << " pure_minority=" << model.groups.n_pure_minority
      << " mixed=" << model.groups.n_mixed << "\n";
  switch (model.degeneracy) {
    case icll::DegeneracyKind::None:
      out << "degeneracy: none\n";
      break;
    case icll::DegeneracyKind::EmptyCmin:
      out << "degenerate: pure-minority group empty\n";
      break;
    case icll::DegeneracyKind::EmptyCmix:
      out << "degenerate: mixed group empty\n";
      break;
    case icll::DegeneracyKind::EmptyCmaj:
      out << "degenerate: pure-majority group empty"
          << (model.fallback ? " (single-model fallback)" : " (remediated by lowering the cut)")
          << "\n";
      break;
  }
}

int cmd_fit(const FitOptions& opt) {
  const icll::Dataset d = load(opt.data, opt.scale, opt.label_column);
  icll::IcllConfig config;
  config.variant = icll::icll_variant_from_string(opt.variant);
  config.base_learner.kind = icll::learner_kind_from_string(opt.learner);
  config.base_learner.forest.n_trees = opt.trees;
  config.seed = opt.seed;

  const icll::IcllModel model = icll::fit_icll(d, config);
  describe_fit(model, std::cout);

  std::ofstream out(opt.out);
  if (!out) throw std::runtime_error("cannot write " + opt.out);
  out << model.to_json().dump(2) << '\n';
  std::cout << "model written to " << opt.out << "\n";

  if (!opt.audit.empty()) {
    std::ofstream audit(opt.audit);
    if (!audit) throw std::runtime_error("cannot write " + opt.audit);
    icll::write_group_audit(d, model.groups, audit);
  }
  if (!opt.dendrogram.empty()) {
    std::ofstream dendro(opt.dendrogram);
    if (!dendro) throw std::runtime_error("cannot write " + opt.dendrogram);
    icll::write_dendrogram(icll::ward_linkage(icll::pairwise_euclidean(d.features)), dendro);
  }
  return 0;
}

struct ScoreOptions {
  std::string model;
  std::string data;
  std::string out = "-";
  bool scale = false;
  std::string label_column = "class";
};

int cmd_score(const ScoreOptions& opt) {
  std::ifstream in(opt.model);
  if (!in) throw std::runtime_error("cannot read " + opt.model);
  nlohmann::json j;
  in >> j;
  const icll::IcllModel model = icll::IcllModel::from_json(j);

  const icll::Dataset d = load(opt.data, opt.scale, opt.label_column);
  const Eigen::VectorXd scores = model.score(d.features);

  std::ofstream file;
  if (opt.out != "-") {
    file.open(opt.out);
    if (!file) throw std::runtime_error("cannot write " + opt.out);
  }
  std::ostream& out = opt.out == "-" ? std::cout : file;
  out << "index,score,label\n";
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    out << i << ',' << icll::format_double(scores[i]) << ',' << d.labels[i] << '\n';
  }
  std::cerr << "auc: " << icll::format_double(icll::auc(scores, d.labels)) << "\n";
  return 0;
}

std::vector<std::string> collect_datasets(const std::vector<std::string>& paths,
                                          const std::string& dir) {
  std::vector<std::string> out = paths;
  if (!dir.empty()) {
    std::vector<std::string> found;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension().string();
      if (ext == ".dat" || ext == ".csv") found.push_back(entry.path().string());
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

int cmd_benchmark(icll::BenchmarkConfig config, const std::string& data_dir,
                  const std::string& methods_csv) {
  config.dataset_paths = collect_datasets(config.dataset_paths, data_dir);
  if (!methods_csv.empty()) {
    config.methods.clear();
    std::stringstream ss(methods_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) config.methods.push_back(item);
    }
  }
  // The aggregation step will need both anchors, so reject a grid that lacks
  // them before any cell is paid for.
  const std::vector<std::string>& grid =
      config.methods.empty() ? icll::all_method_names() : config.methods;
  for (const std::string* anchor : {&config.reference, &config.baseline}) {
    if (std::find(grid.begin(), grid.end(), *anchor) == grid.end()) {
      throw std::invalid_argument("method '" + *anchor +
                                  "' is not in the grid; adjust --methods, --reference or "
                                  "--baseline");
    }
  }
  const icll::BenchmarkResult result = icll::run_benchmark(config, std::cout);
  icll::write_scores(result, config);
  if (result.table.empty()) {
    throw std::runtime_error("every dataset failed; see " + config.out_dir + "/failures.csv");
  }
  icll::write_aggregates(result.table, config);
  std::cout << "reports written to " << config.out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& scores_path, icll::BenchmarkConfig config) {
  std::ifstream in(scores_path);
  if (!in) throw std::runtime_error("cannot read " + scores_path);
  const icll::ScoreTable table = icll::ScoreTable::read_csv(in);
  icll::write_aggregates(table, config);
  std::cout << "reports written to " << config.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered-learning imbalanced classification toolkit"};
  app.require_subcommand(1);

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a layered model on one dataset");
  fit_cmd->add_option("--data", fit.data, "dataset file (.dat or .csv)")->required();
  fit_cmd->add_option("--out", fit.out, "output model path");
  fit_cmd->add_option("--variant", fit.variant,
                      "ICLL, ICLL+SMOTE, ICLL+SMOTE(L1), ICLL+SMOTE(L2), ICLL(L1), ICLL(L2)");
  fit_cmd->add_option("--learner", fit.learner, "tree, forest, balanced-forest, logistic");
  fit_cmd->add_option("--trees", fit.trees, "forest size");
  fit_cmd->add_option("--seed", fit.seed, "random seed");
  fit_cmd->add_flag("--scale", fit.scale, "min-max scale features");
  fit_cmd->add_option("--label", fit.label_column, "CSV label column name");
  fit_cmd->add_option("--audit", fit.audit, "write per-instance group CSV here");
  fit_cmd->add_option("--dendrogram", fit.dendrogram, "write merge list here");

  ScoreOptions score;
  CLI::App* score_cmd = app.add_subcommand("score", "Score a dataset with a saved model");
  score_cmd->add_option("--model", score.model, "model JSON path")->required();
  score_cmd->add_option("--data", score.data, "dataset file")->required();
  score_cmd->add_option("--out", score.out, "scores CSV path, '-' for stdout");
  score_cmd->add_flag("--scale", score.scale, "min-max scale features");
  score_cmd->add_option("--label", score.label_column, "CSV label column name");

  icll::BenchmarkConfig bench;
  std::string bench_dir;
  std::string bench_methods;
  CLI::App* bench_cmd = app.add_subcommand("benchmark", "Run the comparative study grid");
  bench_cmd->add_option("--data", bench.dataset_paths, "dataset files");
  bench_cmd->add_option("--data-dir", bench_dir, "directory of .dat/.csv datasets");
  bench_cmd->add_option("--methods", bench_methods, "comma-separated method names");
  bench_cmd->add_option("--repeats", bench.repeats, "CV repeats");
  bench_cmd->add_option("--folds", bench.folds, "CV folds");
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_option("--out", bench.out_dir, "output directory");
  bench_cmd->add_option("--rope", bench.rope_percent, "ROPE half-width in percent");
  bench_cmd->add_option("--cutoff", bench.difficulty_cutoff, "difficulty AUC cutoff");
  bench_cmd->add_option("--reference", bench.reference, "pct-diff/ROPE reference method");
  bench_cmd->add_option("--baseline", bench.baseline, "difficulty filter method");
  bench_cmd->add_option("--workers", bench.workers, "worker threads (0 = hardware)");
  bench_cmd->add_flag("--scale", bench.scale, "min-max scale features");
  bench_cmd->add_option("--label", bench.csv_label_column, "CSV label column name");

  std::string report_scores;
  icll::BenchmarkConfig report;
  CLI::App* report_cmd = app.add_subcommand("report", "Re-aggregate a saved score table");
  report_cmd->add_option("--scores", report_scores, "scores.csv path")->required();
  report_cmd->add_option("--out", report.out_dir, "output directory");
  report_cmd->add_option("--rope", report.rope_percent, "ROPE half-width in percent");
  report_cmd->add_option("--cutoff", report.difficulty_cutoff, "difficulty AUC cutoff");
  report_cmd->add_option("--reference", report.reference, "pct-diff/ROPE reference method");
  report_cmd->add_option("--baseline", report.baseline, "difficulty filter method");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit);
    if (*score_cmd) return cmd_score(score);
    if (*bench_cmd) return cmd_benchmark(bench, bench_dir, bench_methods);
    if (*report_cmd) return cmd_report(report_scores, report);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
