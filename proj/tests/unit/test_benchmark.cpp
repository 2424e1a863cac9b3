#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "icll/benchmark.hpp"
#include "icll/rng.hpp"

namespace {

icll::Dataset blob_dataset(std::uint64_t seed, int n_maj, int n_min, double span,
                           const std::string& name) {
  icll::Rng rng(seed);
  icll::Dataset d;
  const int n = n_maj + n_min;
  d.features.resize(n, 2);
  d.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const bool minority = i >= n_maj;
    d.features(i, 0) = (minority ? span : 0.0) + rng.normal();
    d.features(i, 1) = rng.normal();
    d.labels[i] = minority ? 1 : 0;
  }
  d.feature_names = {"f0", "f1"};
  d.name = name;
  return d;
}

std::filesystem::path scratch_dir(const std::string& leaf) {
  const auto dir = std::filesystem::current_path() / "bench-scratch" / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_blob_csv(const std::filesystem::path& dir, const std::string& name,
                           std::uint64_t seed, int n_maj, int n_min, double span) {
  const auto path = dir / (name + ".csv");
  std::ofstream out(path);
  out << icll::serialize_csv(blob_dataset(seed, n_maj, n_min, span, name));
  return path.string();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("the method catalogue lists the full comparison grid without duplicates") {
  const auto& names = icll::all_method_names();
  CHECK(names.size() == 15);
  const std::set<std::string> uniq(names.begin(), names.end());
  CHECK(uniq.size() == names.size());
  for (const char* expected :
       {"NoResample-RF", "NoResample-LR", "BalancedRF", "RO", "RU", "SMOTE", "ADASYN",
        "NearMiss", "OSS", "ICLL", "ICLL+SMOTE", "ICLL+SMOTE(L1)", "ICLL+SMOTE(L2)", "ICLL(L1)",
        "ICLL(L2)"}) {
    CAPTURE(expected);
    CHECK(uniq.count(expected) == 1);
  }
}

TEST_CASE("run_cell scores a cleanly separated split perfectly for every method") {
  const icll::Dataset train = blob_dataset(71, 40, 20, 12.0, "train");
  const icll::Dataset test = blob_dataset(72, 20, 10, 12.0, "test");
  for (const auto& method : icll::all_method_names()) {
    CAPTURE(method);
    const double a = icll::run_cell(train, test, method, 99);
    // Separated blobs cluster into one pure group per class, which makes the
    // second layer a single-class task; its lone-layer ablation therefore
    // scores a constant and every pair ties.
    CHECK(a == (method == "ICLL(L2)" ? 0.5 : 1.0));
    CHECK(icll::run_cell(train, test, method, 99) == a);
  }
}

TEST_CASE("a small benchmark run fills the complete grid in dataset-major order") {
  const auto dir = scratch_dir("grid");
  icll::BenchmarkConfig cfg;
  cfg.dataset_paths = {write_blob_csv(dir, "alpha", 11, 24, 12, 8.0),
                       write_blob_csv(dir, "beta", 12, 30, 10, 2.0)};
  cfg.methods = {"NoResample-RF", "RO", "ICLL"};
  cfg.repeats = 2;
  cfg.folds = 2;
  cfg.seed = 5;
  cfg.workers = 1;
  std::ostringstream log;
  const auto result = icll::run_benchmark(cfg, log);

  CHECK(result.failures.empty());
  CHECK(result.table.cells().size() == 24);
  CHECK_NOTHROW(result.table.check_complete());
  CHECK(result.table.datasets() == std::vector<std::string>{"alpha", "beta"});
  CHECK(result.table.methods() == cfg.methods);
  for (const auto& cell : result.table.cells()) {
    CHECK(cell.auc >= 0.0);
    CHECK(cell.auc <= 1.0);
  }
  CHECK(result.table.cells()[0].dataset == "alpha");
  CHECK(result.table.cells()[11].dataset == "alpha");
  CHECK(result.table.cells()[12].dataset == "beta");
  CHECK(log.str().find("prepared alpha") != std::string::npos);
  CHECK(log.str().find("prepared beta") != std::string::npos);
  CHECK(log.str().find("ran 24 cells") != std::string::npos);
}

TEST_CASE("scores are byte-identical regardless of the worker count") {
  const auto dir = scratch_dir("workers");
  icll::BenchmarkConfig cfg;
  cfg.dataset_paths = {write_blob_csv(dir, "gamma", 21, 26, 10, 3.0),
                       write_blob_csv(dir, "delta", 22, 22, 11, 1.5)};
  cfg.methods = {"RU", "SMOTE", "ICLL+SMOTE"};
  cfg.repeats = 2;
  cfg.folds = 2;
  cfg.seed = 9;

  cfg.workers = 1;
  cfg.out_dir = (dir / "one").string();
  std::ostringstream log1;
  const auto serial = icll::run_benchmark(cfg, log1);
  icll::write_scores(serial, cfg);

  cfg.workers = 3;
  cfg.out_dir = (dir / "three").string();
  std::ostringstream log3;
  const auto threaded = icll::run_benchmark(cfg, log3);
  icll::write_scores(threaded, cfg);

  const std::string csv1 = read_file(dir / "one" / "scores.csv");
  const std::string csv3 = read_file(dir / "three" / "scores.csv");
  CHECK(csv1 == csv3);
  CHECK(csv1.find("gamma") != std::string::npos);
  CHECK(serial.table.cells().size() == 24);
}

TEST_CASE("datasets that cannot be loaded or fold-planned are skipped whole") {
  const auto dir = scratch_dir("prep-fail");
  const std::string ghost = (dir / "ghost.csv").string();
  const std::string lonely = write_blob_csv(dir, "lonely", 31, 9, 1, 6.0);
  const std::string good = write_blob_csv(dir, "good", 32, 20, 8, 6.0);
  icll::BenchmarkConfig cfg;
  cfg.dataset_paths = {ghost, lonely, good};
  cfg.methods = {"NoResample-RF"};
  cfg.repeats = 1;
  cfg.folds = 2;
  cfg.seed = 3;
  cfg.workers = 1;
  std::ostringstream log;
  const auto result = icll::run_benchmark(cfg, log);

  REQUIRE(result.failures.size() == 2);
  CHECK(result.failures[0].dataset == "ghost");
  CHECK(result.failures[0].stage == "load");
  CHECK(result.failures[1].dataset == "lonely");
  CHECK(result.failures[1].stage == "folds");
  CHECK(result.failures[1].message.find("lonely") != std::string::npos);
  CHECK(result.table.datasets() == std::vector<std::string>{"good"});
  CHECK(result.table.cells().size() == 2);
  CHECK_NOTHROW(result.table.check_complete());
}

TEST_CASE("one failing cell drops its whole dataset but not its peers") {
  const auto dir = scratch_dir("cell-fail");
  // With two minority rows split across two folds, each training half keeps a
  // single minority row, which is too few for interpolation-based resampling.
  const std::string fragile = write_blob_csv(dir, "fragile", 41, 10, 2, 6.0);
  const std::string sturdy = write_blob_csv(dir, "sturdy", 42, 16, 8, 6.0);
  icll::BenchmarkConfig cfg;
  cfg.dataset_paths = {fragile, sturdy};
  cfg.methods = {"NoResample-RF", "SMOTE"};
  cfg.repeats = 1;
  cfg.folds = 2;
  cfg.seed = 7;
  cfg.workers = 1;
  std::ostringstream log;
  const auto result = icll::run_benchmark(cfg, log);

  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].dataset == "fragile");
  CHECK(result.failures[0].stage == "cell");
  CHECK(result.failures[0].message.find("SMOTE") != std::string::npos);
  CHECK(result.table.datasets() == std::vector<std::string>{"sturdy"});
  CHECK(result.table.cells().size() == 4);
  CHECK_NOTHROW(result.table.check_complete());
  CHECK(log.str().find("dropped fragile") != std::string::npos);
}

TEST_CASE("a repeated dataset path is rejected as a duplicate name") {
  const auto dir = scratch_dir("dup");
  const std::string a = write_blob_csv(dir, "alpha", 51, 12, 6, 6.0);
  icll::BenchmarkConfig cfg;
  cfg.dataset_paths = {a, a};
  cfg.methods = {"NoResample-LR"};
  cfg.repeats = 1;
  cfg.folds = 2;
  cfg.workers = 1;
  std::ostringstream log;
  const auto result = icll::run_benchmark(cfg, log);
  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].stage == "load");
  CHECK(result.failures[0].message.find("duplicate") != std::string::npos);
  CHECK(result.table.datasets() == std::vector<std::string>{"alpha"});
}

TEST_CASE("bad configuration is rejected up front") {
  icll::BenchmarkConfig cfg;
  std::ostringstream log;
  CHECK_THROWS_AS(icll::run_benchmark(cfg, log), std::invalid_argument);
  cfg.dataset_paths = {"whatever.csv"};
  cfg.methods = {"Bagging"};
  CHECK_THROWS_WITH_AS(icll::run_benchmark(cfg, log), doctest::Contains("unknown method"),
                       std::invalid_argument);
}

TEST_CASE("score and aggregate artifacts land in the output directory") {
  const auto dir = scratch_dir("artifacts");
  icll::BenchmarkConfig cfg;
  cfg.dataset_paths = {write_blob_csv(dir, "easy", 61, 20, 10, 9.0),
                       write_blob_csv(dir, "tough", 62, 24, 8, 1.2)};
  cfg.methods = {"NoResample-RF", "SMOTE", "ICLL"};
  cfg.repeats = 1;
  cfg.folds = 2;
  cfg.seed = 13;
  cfg.workers = 1;
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  const auto result = icll::run_benchmark(cfg, log);
  REQUIRE(result.failures.empty());

  icll::write_scores(result, cfg);
  {
    std::ifstream in(dir / "out" / "scores.csv");
    const auto back = icll::ScoreTable::read_csv(in);
    REQUIRE(back.cells().size() == result.table.cells().size());
    for (std::size_t i = 0; i < back.cells().size(); ++i) {
      CHECK(back.cells()[i].dataset == result.table.cells()[i].dataset);
      CHECK(back.cells()[i].method == result.table.cells()[i].method);
      CHECK(back.cells()[i].repeat == result.table.cells()[i].repeat);
      CHECK(back.cells()[i].fold == result.table.cells()[i].fold);
      CHECK(back.cells()[i].auc == result.table.cells()[i].auc);
    }
  }
  CHECK(read_file(dir / "out" / "failures.csv") == "dataset,stage,message\n");

  icll::write_aggregates(result.table, cfg);
  for (const char* name :
       {"average_rank.csv", "pct_diff.csv", "rope.csv", "difficult_datasets.csv",
        "average_rank_difficult.csv", "pct_diff_difficult.csv", "rope_difficult.csv",
        "summary.json", "summary.txt"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(dir / "out" / name));
  }
  const auto summary = nlohmann::json::parse(read_file(dir / "out" / "summary.json"));
  CHECK(summary.at("datasets").size() == 2);
  CHECK(summary.at("methods").size() == 3);
  CHECK(summary.at("reference") == "ICLL");
  CHECK(summary.at("avg_rank").size() == 3);
  CHECK(summary.at("rope_vs_reference").size() == 2);
  for (const auto& entry : summary.at("rope_vs_reference")) {
    CHECK(entry.at("method") != "ICLL");
    const double total = entry.at("p_win").get<double>() + entry.at("p_draw").get<double>() +
                         entry.at("p_loss").get<double>();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  const std::string txt = read_file(dir / "out" / "summary.txt");
  CHECK(txt.find("average rank") != std::string::npos);
  CHECK(txt.find("ICLL") != std::string::npos);
}
