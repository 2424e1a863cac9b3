// Generates the bundled synthetic benchmark suite in KEEL .dat format.
// Every dataset is a fixed-seed Gaussian blob mixture, so regenerating the
// suite reproduces the committed files byte for byte.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icll/rng.hpp"

namespace {

struct Blob {
  int label = 0;  // 0 majority, 1 minority
  int count = 0;
  double sigma = 1.0;
  std::vector<double> center;
};

struct Spec {
  std::string name;
  std::uint64_t seed = 0;
  int real_dims = 2;
  std::vector<Blob> blobs;
  std::vector<std::vector<std::string>> nominals;  // extra categorical noise columns
};

// The suite mixes three regimes: fully separable problems (where clustering
// isolates the classes and any learner is near-perfect), moderately
// overlapping ones, and hard problems whose minority sub-blobs sit 1.0-1.6
// sigma from a majority center. Most hard problems also carry a second,
// clean majority blob, the structure whose removal the layered model is
// built around.
std::vector<Spec> suite() {
  std::vector<Spec> specs;
  auto add = [&](Spec s) { specs.push_back(std::move(s)); };

  add({"ring-sep2", 101, 2, {{0, 160, 1.0, {0, 0}}, {1, 40, 0.8, {9, 9}}}, {}});
  add({"twin-sep5", 102, 5,
       {{0, 150, 1.0, {0, 0, 0, 0, 0}},
        {0, 120, 1.0, {4, 4, 0, 0, 0}},
        {1, 30, 1.0, {12, 12, 12, 12, 12}}},
       {}});
  add({"micro-sep", 103, 3, {{0, 80, 1.0, {0, 0, 0}}, {1, 12, 0.8, {8, 8, 8}}}, {}});
  add({"spiral-mix", 104, 3,
       {{0, 120, 1.0, {0, 0, 0}},
        {0, 90, 1.0, {7, 0, 0}},
        {1, 25, 1.0, {0, 0, 2.6}},
        {1, 15, 1.0, {7, 2.7, 0}}},
       {}});
  add({"bands-3d", 105, 3,
       {{0, 130, 1.0, {0, 0, 0}},
        {0, 125, 1.0, {8, 8, 0}},
        {1, 28, 1.0, {2.2, 0, 0}},
        {1, 17, 1.0, {8, 8, 2.3}}},
       {}});
  add({"petal-4d", 106, 4,
       {{0, 170, 1.0, {0, 0, 0, 0}},
        {0, 170, 1.0, {9, 0, 0, 0}},
        {1, 35, 1.0, {0, 2.5, 0, 0}},
        {1, 25, 1.0, {9, 0, 2.6, 0}}},
       {}});
  add({"shell-2d", 107, 2, {{0, 200, 1.0, {0, 0}}, {1, 40, 0.9, {2.1, 0}}}, {}});
  add({"fog-2d", 108, 2,
       {{0, 140, 1.0, {0, 0}}, {0, 110, 1.0, {6, 6}}, {1, 50, 1.0, {1.2, 0}}},
       {}});
  add({"haze-3d", 109, 3,
       {{0, 150, 1.0, {0, 0, 0}},
        {0, 150, 1.0, {7, 0, 0}},
        {1, 30, 1.0, {0, 1.0, 0}},
        {1, 20, 1.0, {7, 1.5, 0}}},
       {}});
  add({"murk-5d", 110, 5,
       {{0, 176, 1.0, {0, 0, 0, 0, 0}},
        {0, 176, 1.0, {6, 0, 0, 0, 0}},
        {1, 28, 1.0, {0.9, 0.9, 0, 0, 0}},
        {1, 20, 1.0, {6, 1.3, 0, 0, 0}}},
       {}});
  add({"drift-2d", 111, 2,
       {{0, 250, 1.0, {0, 0}},
        {0, 200, 1.0, {8, 0}},
        {1, 20, 1.0, {1.2, 0}},
        {1, 18, 1.0, {0, 1.3}},
        {1, 12, 1.0, {8, 1.2}}},
       {}});
  add({"blur-4d", 112, 4,
       {{0, 170, 1.0, {0, 0, 0, 0}},
        {0, 70, 1.0, {7, 7, 0, 0}},
        {1, 40, 1.0, {0.55, 0.55, 0.55, 0.55}}},
       {}});
  add({"smoke-3d", 113, 3,
       {{0, 300, 1.0, {0, 0, 0}},
        {0, 240, 1.0, {0, 7, 0}},
        {1, 35, 1.0, {1.4, 0, 0}},
        {1, 25, 1.0, {0, 7, 1.4}}},
       {}});
  add({"static-6d", 114, 6,
       {{0, 100, 1.0, {0, 0, 0, 0, 0, 0}},
        {0, 90, 1.0, {5, 5, 0, 0, 0, 0}},
        {1, 30, 1.0, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}}},
       {}});
  add({"mixed-cat", 115, 2,
       {{0, 150, 1.0, {0, 0}}, {0, 70, 1.0, {6, 0}}, {1, 40, 1.0, {1.8, 0}}},
       {{"low", "mid", "high"}}});
  add({"coded-cat", 116, 3,
       {{0, 150, 1.0, {0, 0, 0}}, {1, 30, 0.9, {2.4, 0, 0}}},
       {{"yes", "no"}}});
  add({"rare-20", 117, 3,
       {{0, 220, 1.0, {0, 0, 0}}, {0, 180, 1.0, {6, 6, 0}}, {1, 20, 1.0, {1.6, 0, 0}}},
       {}});
  add({"near-balance", 118, 2, {{0, 85, 1.0, {0, 0}}, {1, 65, 1.0, {2.0, 0}}}, {}});
  return specs;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct Row {
  std::vector<double> reals;
  std::vector<std::string> cats;
  int label = 0;
};

std::string render(const Spec& spec) {
  icll::Rng rng(spec.seed);

  std::vector<Row> rows;
  for (const Blob& blob : spec.blobs) {
    for (int i = 0; i < blob.count; ++i) {
      Row row;
      row.label = blob.label;
      row.reals.resize(static_cast<std::size_t>(spec.real_dims));
      for (int d = 0; d < spec.real_dims; ++d) {
        row.reals[static_cast<std::size_t>(d)] =
            blob.center[static_cast<std::size_t>(d)] + blob.sigma * rng.normal();
      }
      for (const auto& categories : spec.nominals) {
        row.cats.push_back(categories[static_cast<std::size_t>(rng.below(categories.size()))]);
      }
      rows.push_back(std::move(row));
    }
  }
  rng.shuffle(rows);

  std::vector<double> lo(static_cast<std::size_t>(spec.real_dims), 0.0);
  std::vector<double> hi(static_cast<std::size_t>(spec.real_dims), 0.0);
  for (int d = 0; d < spec.real_dims; ++d) {
    lo[static_cast<std::size_t>(d)] = hi[static_cast<std::size_t>(d)] = rows[0].reals[static_cast<std::size_t>(d)];
    for (const Row& row : rows) {
      lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], row.reals[static_cast<std::size_t>(d)]);
      hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], row.reals[static_cast<std::size_t>(d)]);
    }
  }

  std::string out = "@relation " + spec.name + "\n";
  std::vector<std::string> input_names;
  for (int d = 0; d < spec.real_dims; ++d) {
    const std::string name = "f" + std::to_string(d + 1);
    input_names.push_back(name);
    out += "@attribute " + name + " real [" + num(lo[static_cast<std::size_t>(d)]) + ", " +
           num(hi[static_cast<std::size_t>(d)]) + "]\n";
  }
  for (std::size_t c = 0; c < spec.nominals.size(); ++c) {
    const std::string name = "c" + std::to_string(c + 1);
    input_names.push_back(name);
    out += "@attribute " + name + " {";
    for (std::size_t v = 0; v < spec.nominals[c].size(); ++v) {
      if (v > 0) out += ", ";
      out += spec.nominals[c][v];
    }
    out += "}\n";
  }
  out += "@attribute class {negative, positive}\n";
  out += "@inputs ";
  for (std::size_t i = 0; i < input_names.size(); ++i) {
    if (i > 0) out += ", ";
    out += input_names[i];
  }
  out += "\n@outputs class\n@data\n";
  for (const Row& row : rows) {
    std::string line;
    for (const double v : row.reals) {
      line += num(v);
      line += ", ";
    }
    for (const auto& c : row.cats) {
      line += c;
      line += ", ";
    }
    line += row.label == 1 ? "positive" : "negative";
    out += line + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerate the bundled synthetic KEEL-format benchmark suite"};
  std::string out_dir = "data/keel";
  app.add_option("--out", out_dir, "output directory");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  for (const Spec& spec : suite()) {
    const auto path = std::filesystem::path(out_dir) / (spec.name + ".dat");
    std::ofstream file(path);
    if (!file) {
      std::cerr << "cannot write " << path << "\n";
      return 2;
    }
    file << render(spec);
    int majority = 0;
    int minority = 0;
    for (const Blob& b : spec.blobs) (b.label == 1 ? minority : majority) += b.count;
    std::cout << spec.name << ": n=" << majority + minority << " majority=" << majority
              << " minority=" << minority << "\n";
  }
  return 0;
}
