#include "icll/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "icll/rng.hpp"

namespace icll {

namespace {

struct ClassSplit {
  std::vector<Eigen::Index> majority;  // label 0
  std::vector<Eigen::Index> minority;  // label 1
};

ClassSplit split_classes(const Eigen::VectorXi& y) {
  ClassSplit s;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw std::invalid_argument("labels must be 0 or 1");
    (y[i] == 1 ? s.minority : s.majority).push_back(i);
  }
  if (s.majority.empty() || s.minority.empty()) {
    throw std::invalid_argument("resampling needs both classes present");
  }
  return s;
}

void check_plan(const ResamplePlan& plan) {
  if (plan.k_neighbors < 1) throw std::invalid_argument("k_neighbors must be at least 1");
  if (!(plan.target_ratio > 0.0) || plan.target_ratio > 1.0) {
    throw std::invalid_argument("target_ratio must be in (0, 1]");
  }
}

double sq_dist(const Eigen::MatrixXd& x, Eigen::Index a, Eigen::Index b) {
  return (x.row(a) - x.row(b)).squaredNorm();
}

/// Rows of `x` restricted to `rows`, plus `extra` synthetic rows appended.
ResampledData assemble(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const std::vector<Eigen::Index>& rows,
                       const std::vector<Eigen::VectorXd>& extra, int extra_label) {
  ResampledData out;
  const auto total = static_cast<Eigen::Index>(rows.size() + extra.size());
  out.x.resize(total, x.cols());
  out.y.resize(total);
  Eigen::Index at = 0;
  for (Eigen::Index r : rows) {
    out.x.row(at) = x.row(r);
    out.y[at] = y[r];
    ++at;
  }
  for (const auto& row : extra) {
    out.x.row(at) = row.transpose();
    out.y[at] = extra_label;
    ++at;
  }
  return out;
}

std::vector<Eigen::Index> all_rows(const Eigen::VectorXi& y) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(y.size()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return rows;
}

/// Neighbors of every minority point among the other minority points, each
/// list sorted by (distance, row index) and truncated to k.
std::vector<std::vector<Eigen::Index>> minority_neighbors(const Eigen::MatrixXd& x,
                                                          const std::vector<Eigen::Index>& minority,
                                                          int k) {
  std::vector<std::vector<Eigen::Index>> lists(minority.size());
  for (std::size_t i = 0; i < minority.size(); ++i) {
    std::vector<std::pair<double, Eigen::Index>> cand;
    cand.reserve(minority.size() - 1);
    for (std::size_t j = 0; j < minority.size(); ++j) {
      if (j == i) continue;
      cand.emplace_back(sq_dist(x, minority[i], minority[j]), minority[j]);
    }
    std::sort(cand.begin(), cand.end());
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), cand.size());
    lists[i].reserve(take);
    for (std::size_t j = 0; j < take; ++j) lists[i].push_back(cand[j].second);
  }
  return lists;
}

long long synth_count(const ClassSplit& split, double ratio) {
  const auto want = std::llround(ratio * static_cast<double>(split.majority.size()));
  return want - static_cast<long long>(split.minority.size());
}

Eigen::VectorXd interpolate(const Eigen::MatrixXd& x, Eigen::Index base, Eigen::Index neighbor,
                            double u) {
  return x.row(base).transpose() + u * (x.row(neighbor) - x.row(base)).transpose();
}

ResampledData smote_impl(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                         const ResamplePlan& plan, const ClassSplit& split) {
  if (split.minority.size() < 2) {
    throw std::invalid_argument("smote needs at least two minority instances");
  }
  const long long add = synth_count(split, plan.target_ratio);
  std::vector<Eigen::VectorXd> synthetic;
  if (add > 0) {
    const int k = std::min<int>(plan.k_neighbors,
                                static_cast<int>(split.minority.size()) - 1);
    const auto neighbors = minority_neighbors(x, split.minority, k);
    Rng rng(plan.seed);
    synthetic.reserve(static_cast<std::size_t>(add));
    for (long long s = 0; s < add; ++s) {
      const auto i = static_cast<std::size_t>(rng.below(split.minority.size()));
      const auto nb = neighbors[i][static_cast<std::size_t>(rng.below(neighbors[i].size()))];
      synthetic.push_back(interpolate(x, split.minority[i], nb, rng.uniform01()));
    }
  }
  return assemble(x, y, all_rows(y), synthetic, 1);
}

}  // namespace

std::string to_string(ResampleMethod method) {
  switch (method) {
    case ResampleMethod::RO: return "ro";
    case ResampleMethod::RU: return "ru";
    case ResampleMethod::SMOTE: return "smote";
    case ResampleMethod::ADASYN: return "adasyn";
    case ResampleMethod::NearMiss: return "nearmiss";
    case ResampleMethod::OSS: return "oss";
  }
  throw std::logic_error("unreachable");
}

ResampleMethod resample_method_from_string(const std::string& name) {
  if (name == "ro") return ResampleMethod::RO;
  if (name == "ru") return ResampleMethod::RU;
  if (name == "smote") return ResampleMethod::SMOTE;
  if (name == "adasyn") return ResampleMethod::ADASYN;
  if (name == "nearmiss") return ResampleMethod::NearMiss;
  if (name == "oss") return ResampleMethod::OSS;
  throw std::invalid_argument("unknown resampling method: " + name);
}

ResampledData random_oversample(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                                const ResamplePlan& plan) {
  check_plan(plan);
  const ClassSplit split = split_classes(y);
  const long long add = synth_count(split, plan.target_ratio);
  std::vector<Eigen::VectorXd> copies;
  if (add > 0) {
    Rng rng(plan.seed);
    copies.reserve(static_cast<std::size_t>(add));
    for (long long s = 0; s < add; ++s) {
      const auto i = split.minority[static_cast<std::size_t>(rng.below(split.minority.size()))];
      copies.push_back(x.row(i).transpose());
    }
  }
  return assemble(x, y, all_rows(y), copies, 1);
}

ResampledData random_undersample(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                                 const ResamplePlan& plan) {
  check_plan(plan);
  const ClassSplit split = split_classes(y);
  const auto keep = std::min<long long>(
      std::llround(static_cast<double>(split.minority.size()) / plan.target_ratio),
      static_cast<long long>(split.majority.size()));

  Rng rng(plan.seed);
  const auto picked = rng.sample_without_replacement(
      static_cast<Eigen::Index>(split.majority.size()), static_cast<Eigen::Index>(keep));
  std::vector<bool> kept(split.majority.size(), false);
  for (Eigen::Index p : picked) kept[static_cast<std::size_t>(p)] = true;

  std::vector<Eigen::Index> rows;
  std::size_t maj_seen = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1) {
      rows.push_back(i);
    } else if (kept[maj_seen++]) {
      rows.push_back(i);
    }
  }
  return assemble(x, y, rows, {}, 1);
}

ResampledData smote(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                    const ResamplePlan& plan) {
  check_plan(plan);
  return smote_impl(x, y, plan, split_classes(y));
}

ResampledData adasyn(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                     const ResamplePlan& plan) {
  check_plan(plan);
  const ClassSplit split = split_classes(y);
  if (split.minority.size() < 2) {
    throw std::invalid_argument("adasyn needs at least two minority instances");
  }
  const long long add = synth_count(split, plan.target_ratio);
  if (add <= 0) return assemble(x, y, all_rows(y), {}, 1);

  // Difficulty weight per minority point: share of majority points among its
  // k nearest neighbors over the whole training set.
  const Eigen::Index n = y.size();
  const auto k_all = std::min<std::size_t>(static_cast<std::size_t>(plan.k_neighbors),
                                           static_cast<std::size_t>(n) - 1);
  std::vector<double> weight(split.minority.size(), 0.0);
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < split.minority.size(); ++i) {
    std::vector<std::pair<double, Eigen::Index>> cand;
    cand.reserve(static_cast<std::size_t>(n) - 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == split.minority[i]) continue;
      cand.emplace_back(sq_dist(x, split.minority[i], j), j);
    }
    std::sort(cand.begin(), cand.end());
    int majority_near = 0;
    for (std::size_t j = 0; j < k_all; ++j) majority_near += (y[cand[j].second] == 0);
    weight[i] = static_cast<double>(majority_near) / static_cast<double>(k_all);
    weight_sum += weight[i];
  }

  if (weight_sum == 0.0) {
    std::cerr << "adasyn: no minority instance has majority neighbors; "
                 "falling back to smote\n";
    return smote_impl(x, y, plan, split);
  }

  // Largest-remainder allocation of the synthetic budget, ties to the lower
  // minority index.
  std::vector<long long> alloc(split.minority.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainder(split.minority.size());
  long long assigned = 0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    const double quota = static_cast<double>(add) * weight[i] / weight_sum;
    alloc[i] = static_cast<long long>(std::floor(quota));
    assigned += alloc[i];
    remainder[i] = {quota - std::floor(quota), i};
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long long r = 0; r < add - assigned; ++r) {
    ++alloc[remainder[static_cast<std::size_t>(r)].second];
  }

  const int k_min = std::min<int>(plan.k_neighbors,
                                  static_cast<int>(split.minority.size()) - 1);
  const auto neighbors = minority_neighbors(x, split.minority, k_min);
  Rng rng(plan.seed);
  std::vector<Eigen::VectorXd> synthetic;
  synthetic.reserve(static_cast<std::size_t>(add));
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    for (long long s = 0; s < alloc[i]; ++s) {
      const auto nb = neighbors[i][static_cast<std::size_t>(rng.below(neighbors[i].size()))];
      synthetic.push_back(interpolate(x, split.minority[i], nb, rng.uniform01()));
    }
  }
  return assemble(x, y, all_rows(y), synthetic, 1);
}

ResampledData nearmiss(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const ResamplePlan& plan) {
  check_plan(plan);
  const ClassSplit split = split_classes(y);
  const auto keep = std::min<long long>(
      std::llround(static_cast<double>(split.minority.size()) / plan.target_ratio),
      static_cast<long long>(split.majority.size()));

  const auto q = std::min<std::size_t>(3, split.minority.size());
  std::vector<std::pair<double, Eigen::Index>> ranked;
  ranked.reserve(split.majority.size());
  for (Eigen::Index m : split.majority) {
    std::vector<double> dists;
    dists.reserve(split.minority.size());
    for (Eigen::Index mn : split.minority) {
      dists.push_back(std::sqrt(sq_dist(x, m, mn)));
    }
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(q) - 1,
                     dists.end());
    double mean = 0.0;
    for (std::size_t i = 0; i < q; ++i) mean += dists[i];
    ranked.emplace_back(mean / static_cast<double>(q), m);
  }
  std::sort(ranked.begin(), ranked.end());

  std::vector<bool> kept_row(static_cast<std::size_t>(y.size()), false);
  for (long long i = 0; i < keep; ++i) {
    kept_row[static_cast<std::size_t>(ranked[static_cast<std::size_t>(i)].second)] = true;
  }
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1 || kept_row[static_cast<std::size_t>(i)]) rows.push_back(i);
  }
  return assemble(x, y, rows, {}, 1);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> tomek_links(const Eigen::MatrixXd& x,
                                                               const Eigen::VectorXi& y) {
  const Eigen::Index n = x.rows();
  if (n != y.size()) throw std::invalid_argument("feature rows and label length differ");
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Smallest and second-smallest neighbor distance per point, so the nearest
  // distance excluding any one candidate j is available in O(1).
  std::vector<double> d1(static_cast<std::size_t>(n), inf);
  std::vector<double> d2(static_cast<std::size_t>(n), inf);
  std::vector<Eigen::Index> arg1(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = sq_dist(x, i, j);
      auto& best = d1[static_cast<std::size_t>(i)];
      auto& second = d2[static_cast<std::size_t>(i)];
      if (d < best) {
        second = best;
        best = d;
        arg1[static_cast<std::size_t>(i)] = j;
      } else if (d < second) {
        second = d;
      }
    }
  }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> links;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (y[i] == y[j]) continue;
      const double d = sq_dist(x, i, j);
      const double near_i =
          arg1[static_cast<std::size_t>(i)] == j ? d2[static_cast<std::size_t>(i)]
                                                 : d1[static_cast<std::size_t>(i)];
      const double near_j =
          arg1[static_cast<std::size_t>(j)] == i ? d2[static_cast<std::size_t>(j)]
                                                 : d1[static_cast<std::size_t>(j)];
      if (d <= near_i && d <= near_j) links.emplace_back(i, j);
    }
  }
  return links;
}

ResampledData oss(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                  const ResamplePlan& plan) {
  check_plan(plan);
  const ClassSplit split = split_classes(y);

  // Condensed-set pass: start from all minority rows plus one random majority
  // row, then add each majority row its 1-NN over the current set mislabels.
  Rng rng(plan.seed);
  const Eigen::Index seed_row =
      split.majority[static_cast<std::size_t>(rng.below(split.majority.size()))];
  std::vector<Eigen::Index> members = split.minority;
  members.push_back(seed_row);

  std::vector<bool> in_set(static_cast<std::size_t>(y.size()), false);
  for (Eigen::Index m : members) in_set[static_cast<std::size_t>(m)] = true;

  for (Eigen::Index r : split.majority) {
    if (r == seed_row) continue;
    double best = std::numeric_limits<double>::infinity();
    int predicted = 0;
    for (Eigen::Index m : members) {
      const double d = sq_dist(x, r, m);
      if (d < best) {
        best = d;
        predicted = y[m];
      }
    }
    if (predicted != y[r]) {
      members.push_back(r);
      in_set[static_cast<std::size_t>(r)] = true;
    }
  }

  // Tomek cleanup within the condensed set: drop its majority link members.
  std::vector<Eigen::Index> subset;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (in_set[static_cast<std::size_t>(i)]) subset.push_back(i);
  }
  Eigen::MatrixXd xs(static_cast<Eigen::Index>(subset.size()), x.cols());
  Eigen::VectorXi ys(static_cast<Eigen::Index>(subset.size()));
  for (std::size_t i = 0; i < subset.size(); ++i) {
    xs.row(static_cast<Eigen::Index>(i)) = x.row(subset[i]);
    ys[static_cast<Eigen::Index>(i)] = y[subset[i]];
  }
  for (const auto& [a, b] : tomek_links(xs, ys)) {
    const Eigen::Index maj_local = ys[a] == 0 ? a : b;
    in_set[static_cast<std::size_t>(subset[static_cast<std::size_t>(maj_local)])] = false;
  }

  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (in_set[static_cast<std::size_t>(i)]) rows.push_back(i);
  }
  return assemble(x, y, rows, {}, 1);
}

namespace {

Dataset wrap(const Dataset& d, ResampledData rd) {
  Dataset out;
  out.features = std::move(rd.x);
  out.labels = std::move(rd.y);
  out.feature_names = d.feature_names;
  out.name = d.name;
  out.label_name = d.label_name;
  out.class_names = d.class_names;
  return out;
}

}  // namespace

Dataset random_oversample(const Dataset& d, const ResamplePlan& plan) {
  return wrap(d, random_oversample(d.features, d.labels, plan));
}
Dataset random_undersample(const Dataset& d, const ResamplePlan& plan) {
  return wrap(d, random_undersample(d.features, d.labels, plan));
}
Dataset smote(const Dataset& d, const ResamplePlan& plan) {
  return wrap(d, smote(d.features, d.labels, plan));
}
Dataset adasyn(const Dataset& d, const ResamplePlan& plan) {
  return wrap(d, adasyn(d.features, d.labels, plan));
}
Dataset nearmiss(const Dataset& d, const ResamplePlan& plan) {
  return wrap(d, nearmiss(d.features, d.labels, plan));
}
Dataset oss(const Dataset& d, const ResamplePlan& plan) {
  return wrap(d, oss(d.features, d.labels, plan));
}

Dataset resample(const Dataset& d, const ResamplePlan& plan) {
  switch (plan.method) {
    case ResampleMethod::RO: return random_oversample(d, plan);
    case ResampleMethod::RU: return random_undersample(d, plan);
    case ResampleMethod::SMOTE: return smote(d, plan);
    case ResampleMethod::ADASYN: return adasyn(d, plan);
    case ResampleMethod::NearMiss: return nearmiss(d, plan);
    case ResampleMethod::OSS: return oss(d, plan);
  }
  throw std::logic_error("unreachable");
}

}  // namespace icll
