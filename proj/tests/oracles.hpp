#pragma once

// Independent reference implementations the tests compare the library
// against. Everything here recomputes results straight from definitions and
// shares no code with the library paths under test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "icll/hcluster.hpp"
#include "icll/rng.hpp"

namespace oracles {

struct BruteMerge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;
};

inline double cluster_sse(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& members) {
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
  for (Eigen::Index m : members) mean += x.row(m);
  mean /= static_cast<double>(members.size());
  double sse = 0.0;
  for (Eigen::Index m : members) sse += (x.row(m) - mean).squaredNorm();
  return sse;
}

// Ward clustering by explicit bookkeeping: every step recomputes, for every
// live cluster pair, the increase in total within-cluster squared error the
// union would cause, and merges the pair with the smallest sqrt(2 * increase).
// Ids mirror the library convention (leaves 0..n-1, merge t creates n+t) and
// ties keep the lexicographically smallest id pair.
inline std::vector<BruteMerge> brute_force_ward(const Eigen::MatrixXd& x) {
  const auto n = static_cast<int>(x.rows());
  std::vector<int> alive;
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(2 * n - 1));
  for (int i = 0; i < n; ++i) {
    alive.push_back(i);
    members[static_cast<std::size_t>(i)] = {i};
  }

  std::vector<BruteMerge> merges;
  for (int step = 0; step < n - 1; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < alive.size(); ++a) {
      for (std::size_t b = a + 1; b < alive.size(); ++b) {
        const auto& ma = members[static_cast<std::size_t>(alive[a])];
        const auto& mb = members[static_cast<std::size_t>(alive[b])];
        std::vector<Eigen::Index> merged = ma;
        merged.insert(merged.end(), mb.begin(), mb.end());
        const double increase =
            cluster_sse(x, merged) - cluster_sse(x, ma) - cluster_sse(x, mb);
        const double height = std::sqrt(std::max(0.0, 2.0 * increase));
        if (height < best) {
          best = height;
          best_a = a;
          best_b = b;
        }
      }
    }
    const int id_a = alive[best_a];
    const int id_b = alive[best_b];
    const int fresh = n + step;
    auto merged = members[static_cast<std::size_t>(id_a)];
    merged.insert(merged.end(), members[static_cast<std::size_t>(id_b)].begin(),
                  members[static_cast<std::size_t>(id_b)].end());
    members[static_cast<std::size_t>(fresh)] = std::move(merged);
    merges.push_back({std::min(id_a, id_b), std::max(id_a, id_b), best,
                      static_cast<int>(members[static_cast<std::size_t>(fresh)].size())});
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best_b));
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best_a));
    alive.push_back(fresh);
    std::sort(alive.begin(), alive.end());
  }
  return merges;
}

// Flat clustering by exhaustive subtree enumeration: list every node's leaf
// set, mark which nodes qualify under the cut (leaves always; merges when
// the height is zero or its log is within tau), and put each instance into
// the largest qualifying node that contains it.
inline Eigen::VectorXi exhaustive_cut(const icll::LinkageTree& tree, double tau) {
  const auto n = tree.n_leaves;
  std::vector<std::vector<Eigen::Index>> leafset(static_cast<std::size_t>(2 * n - 1));
  std::vector<bool> qualifies(static_cast<std::size_t>(2 * n - 1), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    leafset[static_cast<std::size_t>(i)] = {i};
    qualifies[static_cast<std::size_t>(i)] = true;
  }
  for (std::size_t t = 0; t < tree.merges.size(); ++t) {
    const auto& m = tree.merges[t];
    const std::size_t id = static_cast<std::size_t>(n) + t;
    leafset[id] = leafset[static_cast<std::size_t>(m.left)];
    leafset[id].insert(leafset[id].end(), leafset[static_cast<std::size_t>(m.right)].begin(),
                       leafset[static_cast<std::size_t>(m.right)].end());
    qualifies[id] = m.height == 0.0 || std::log(m.height) <= tau;
  }

  std::vector<Eigen::Index> home(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t best_node = static_cast<std::size_t>(i);
    for (std::size_t node = 0; node < leafset.size(); ++node) {
      if (!qualifies[node]) continue;
      if (std::find(leafset[node].begin(), leafset[node].end(), i) == leafset[node].end())
        continue;
      if (leafset[node].size() > leafset[best_node].size()) best_node = node;
    }
    home[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(best_node);
  }

  Eigen::VectorXi out(n);
  std::vector<Eigen::Index> seen;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index node = home[static_cast<std::size_t>(i)];
    auto it = std::find(seen.begin(), seen.end(), node);
    if (it == seen.end()) {
      seen.push_back(node);
      it = std::prev(seen.end());
    }
    out[i] = static_cast<int>(it - seen.begin());
  }
  return out;
}

// AUC by explicit pair counting over all (positive, negative) pairs.
inline double pair_count_auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels) {
  double credit = 0.0;
  Eigen::Index pairs = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (Eigen::Index j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        credit += 1.0;
      } else if (scores[i] == scores[j]) {
        credit += 0.5;
      }
    }
  }
  return credit / static_cast<double>(pairs);
}

// Tomek links straight from the definition: a cross-class pair is a link
// when no third point is strictly closer to either endpoint.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> definitional_tomek(
    const Eigen::MatrixXd& x, const Eigen::VectorXi& y) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> links;
  const Eigen::Index n = x.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (y[i] == y[j]) continue;
      const double d = (x.row(i) - x.row(j)).norm();
      bool link = true;
      for (Eigen::Index k = 0; k < n && link; ++k) {
        if (k == i || k == j) continue;
        if ((x.row(i) - x.row(k)).norm() < d || (x.row(j) - x.row(k)).norm() < d) link = false;
      }
      if (link) links.emplace_back(i, j);
    }
  }
  return links;
}

inline Eigen::MatrixXd random_matrix(icll::Rng& rng, Eigen::Index n, Eigen::Index p) {
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
  }
  return x;
}

// Random labels guaranteed to contain both classes, with roughly the given
// probability of a 1.
inline Eigen::VectorXi random_labels(icll::Rng& rng, Eigen::Index n, double p_one = 0.3) {
  Eigen::VectorXi y(n);
  while (true) {
    Eigen::Index ones = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = rng.uniform01() < p_one ? 1 : 0;
      ones += y[i];
    }
    if (ones > 0 && ones < n) return y;
  }
}

}  // namespace oracles
