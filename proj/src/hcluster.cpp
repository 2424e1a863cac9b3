#include "icll/hcluster.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace icll {

LinkageTree ward_linkage(const DistanceMatrix& dist) {
  const Eigen::Index n = dist.n;
  if (n < 2) throw std::invalid_argument("ward_linkage needs at least 2 instances");

  // Working copy as a full symmetric matrix. Each live cluster occupies one
  // slot; a merge writes the combined cluster into the lower slot.
  Eigen::MatrixXd d(n, n);
  d.setZero();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = dist(i, j);

  struct Slot {
    int id;
    double size;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = {static_cast<int>(i), 1.0};

  // Live slots kept in ascending cluster-id order; new clusters get the
  // largest id so far, so push_back preserves the order. Scanning pairs in
  // this order makes a strict '<' comparison realize the lexicographic
  // smallest-pair tie-break.
  std::vector<Eigen::Index> live(static_cast<std::size_t>(n));
  std::iota(live.begin(), live.end(), Eigen::Index{0});

  LinkageTree tree;
  tree.n_leaves = n;
  tree.merges.reserve(static_cast<std::size_t>(n - 1));

  for (Eigen::Index step = 0; step < n - 1; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    for (std::size_t a = 0; a + 1 < live.size(); ++a) {
      for (std::size_t b = a + 1; b < live.size(); ++b) {
        const double v = d(live[a], live[b]);
        if (v < best) {
          best = v;
          bi = a;
          bj = b;
        }
      }
    }

    const Eigen::Index si = live[bi];
    const Eigen::Index sj = live[bj];
    const double ni = slots[static_cast<std::size_t>(si)].size;
    const double nj = slots[static_cast<std::size_t>(sj)].size;
    const double dij2 = best * best;

    Merge m;
    m.left = slots[static_cast<std::size_t>(si)].id;
    m.right = slots[static_cast<std::size_t>(sj)].id;
    m.height = best;
    m.size = static_cast<int>(ni + nj);
    tree.merges.push_back(m);

    // Lance-Williams update for Ward into slot si.
    for (const Eigen::Index sk : live) {
      if (sk == si || sk == sj) continue;
      const double nk = slots[static_cast<std::size_t>(sk)].size;
      const double dik2 = d(si, sk) * d(si, sk);
      const double djk2 = d(sj, sk) * d(sj, sk);
      const double v = std::sqrt(((nk + ni) * dik2 + (nk + nj) * djk2 - nk * dij2) /
                                 (ni + nj + nk));
      d(si, sk) = d(sk, si) = v;
    }

    slots[static_cast<std::size_t>(si)] = {static_cast<int>(n + step), ni + nj};
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(bj));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(bi));
    live.push_back(si);
  }
  return tree;
}

CutParameters cut_parameters(const LinkageTree& tree) {
  std::vector<double> logs;
  logs.reserve(tree.merges.size());
  for (const Merge& m : tree.merges)
    if (m.height > 0.0) logs.push_back(std::log(m.height));
  if (logs.empty())
    throw DegenerateCutError("all merge heights are zero: data is fully duplicated");

  CutParameters cp;
  const auto m = static_cast<double>(logs.size());
  cp.mu = std::accumulate(logs.begin(), logs.end(), 0.0) / m;
  double ss = 0.0;
  for (const double v : logs) ss += (v - cp.mu) * (v - cp.mu);
  cp.sigma = std::sqrt(ss / m);
  cp.tau = cp.mu + cp.sigma;
  return cp;
}

FlatClustering form_clusters(const LinkageTree& tree, double tau) {
  const Eigen::Index n = tree.n_leaves;
  const std::size_t n_nodes = static_cast<std::size_t>(2 * n - 1);

  std::vector<int> parent(n_nodes, -1);
  std::vector<char> qualifies(n_nodes, 0);
  for (std::size_t t = 0; t < tree.merges.size(); ++t) {
    const Merge& m = tree.merges[t];
    const int id = static_cast<int>(n) + static_cast<int>(t);
    parent[static_cast<std::size_t>(m.left)] = id;
    parent[static_cast<std::size_t>(m.right)] = id;
    // Zero-height merges (duplicate rows) always qualify.
    qualifies[static_cast<std::size_t>(id)] = m.height == 0.0 || std::log(m.height) <= tau;
  }

  // Each instance joins the largest (highest) qualifying subtree containing
  // it; with nothing qualifying on its ancestor chain it stays a singleton.
  FlatClustering fc;
  fc.cluster_of.resize(n);
  std::vector<int> label_of_node(n_nodes, -1);
  int next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    int node = static_cast<int>(i);
    int chosen = static_cast<int>(i);
    while (parent[static_cast<std::size_t>(node)] >= 0) {
      node = parent[static_cast<std::size_t>(node)];
      if (qualifies[static_cast<std::size_t>(node)]) chosen = node;
    }
    if (label_of_node[static_cast<std::size_t>(chosen)] < 0)
      label_of_node[static_cast<std::size_t>(chosen)] = next++;
    fc.cluster_of(i) = label_of_node[static_cast<std::size_t>(chosen)];
  }
  fc.k = next;
  return fc;
}

FlatClustering cluster(const Eigen::MatrixXd& features) {
  const DistanceMatrix d = pairwise_euclidean(features);
  const LinkageTree tree = ward_linkage(d);
  const CutParameters cp = cut_parameters(tree);
  return form_clusters(tree, cp.tau);
}

void write_dendrogram(const LinkageTree& tree, std::ostream& out) {
  for (const Merge& m : tree.merges)
    out << m.left << ' ' << m.right << ' ' << m.height << ' ' << m.size << '\n';
}

}  // namespace icll
