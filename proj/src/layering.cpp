#include "icll/layering.hpp"

#include <ostream>
#include <stdexcept>

namespace icll {

std::string to_string(Group g) {
  switch (g) {
    case Group::PureMajority: return "pure_majority";
    case Group::PureMinority: return "pure_minority";
    case Group::Mixed: return "mixed";
  }
  return "unknown";
}

std::string to_string(DegeneracyKind k) {
  switch (k) {
    case DegeneracyKind::None: return "none";
    case DegeneracyKind::EmptyCmin: return "empty_pure_minority";
    case DegeneracyKind::EmptyCmix: return "empty_mixed";
    case DegeneracyKind::EmptyCmaj: return "empty_pure_majority";
  }
  return "unknown";
}

GroupAssignment assign_groups(const Dataset& d, const FlatClustering& clustering) {
  const Eigen::Index n = d.n_rows();
  if (clustering.cluster_of.size() != n)
    throw std::invalid_argument("clustering does not cover the dataset");

  std::vector<Eigen::Index> minority_in(static_cast<std::size_t>(clustering.k), 0);
  std::vector<Eigen::Index> majority_in(static_cast<std::size_t>(clustering.k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(clustering.cluster_of(i));
    if (d.labels(i) == 1)
      ++minority_in[c];
    else
      ++majority_in[c];
  }

  GroupAssignment g;
  g.cluster_of = clustering.cluster_of;
  g.group_of.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(clustering.cluster_of(i));
    Group grp;
    if (minority_in[c] == 0)
      grp = Group::PureMajority;
    else if (majority_in[c] == 0)
      grp = Group::PureMinority;
    else
      grp = Group::Mixed;
    g.group_of[static_cast<std::size_t>(i)] = grp;
    switch (grp) {
      case Group::PureMajority: ++g.n_pure_majority; break;
      case Group::PureMinority: ++g.n_pure_minority; break;
      case Group::Mixed: ++g.n_mixed; break;
    }
  }
  return g;
}

Layer1Task derive_layer1_targets(const GroupAssignment& g) {
  Layer1Task t;
  const auto n = static_cast<Eigen::Index>(g.group_of.size());
  t.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool one = g.group_of[static_cast<std::size_t>(i)] != Group::PureMajority;
    t.y(i) = one ? 1 : 0;
    ++(one ? t.n_one : t.n_zero);
  }
  return t;
}

Layer2Task derive_layer2_targets(const Dataset& d, const GroupAssignment& g) {
  Layer2Task t;
  const auto n = static_cast<Eigen::Index>(g.group_of.size());
  for (Eigen::Index i = 0; i < n; ++i)
    if (g.group_of[static_cast<std::size_t>(i)] != Group::PureMajority) t.rows.push_back(i);
  t.y.resize(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    t.y(static_cast<Eigen::Index>(r)) = d.labels(t.rows[r]);
  return t;
}

DegeneracyKind classify_degenerate(const GroupAssignment& g) {
  if (g.n_pure_majority == 0) return DegeneracyKind::EmptyCmaj;
  if (g.n_mixed == 0) return DegeneracyKind::EmptyCmix;
  if (g.n_pure_minority == 0) return DegeneracyKind::EmptyCmin;
  return DegeneracyKind::None;
}

void write_group_audit(const Dataset& d, const GroupAssignment& g, std::ostream& out) {
  out << "index,cluster,group,label\n";
  for (Eigen::Index i = 0; i < d.n_rows(); ++i)
    out << i << ',' << g.cluster_of(i) << ',' << to_string(g.group_of[static_cast<std::size_t>(i)])
        << ',' << d.labels(i) << '\n';
}

}  // namespace icll
