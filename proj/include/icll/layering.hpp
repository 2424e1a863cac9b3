#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "icll/dataset.hpp"
#include "icll/hcluster.hpp"

namespace icll {

/// Group of an instance, decided by the class composition of its flat
/// cluster: only majority labels, only minority labels, or both.
enum class Group { PureMajority, PureMinority, Mixed };

std::string to_string(Group g);

struct GroupAssignment {
  std::vector<Group> group_of;   // per instance
  Eigen::VectorXi cluster_of;    // copied from the clustering
  Eigen::Index n_pure_majority = 0;
  Eigen::Index n_pure_minority = 0;
  Eigen::Index n_mixed = 0;
};

enum class DegeneracyKind { None, EmptyCmin, EmptyCmix, EmptyCmaj };

std::string to_string(DegeneracyKind k);

/// First-layer task: 1 for instances in the mixed or pure-minority group,
/// 0 for pure-majority instances.
struct Layer1Task {
  Eigen::VectorXi y;
  Eigen::Index n_zero = 0;
  Eigen::Index n_one = 0;

  /// Task imbalance in the original orientation (zeros over ones). Strictly
  /// below the dataset ratio whenever the mixed group holds a majority row.
  double imbalance_ratio() const {
    return static_cast<double>(n_zero) / static_cast<double>(n_one);
  }
};

/// Second-layer task: the original labels restricted to the rows where the
/// first-layer target is 1 (pure-majority rows are discarded).
struct Layer2Task {
  std::vector<Eigen::Index> rows;
  Eigen::VectorXi y;
};

/// Per-cluster three-way classification of every instance.
GroupAssignment assign_groups(const Dataset& d, const FlatClustering& clustering);

Layer1Task derive_layer1_targets(const GroupAssignment& g);

Layer2Task derive_layer2_targets(const Dataset& d, const GroupAssignment& g);

/// Reports which group is empty, if any. When several are empty the most
/// severe wins: EmptyCmaj over EmptyCmix over EmptyCmin.
DegeneracyKind classify_degenerate(const GroupAssignment& g);

/// Audit export, one line per instance: "index,cluster,group,label".
void write_group_audit(const Dataset& d, const GroupAssignment& g, std::ostream& out);

}  // namespace icll
