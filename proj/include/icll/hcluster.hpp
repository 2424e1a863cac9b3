#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "icll/distance.hpp"

namespace icll {

/// One agglomeration step. Child ids 0..n-1 are leaves; the merge recorded at
/// position t creates cluster id n+t of the given size.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;
};

/// Ward linkage tree: n-1 merges with non-decreasing heights.
struct LinkageTree {
  Eigen::Index n_leaves = 0;
  std::vector<Merge> merges;
};

/// Statistics of the log-transformed merge heights and the resulting cut
/// threshold tau = mu + sigma (population standard deviation). Zero heights
/// from duplicate rows are excluded from the statistics.
struct CutParameters {
  double mu = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
};

/// Flat cluster assignment with contiguous ids 0..k-1, numbered by first
/// appearance in instance order.
struct FlatClustering {
  Eigen::VectorXi cluster_of;
  int k = 0;
};

/// Raised when every merge height is zero (fully duplicated data), which
/// leaves the log-height statistics undefined.
struct DegenerateCutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Agglomerative Ward clustering over a precomputed distance matrix, using
/// the Lance-Williams recurrence. The height of merging two singletons equals
/// their Euclidean distance; ties in the merge selection break toward the
/// lexicographically smallest (left, right) cluster-id pair.
LinkageTree ward_linkage(const DistanceMatrix& dist);

/// mu, sigma and tau of the log merge heights. Throws DegenerateCutError if
/// no positive heights exist.
CutParameters cut_parameters(const LinkageTree& tree);

/// Cut the tree at tau (in log space): every merge with log(height) <= tau is
/// applied, zero-height merges always. Instances never merged below the
/// threshold remain singletons.
FlatClustering form_clusters(const LinkageTree& tree, double tau);

/// Full pipeline: pairwise Euclidean distances, Ward linkage, automatic
/// mu + sigma cut.
FlatClustering cluster(const Eigen::MatrixXd& features);

/// One merge per line: "left right height size".
void write_dendrogram(const LinkageTree& tree, std::ostream& out);

}  // namespace icll
