#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "icll/dataset.hpp"

namespace icll {

enum class ResampleMethod { RO, RU, SMOTE, ADASYN, NearMiss, OSS };

std::string to_string(ResampleMethod method);
ResampleMethod resample_method_from_string(const std::string& name);

struct ResamplePlan {
  ResampleMethod method = ResampleMethod::SMOTE;
  int k_neighbors = 5;        // SMOTE/ADASYN neighborhood size
  double target_ratio = 1.0;  // desired minority/majority count ratio
  std::uint64_t seed = 0;
};

/// Raw feature/target form of a resampled training set. Labels follow the
/// dataset convention: 1 is the class being protected or synthesized.
struct ResampledData {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
};

// Core resamplers on raw matrices. Surviving original rows keep their input
// order; replicated and synthetic rows are appended after them. These are the
// primitives composite models call on layer-specific targets.
ResampledData random_oversample(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                                const ResamplePlan& plan);
ResampledData random_undersample(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                                 const ResamplePlan& plan);
ResampledData smote(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                    const ResamplePlan& plan);
ResampledData adasyn(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                     const ResamplePlan& plan);
ResampledData nearmiss(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const ResamplePlan& plan);
ResampledData oss(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                  const ResamplePlan& plan);

// Dataset-level wrappers preserving names and metadata.
Dataset random_oversample(const Dataset& d, const ResamplePlan& plan);
Dataset random_undersample(const Dataset& d, const ResamplePlan& plan);
Dataset smote(const Dataset& d, const ResamplePlan& plan);
Dataset adasyn(const Dataset& d, const ResamplePlan& plan);
Dataset nearmiss(const Dataset& d, const ResamplePlan& plan);
Dataset oss(const Dataset& d, const ResamplePlan& plan);

Dataset resample(const Dataset& d, const ResamplePlan& plan);

/// All cross-class pairs (i, j) with i < j where each point is at least as
/// close to the other as to any third point. Equidistant third points do not
/// break a link.
std::vector<std::pair<Eigen::Index, Eigen::Index>> tomek_links(const Eigen::MatrixXd& x,
                                                               const Eigen::VectorXi& y);

}  // namespace icll
