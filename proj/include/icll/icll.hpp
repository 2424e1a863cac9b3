#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "icll/dataset.hpp"
#include "icll/hcluster.hpp"
#include "icll/layering.hpp"
#include "icll/learners.hpp"
#include "icll/resampling.hpp"

namespace icll {

/// The layered model and its ablations. SMOTE variants rebalance the named
/// layer's training task; L1/L2-only variants score with a single layer.
enum class IcllVariant {
  ICLL,
  ICLL_SMOTE,
  ICLL_SMOTE_L1,
  ICLL_SMOTE_L2,
  ICLL_L1_ONLY,
  ICLL_L2_ONLY,
};

std::string to_string(IcllVariant v);
IcllVariant icll_variant_from_string(const std::string& name);

struct IcllConfig {
  LearnerSpec base_learner;
  IcllVariant variant = IcllVariant::ICLL;
  ResamplePlan smote_plan;  // k and ratio for SMOTE variants; seeds derived per layer
  std::uint64_t seed = 0;
};

/// Fitted two-layer model. The first layer separates the pure-majority group
/// from the rest; the second separates classes inside the remainder. The
/// combined score is the product of the layer scores, so an instance ranks
/// high only when both layers agree.
struct IcllModel {
  std::unique_ptr<Classifier> f_l1;
  std::unique_ptr<Classifier> f_l2;
  GroupAssignment groups;
  DegeneracyKind degeneracy = DegeneracyKind::None;
  bool fallback = false;    // single-model fallback after failed remediation
  CutParameters cut;        // statistics of the initial automatic cut
  double tau_used = 0.0;    // final threshold after any remediation
  IcllConfig config;

  Eigen::VectorXd score(const Eigen::MatrixXd& features) const;
  Eigen::VectorXi predict_class(const Eigen::MatrixXd& features, double threshold = 0.5) const;

  nlohmann::json to_json() const;
  static IcllModel from_json(const nlohmann::json& j);
};

nlohmann::json icll_config_to_json(const IcllConfig& config);
IcllConfig icll_config_from_json(const nlohmann::json& j);

/// Cluster, assign groups, derive the two layer tasks, and fit both layer
/// classifiers. Degenerate cuts are remediated as documented on the
/// DegeneracyKind values; an unremediable empty pure-majority group falls
/// back to a single classifier on the original task.
IcllModel fit_icll(const Dataset& d, const IcllConfig& config);

}  // namespace icll
