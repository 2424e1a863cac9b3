#include "icll/icll.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "icll/distance.hpp"
#include "icll/rng.hpp"

namespace icll {

namespace {

bool smote_on_l1(IcllVariant v) {
  return v == IcllVariant::ICLL_SMOTE || v == IcllVariant::ICLL_SMOTE_L1;
}

bool smote_on_l2(IcllVariant v) {
  return v == IcllVariant::ICLL_SMOTE || v == IcllVariant::ICLL_SMOTE_L2;
}

/// Bring a layer task to class parity with SMOTE, synthesizing whichever of
/// its classes is rarer. Tasks that are already balanced, single-class, or
/// whose rarer class has a lone instance are returned unchanged.
void balance_layer(Eigen::MatrixXd& x, Eigen::VectorXi& y, const ResamplePlan& plan) {
  Eigen::Index ones = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) ones += y[i];
  const Eigen::Index zeros = y.size() - ones;
  if (ones == zeros || ones == 0 || zeros == 0) return;

  const bool flip = ones > zeros;  // smote synthesizes label 1
  if (std::min(ones, zeros) < 2) return;

  Eigen::VectorXi target = flip ? (1 - y.array()).matrix() : y;
  ResampledData rd = smote(x, target, plan);
  x = std::move(rd.x);
  y = flip ? (1 - rd.y.array()).matrix() : rd.y;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  }
  return out;
}

double min_log_height(const LinkageTree& tree) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const Merge& m : tree.merges) {
    if (m.height > 0.0) lowest = std::min(lowest, std::log(m.height));
  }
  return lowest;
}

Group group_from_string(const std::string& s) {
  if (s == "pure_majority") return Group::PureMajority;
  if (s == "pure_minority") return Group::PureMinority;
  if (s == "mixed") return Group::Mixed;
  throw std::runtime_error("unknown group name: " + s);
}

DegeneracyKind degeneracy_from_string(const std::string& s) {
  if (s == "none") return DegeneracyKind::None;
  if (s == "empty_pure_minority") return DegeneracyKind::EmptyCmin;
  if (s == "empty_mixed") return DegeneracyKind::EmptyCmix;
  if (s == "empty_pure_majority") return DegeneracyKind::EmptyCmaj;
  throw std::runtime_error("unknown degeneracy name: " + s);
}

}  // namespace

std::string to_string(IcllVariant v) {
  switch (v) {
    case IcllVariant::ICLL: return "ICLL";
    case IcllVariant::ICLL_SMOTE: return "ICLL+SMOTE";
    case IcllVariant::ICLL_SMOTE_L1: return "ICLL+SMOTE(L1)";
    case IcllVariant::ICLL_SMOTE_L2: return "ICLL+SMOTE(L2)";
    case IcllVariant::ICLL_L1_ONLY: return "ICLL(L1)";
    case IcllVariant::ICLL_L2_ONLY: return "ICLL(L2)";
  }
  throw std::logic_error("unreachable");
}

IcllVariant icll_variant_from_string(const std::string& name) {
  if (name == "ICLL") return IcllVariant::ICLL;
  if (name == "ICLL+SMOTE") return IcllVariant::ICLL_SMOTE;
  if (name == "ICLL+SMOTE(L1)") return IcllVariant::ICLL_SMOTE_L1;
  if (name == "ICLL+SMOTE(L2)") return IcllVariant::ICLL_SMOTE_L2;
  if (name == "ICLL(L1)") return IcllVariant::ICLL_L1_ONLY;
  if (name == "ICLL(L2)") return IcllVariant::ICLL_L2_ONLY;
  throw std::invalid_argument("unknown variant: " + name);
}

IcllModel fit_icll(const Dataset& d, const IcllConfig& config) {
  summarize(d);  // validates both classes are present

  const DistanceMatrix dist = pairwise_euclidean(d.features);
  const LinkageTree tree = ward_linkage(dist);
  const CutParameters params = cut_parameters(tree);

  double tau = params.tau;
  FlatClustering clustering = form_clusters(tree, tau);
  GroupAssignment groups = assign_groups(d, clustering);

  bool fallback = false;
  if (classify_degenerate(groups) == DegeneracyKind::EmptyCmaj) {
    // No pure-majority cluster at the automatic cut. Lower the threshold in
    // half-sigma steps, which splits clusters into purer pieces, until a
    // pure-majority cluster appears or the cut drops below every positive
    // merge height.
    const double floor_log = min_log_height(tree);
    bool fixed = false;
    double t = tau;
    while (true) {
      t = params.sigma > 0.0 ? t - params.sigma / 2.0 : floor_log - 1.0;
      clustering = form_clusters(tree, t);
      groups = assign_groups(d, clustering);
      if (groups.n_pure_majority > 0) {
        fixed = true;
        tau = t;
        break;
      }
      if (t < floor_log) break;
    }
    if (!fixed) {
      fallback = true;
      tau = t;
    }
  }

  IcllModel model;
  model.groups = std::move(groups);
  model.degeneracy =
      fallback ? DegeneracyKind::EmptyCmaj : classify_degenerate(model.groups);
  model.fallback = fallback;
  model.cut = params;
  model.tau_used = tau;
  model.config = config;

  if (fallback) {
    // Identical instances carrying both labels in every cluster: layering has
    // nothing to separate, so train one classifier on the original task and
    // neutralize the second layer.
    model.f_l1 = fit_learner(config.base_learner, d.features, d.labels,
                             derive_seed_str(config.seed, "icll.layer1"));
    model.f_l2 = std::make_unique<ConstantClassifier>(1.0);
    return model;
  }

  const Layer1Task l1 = derive_layer1_targets(model.groups);
  const Layer2Task l2 = derive_layer2_targets(d, model.groups);

  Eigen::MatrixXd x1 = d.features;
  Eigen::VectorXi y1 = l1.y;
  if (smote_on_l1(config.variant)) {
    ResamplePlan plan = config.smote_plan;
    plan.seed = derive_seed_str(config.seed, "icll.smote.l1");
    balance_layer(x1, y1, plan);
  }

  Eigen::MatrixXd x2 = gather_rows(d.features, l2.rows);
  Eigen::VectorXi y2 = l2.y;
  if (smote_on_l2(config.variant)) {
    ResamplePlan plan = config.smote_plan;
    plan.seed = derive_seed_str(config.seed, "icll.smote.l2");
    balance_layer(x2, y2, plan);
  }

  model.f_l1 = fit_learner(config.base_learner, x1, y1,
                           derive_seed_str(config.seed, "icll.layer1"));
  model.f_l2 = fit_learner(config.base_learner, x2, y2,
                           derive_seed_str(config.seed, "icll.layer2"));
  return model;
}

Eigen::VectorXd IcllModel::score(const Eigen::MatrixXd& features) const {
  if (!f_l1 || !f_l2) throw std::runtime_error("model is not fitted");
  if (fallback) return f_l1->score(features);
  switch (config.variant) {
    case IcllVariant::ICLL_L1_ONLY:
      return f_l1->score(features);
    case IcllVariant::ICLL_L2_ONLY:
      return f_l2->score(features);
    default:
      return f_l1->score(features).cwiseProduct(f_l2->score(features));
  }
}

Eigen::VectorXi IcllModel::predict_class(const Eigen::MatrixXd& features,
                                         double threshold) const {
  const Eigen::VectorXd g = score(features);
  Eigen::VectorXi out(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) out[i] = g[i] >= threshold ? 1 : 0;
  return out;
}

nlohmann::json icll_config_to_json(const IcllConfig& config) {
  return {{"variant", to_string(config.variant)},
          {"learner",
           {{"kind", to_string(config.base_learner.kind)},
            {"tree",
             {{"max_depth", config.base_learner.tree.max_depth},
              {"min_samples_split", config.base_learner.tree.min_samples_split},
              {"max_features", config.base_learner.tree.max_features}}},
            {"forest",
             {{"n_trees", config.base_learner.forest.n_trees},
              {"max_features", config.base_learner.forest.max_features},
              {"min_samples_split", config.base_learner.forest.min_samples_split},
              {"max_depth", config.base_learner.forest.max_depth},
              {"bootstrap", config.base_learner.forest.bootstrap}}},
            {"logistic",
             {{"l2", config.base_learner.logistic.l2},
              {"max_iter", config.base_learner.logistic.max_iter},
              {"tol", config.base_learner.logistic.tol}}}}},
          {"smote", {{"k_neighbors", config.smote_plan.k_neighbors},
                     {"target_ratio", config.smote_plan.target_ratio}}},
          {"seed", config.seed}};
}

IcllConfig icll_config_from_json(const nlohmann::json& j) {
  IcllConfig config;
  config.variant = icll_variant_from_string(j.at("variant").get<std::string>());
  const auto& learner = j.at("learner");
  config.base_learner.kind = learner_kind_from_string(learner.at("kind").get<std::string>());
  const auto& tree = learner.at("tree");
  config.base_learner.tree.max_depth = tree.at("max_depth").get<int>();
  config.base_learner.tree.min_samples_split = tree.at("min_samples_split").get<int>();
  config.base_learner.tree.max_features = tree.at("max_features").get<int>();
  const auto& forest = learner.at("forest");
  config.base_learner.forest.n_trees = forest.at("n_trees").get<int>();
  config.base_learner.forest.max_features = forest.at("max_features").get<int>();
  config.base_learner.forest.min_samples_split = forest.at("min_samples_split").get<int>();
  config.base_learner.forest.max_depth = forest.at("max_depth").get<int>();
  config.base_learner.forest.bootstrap = forest.at("bootstrap").get<bool>();
  const auto& logistic = learner.at("logistic");
  config.base_learner.logistic.l2 = logistic.at("l2").get<double>();
  config.base_learner.logistic.max_iter = logistic.at("max_iter").get<int>();
  config.base_learner.logistic.tol = logistic.at("tol").get<double>();
  config.smote_plan.method = ResampleMethod::SMOTE;
  config.smote_plan.k_neighbors = j.at("smote").at("k_neighbors").get<int>();
  config.smote_plan.target_ratio = j.at("smote").at("target_ratio").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

nlohmann::json IcllModel::to_json() const {
  nlohmann::json cluster = nlohmann::json::array();
  nlohmann::json group = nlohmann::json::array();
  for (Eigen::Index i = 0; i < groups.cluster_of.size(); ++i) {
    cluster.push_back(groups.cluster_of[i]);
    group.push_back(icll::to_string(groups.group_of[static_cast<std::size_t>(i)]));
  }
  return {{"config", icll_config_to_json(config)},
          {"degeneracy", icll::to_string(degeneracy)},
          {"fallback", fallback},
          {"cut", {{"mu", cut.mu}, {"sigma", cut.sigma}, {"tau", cut.tau}}},
          {"tau_used", tau_used},
          {"groups", {{"cluster", cluster}, {"group", group}}},
          {"f_l1", f_l1->to_json()},
          {"f_l2", f_l2->to_json()}};
}

IcllModel IcllModel::from_json(const nlohmann::json& j) {
  IcllModel model;
  model.config = icll_config_from_json(j.at("config"));
  model.degeneracy = degeneracy_from_string(j.at("degeneracy").get<std::string>());
  model.fallback = j.at("fallback").get<bool>();
  model.cut.mu = j.at("cut").at("mu").get<double>();
  model.cut.sigma = j.at("cut").at("sigma").get<double>();
  model.cut.tau = j.at("cut").at("tau").get<double>();
  model.tau_used = j.at("tau_used").get<double>();

  const auto& cluster = j.at("groups").at("cluster");
  const auto& group = j.at("groups").at("group");
  model.groups.cluster_of.resize(static_cast<Eigen::Index>(cluster.size()));
  model.groups.group_of.resize(group.size());
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    model.groups.cluster_of[static_cast<Eigen::Index>(i)] = cluster[i].get<int>();
    model.groups.group_of[i] = group_from_string(group[i].get<std::string>());
    switch (model.groups.group_of[i]) {
      case Group::PureMajority: ++model.groups.n_pure_majority; break;
      case Group::PureMinority: ++model.groups.n_pure_minority; break;
      case Group::Mixed: ++model.groups.n_mixed; break;
    }
  }

  model.f_l1 = classifier_from_json(j.at("f_l1"));
  model.f_l2 = classifier_from_json(j.at("f_l2"));
  return model;
}

}  // namespace icll
