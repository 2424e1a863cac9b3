#include "icll/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "icll/rng.hpp"

namespace icll {

namespace {

void check_training_input(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw std::invalid_argument("training data is empty");
  }
  if (x.rows() != y.size()) {
    throw std::invalid_argument("feature rows and target length differ");
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw std::invalid_argument("targets must be 0 or 1");
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// ConstantClassifier

void ConstantClassifier::fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) {
  check_training_input(x, y);
  value_ = y.cast<double>().mean();
}

Eigen::VectorXd ConstantClassifier::score(const Eigen::MatrixXd& x) const {
  return Eigen::VectorXd::Constant(x.rows(), value_);
}

nlohmann::json ConstantClassifier::to_json() const {
  return {{"kind", "constant"}, {"value", value_}};
}

// ---------------------------------------------------------------------------
// DecisionTreeClassifier

void DecisionTreeClassifier::fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) {
  check_training_input(x, y);
  const Eigen::Index p = x.cols();
  if (config_.max_features < 0 || config_.max_features > p) {
    throw std::invalid_argument("max_features out of range for this data");
  }
  if (config_.min_samples_split < 2) {
    throw std::invalid_argument("min_samples_split must be at least 2");
  }
  nodes_.clear();
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) rows[static_cast<std::size_t>(i)] = i;
  Rng rng(config_.seed);
  build(x, y, rows, 0, rng);
}

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double proxy = 0.0;
};

// Best split over the given features, judged by the children's summed
// (c0^2 + c1^2) / n. Maximizing that is equivalent to minimizing weighted
// Gini impurity but avoids the subtraction that makes ties float-unstable.
// Candidates run in ascending feature order and ascending threshold order
// with a strict comparison, so equal-proxy ties keep the earliest candidate.
SplitChoice best_split(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const std::vector<Eigen::Index>& rows,
                       const std::vector<int>& features) {
  SplitChoice best;
  const auto m = static_cast<double>(rows.size());
  std::vector<std::pair<double, int>> column(rows.size());
  for (int f : features) {
    double total_one = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      column[i] = {x(rows[i], f), y[rows[i]]};
      total_one += column[i].second;
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double left_one = 0.0;
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      left_one += column[i].second;
      const double v = column[i].first;
      const double v_next = column[i + 1].first;
      if (v == v_next) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = m - nl;
      const double left_zero = nl - left_one;
      const double right_one = total_one - left_one;
      const double right_zero = nr - right_one;
      const double proxy = (left_zero * left_zero + left_one * left_one) / nl +
                           (right_zero * right_zero + right_one * right_one) / nr;
      if (!best.found || proxy > best.proxy) {
        double t = v + (v_next - v) / 2.0;
        // Midpoints can round up to the right value when the two are
        // adjacent doubles; fall back to the left value so `<=` still
        // separates them.
        if (t >= v_next) t = v;
        best = {true, f, t, proxy};
      }
    }
  }
  return best;
}

}  // namespace

int DecisionTreeClassifier::build(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                                  std::vector<Eigen::Index>& rows, int depth, Rng& rng) {
  double ones = 0.0;
  for (Eigen::Index r : rows) ones += y[r];
  const double m = static_cast<double>(rows.size());

  Node node;
  node.value = ones / m;
  const bool pure = (ones == 0.0 || ones == m);
  const bool depth_capped = (config_.max_depth >= 0 && depth >= config_.max_depth);
  const bool too_small = (rows.size() < static_cast<std::size_t>(config_.min_samples_split));

  SplitChoice choice;
  if (!pure && !depth_capped && !too_small) {
    const int p = static_cast<int>(x.cols());
    if (config_.max_features > 0 && config_.max_features < p) {
      auto sampled = rng.sample_without_replacement(p, config_.max_features);
      std::vector<int> features(sampled.begin(), sampled.end());
      std::sort(features.begin(), features.end());
      choice = best_split(x, y, rows, features);
      if (!choice.found) {
        // The sampled features were all constant on this node; widen to the
        // full set rather than give up on a splittable node.
        std::vector<int> all(static_cast<std::size_t>(p));
        for (int f = 0; f < p; ++f) all[static_cast<std::size_t>(f)] = f;
        choice = best_split(x, y, rows, all);
      }
    } else {
      std::vector<int> all(static_cast<std::size_t>(p));
      for (int f = 0; f < p; ++f) all[static_cast<std::size_t>(f)] = f;
      choice = best_split(x, y, rows, all);
    }
  }

  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (!choice.found) return index;

  std::vector<Eigen::Index> left_rows;
  std::vector<Eigen::Index> right_rows;
  for (Eigen::Index r : rows) {
    (x(r, choice.feature) <= choice.threshold ? left_rows : right_rows).push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  nodes_[index].feature = choice.feature;
  nodes_[index].threshold = choice.threshold;
  const int left = build(x, y, left_rows, depth + 1, rng);
  nodes_[index].left = left;
  const int right = build(x, y, right_rows, depth + 1, rng);
  nodes_[index].right = right;
  return index;
}

double DecisionTreeClassifier::score_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  int at = 0;
  while (nodes_[static_cast<std::size_t>(at)].feature >= 0) {
    const Node& n = nodes_[static_cast<std::size_t>(at)];
    at = (row[n.feature] <= n.threshold) ? n.left : n.right;
  }
  return nodes_[static_cast<std::size_t>(at)].value;
}

Eigen::VectorXd DecisionTreeClassifier::score(const Eigen::MatrixXd& x) const {
  if (nodes_.empty()) throw std::runtime_error("tree is not fitted");
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = score_row(x.row(i));
  return out;
}

nlohmann::json DecisionTreeClassifier::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : nodes_) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"value", n.value}});
  }
  return {{"kind", "tree"}, {"nodes", nodes}};
}

DecisionTreeClassifier DecisionTreeClassifier::from_json(const nlohmann::json& j) {
  DecisionTreeClassifier tree;
  for (const auto& n : j.at("nodes")) {
    Node node;
    node.feature = n.at("feature").get<int>();
    node.threshold = n.at("threshold").get<double>();
    node.left = n.at("left").get<int>();
    node.right = n.at("right").get<int>();
    node.value = n.at("value").get<double>();
    tree.nodes_.push_back(node);
  }
  return tree;
}

// ---------------------------------------------------------------------------
// RandomForestClassifier

void RandomForestClassifier::fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) {
  check_training_input(x, y);
  if (config_.n_trees < 1) throw std::invalid_argument("n_trees must be positive");
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();

  int max_features = config_.max_features;
  if (max_features < 0) {
    max_features = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(p))));
  }
  if (max_features > p) {
    throw std::invalid_argument("max_features exceeds the feature count");
  }

  std::vector<Eigen::Index> minority_rows;
  std::vector<Eigen::Index> majority_rows;
  if (balanced_) {
    Eigen::Index ones = 0;
    for (Eigen::Index i = 0; i < n; ++i) ones += y[i];
    const int rare = (ones * 2 <= n) ? 1 : 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      (y[i] == rare ? minority_rows : majority_rows).push_back(i);
    }
    if (minority_rows.empty() || majority_rows.empty()) {
      throw std::invalid_argument("balanced forest needs both classes present");
    }
  }

  trees_.clear();
  trees_.reserve(static_cast<std::size_t>(config_.n_trees));
  for (int t = 0; t < config_.n_trees; ++t) {
    Rng draw(derive_seed(config_.seed, 0x626f6f74ULL, (std::uint64_t)t));
    std::vector<Eigen::Index> picked;
    if (balanced_) {
      const std::size_t k = minority_rows.size();
      picked.reserve(2 * k);
      for (std::size_t i = 0; i < k; ++i) {
        picked.push_back(minority_rows[draw.below(minority_rows.size())]);
      }
      for (std::size_t i = 0; i < k; ++i) {
        picked.push_back(majority_rows[draw.below(majority_rows.size())]);
      }
    } else if (config_.bootstrap) {
      picked.reserve(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        picked.push_back(static_cast<Eigen::Index>(draw.below((std::uint64_t)n)));
      }
    } else {
      picked.resize(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) picked[static_cast<std::size_t>(i)] = i;
    }

    Eigen::MatrixXd xb(static_cast<Eigen::Index>(picked.size()), p);
    Eigen::VectorXi yb(static_cast<Eigen::Index>(picked.size()));
    for (std::size_t i = 0; i < picked.size(); ++i) {
      xb.row(static_cast<Eigen::Index>(i)) = x.row(picked[i]);
      yb[static_cast<Eigen::Index>(i)] = y[picked[i]];
    }

    TreeConfig tc;
    tc.max_depth = config_.max_depth;
    tc.min_samples_split = config_.min_samples_split;
    tc.max_features = max_features;
    tc.seed = derive_seed(config_.seed, 0x74726565ULL, (std::uint64_t)t);
    trees_.emplace_back(tc);
    trees_.back().fit(xb, yb);
  }
}

Eigen::VectorXd RandomForestClassifier::score(const Eigen::MatrixXd& x) const {
  if (trees_.empty()) throw std::runtime_error("forest is not fitted");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(x.rows());
  for (const auto& tree : trees_) total += tree.score(x);
  return total / static_cast<double>(trees_.size());
}

nlohmann::json RandomForestClassifier::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) trees.push_back(tree.to_json());
  return {{"kind", "forest"}, {"balanced", balanced_}, {"trees", trees}};
}

RandomForestClassifier RandomForestClassifier::from_json(const nlohmann::json& j) {
  RandomForestClassifier forest;
  forest.balanced_ = j.at("balanced").get<bool>();
  for (const auto& t : j.at("trees")) {
    forest.trees_.push_back(DecisionTreeClassifier::from_json(t));
  }
  return forest;
}

// ---------------------------------------------------------------------------
// LogisticRegressionClassifier

double logistic_loss(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                     const Eigen::VectorXd& w, double b, double l2) {
  const double n = static_cast<double>(x.rows());
  const Eigen::VectorXd z = x * w + Eigen::VectorXd::Constant(x.rows(), b);
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // log(1 + exp(z)) - y*z, written to stay finite for large |z|.
    total += std::max(z[i], 0.0) + std::log1p(std::exp(-std::abs(z[i]))) - y[i] * z[i];
  }
  return (total + 0.5 * l2 * w.squaredNorm()) / n;
}

void logistic_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const Eigen::VectorXd& w, double b, double l2,
                       Eigen::VectorXd& grad_w, double& grad_b) {
  const double n = static_cast<double>(x.rows());
  Eigen::VectorXd residual(x.rows());
  const Eigen::VectorXd z = x * w + Eigen::VectorXd::Constant(x.rows(), b);
  for (Eigen::Index i = 0; i < z.size(); ++i) residual[i] = sigmoid(z[i]) - y[i];
  grad_w = (x.transpose() * residual + l2 * w) / n;
  grad_b = residual.sum() / n;
}

void LogisticRegressionClassifier::fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) {
  check_training_input(x, y);
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();

  const double positive = y.cast<double>().sum();
  if (positive == 0.0 || positive == static_cast<double>(n)) {
    constant_ = true;
    constant_value_ = positive == 0.0 ? 0.0 : 1.0;
    weights_ = Eigen::VectorXd::Zero(p);
    intercept_ = 0.0;
    mean_ = Eigen::VectorXd::Zero(p);
    scale_ = Eigen::VectorXd::Ones(p);
    return;
  }
  constant_ = false;

  mean_ = x.colwise().mean();
  scale_.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var = (x.col(j).array() - mean_[j]).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    scale_[j] = sd > 0.0 ? sd : 1.0;
  }
  Eigen::MatrixXd z = (x.rowwise() - mean_.transpose()).array().rowwise() /
                      scale_.transpose().array();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double b = 0.0;
  double loss = logistic_loss(z, y, w, b, config_.l2);
  double step = 1.0;
  Eigen::VectorXd grad_w(p);
  double grad_b = 0.0;

  for (int iter = 0; iter < config_.max_iter; ++iter) {
    logistic_gradient(z, y, w, b, config_.l2, grad_w, grad_b);
    const double grad_sq = grad_w.squaredNorm() + grad_b * grad_b;
    if (std::sqrt(grad_sq) <= config_.tol) break;

    step = std::min(step * 2.0, 1e6);
    Eigen::VectorXd w_next;
    double b_next = 0.0;
    double loss_next = 0.0;
    while (true) {
      w_next = w - step * grad_w;
      b_next = b - step * grad_b;
      loss_next = logistic_loss(z, y, w_next, b_next, config_.l2);
      if (loss_next <= loss - 0.5 * step * grad_sq || step < 1e-12) break;
      step /= 2.0;
    }
    if (loss_next >= loss && step < 1e-12) break;
    w = std::move(w_next);
    b = b_next;
    loss = loss_next;
  }

  weights_ = std::move(w);
  intercept_ = b;
}

Eigen::VectorXd LogisticRegressionClassifier::score(const Eigen::MatrixXd& x) const {
  if (constant_) return Eigen::VectorXd::Constant(x.rows(), constant_value_);
  if (weights_.size() == 0) throw std::runtime_error("logistic model is not fitted");
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double z = intercept_;
    for (Eigen::Index j = 0; j < weights_.size(); ++j) {
      z += weights_[j] * (x(i, j) - mean_[j]) / scale_[j];
    }
    out[i] = sigmoid(z);
  }
  return out;
}

nlohmann::json LogisticRegressionClassifier::to_json() const {
  return {{"kind", "logistic"},
          {"constant", constant_},
          {"constant_value", constant_value_},
          {"weights", std::vector<double>(weights_.begin(), weights_.end())},
          {"intercept", intercept_},
          {"mean", std::vector<double>(mean_.begin(), mean_.end())},
          {"scale", std::vector<double>(scale_.begin(), scale_.end())}};
}

LogisticRegressionClassifier LogisticRegressionClassifier::from_json(const nlohmann::json& j) {
  LogisticRegressionClassifier model;
  model.constant_ = j.at("constant").get<bool>();
  model.constant_value_ = j.at("constant_value").get<double>();
  const auto w = j.at("weights").get<std::vector<double>>();
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto scale = j.at("scale").get<std::vector<double>>();
  model.weights_ = Eigen::Map<const Eigen::VectorXd>(w.data(), (Eigen::Index)w.size());
  model.intercept_ = j.at("intercept").get<double>();
  model.mean_ = Eigen::Map<const Eigen::VectorXd>(mean.data(), (Eigen::Index)mean.size());
  model.scale_ = Eigen::Map<const Eigen::VectorXd>(scale.data(), (Eigen::Index)scale.size());
  return model;
}

// ---------------------------------------------------------------------------
// Factories

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    return std::make_unique<ConstantClassifier>(j.at("value").get<double>());
  }
  if (kind == "tree") {
    return std::make_unique<DecisionTreeClassifier>(DecisionTreeClassifier::from_json(j));
  }
  if (kind == "forest") {
    return std::make_unique<RandomForestClassifier>(RandomForestClassifier::from_json(j));
  }
  if (kind == "logistic") {
    return std::make_unique<LogisticRegressionClassifier>(
        LogisticRegressionClassifier::from_json(j));
  }
  throw std::runtime_error("unknown classifier kind: " + kind);
}

LearnerSpec::Kind learner_kind_from_string(const std::string& name) {
  if (name == "tree") return LearnerSpec::Kind::Tree;
  if (name == "forest") return LearnerSpec::Kind::Forest;
  if (name == "balanced-forest") return LearnerSpec::Kind::BalancedForest;
  if (name == "logistic") return LearnerSpec::Kind::Logistic;
  throw std::invalid_argument("unknown learner: " + name);
}

std::string to_string(LearnerSpec::Kind kind) {
  switch (kind) {
    case LearnerSpec::Kind::Tree: return "tree";
    case LearnerSpec::Kind::Forest: return "forest";
    case LearnerSpec::Kind::BalancedForest: return "balanced-forest";
    case LearnerSpec::Kind::Logistic: return "logistic";
  }
  throw std::logic_error("unreachable");
}

std::unique_ptr<Classifier> fit_learner(const LearnerSpec& spec, const Eigen::MatrixXd& x,
                                        const Eigen::VectorXi& y, std::uint64_t seed) {
  // Any learner asked to fit a one-class target degenerates to the constant
  // scorer at that class's value; composite models rely on this.
  bool all_same = true;
  for (Eigen::Index i = 1; i < y.size(); ++i) {
    if (y[i] != y[0]) {
      all_same = false;
      break;
    }
  }
  if (y.size() > 0 && all_same) {
    return std::make_unique<ConstantClassifier>(static_cast<double>(y[0]));
  }

  std::unique_ptr<Classifier> model;
  switch (spec.kind) {
    case LearnerSpec::Kind::Tree: {
      TreeConfig config = spec.tree;
      config.seed = seed;
      model = std::make_unique<DecisionTreeClassifier>(config);
      break;
    }
    case LearnerSpec::Kind::Forest: {
      ForestConfig config = spec.forest;
      config.seed = seed;
      model = std::make_unique<RandomForestClassifier>(config, false);
      break;
    }
    case LearnerSpec::Kind::BalancedForest: {
      ForestConfig config = spec.forest;
      config.seed = seed;
      model = std::make_unique<RandomForestClassifier>(config, true);
      break;
    }
    case LearnerSpec::Kind::Logistic: {
      model = std::make_unique<LogisticRegressionClassifier>(spec.logistic);
      break;
    }
  }
  model->fit(x, y);
  return model;
}

}  // namespace icll
