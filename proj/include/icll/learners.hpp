#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace icll {

/// Probabilistic binary classifier: score(x) is P(class = 1) per row, always
/// in [0, 1]. Fitting on a single-class target yields the constant scorer at
/// that class's value. Fitted instances are immutable and safe to score from
/// concurrent threads.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) = 0;
  virtual Eigen::VectorXd score(const Eigen::MatrixXd& x) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

/// Rebuild any classifier previously emitted by to_json().
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j);

struct TreeConfig {
  int max_depth = -1;          // -1: unbounded
  int min_samples_split = 2;
  int max_features = 0;        // 0: consider all features at every node
  std::uint64_t seed = 0;      // feature subsampling only
};

struct ForestConfig {
  int n_trees = 100;
  int max_features = -1;       // -1: floor(sqrt(p)), at least 1
  int min_samples_split = 2;
  int max_depth = -1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct LogisticConfig {
  double l2 = 1.0;
  int max_iter = 1000;
  double tol = 1e-6;
};

/// Fixed-output scorer, also what degenerate single-class fits collapse to.
class ConstantClassifier final : public Classifier {
 public:
  ConstantClassifier() = default;
  explicit ConstantClassifier(double value) : value_(value) {}
  void fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) override;
  Eigen::VectorXd score(const Eigen::MatrixXd& x) const override;
  nlohmann::json to_json() const override;
  double value() const { return value_; }

 private:
  double value_ = 0.5;
};

/// CART-style binary tree: Gini impurity, axis-aligned thresholds at
/// midpoints of consecutive distinct values, leaf score = fraction of
/// class-1 training rows. Equal-quality splits break toward the lowest
/// feature index, then the lowest threshold.
class DecisionTreeClassifier final : public Classifier {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  DecisionTreeClassifier() = default;
  explicit DecisionTreeClassifier(TreeConfig config) : config_(config) {}

  void fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) override;
  Eigen::VectorXd score(const Eigen::MatrixXd& x) const override;
  nlohmann::json to_json() const override;

  double score_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  static DecisionTreeClassifier from_json(const nlohmann::json& j);

 private:
  int build(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
            std::vector<Eigen::Index>& rows, int depth, class Rng& rng);

  TreeConfig config_;
  std::vector<Node> nodes_;
};

/// Bagged CART ensemble; score is the mean of the per-tree scores. In
/// balanced mode every tree sees a bootstrap of the rarer class plus an
/// equal-size draw from the other class. Per-tree seeds derive from
/// (seed, tree index), so results do not depend on training order.
class RandomForestClassifier final : public Classifier {
 public:
  RandomForestClassifier() = default;
  explicit RandomForestClassifier(ForestConfig config, bool balanced = false)
      : config_(config), balanced_(balanced) {}

  void fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) override;
  Eigen::VectorXd score(const Eigen::MatrixXd& x) const override;
  nlohmann::json to_json() const override;

  const std::vector<DecisionTreeClassifier>& trees() const { return trees_; }
  static RandomForestClassifier from_json(const nlohmann::json& j);

 private:
  ForestConfig config_;
  bool balanced_ = false;
  std::vector<DecisionTreeClassifier> trees_;
};

/// L2-regularized logistic regression fit by gradient descent with
/// backtracking line search; features are standardized internally.
class LogisticRegressionClassifier final : public Classifier {
 public:
  LogisticRegressionClassifier() = default;
  explicit LogisticRegressionClassifier(LogisticConfig config) : config_(config) {}

  void fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y) override;
  Eigen::VectorXd score(const Eigen::MatrixXd& x) const override;
  nlohmann::json to_json() const override;

  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  static LogisticRegressionClassifier from_json(const nlohmann::json& j);

 private:
  LogisticConfig config_;
  Eigen::VectorXd weights_;
  double intercept_ = 0.0;
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
  bool constant_ = false;
  double constant_value_ = 0.5;
};

/// Mean regularized log-loss over (x, y): the objective minimized by
/// LogisticRegressionClassifier on standardized features. Exposed so the
/// gradient can be checked against finite differences of the same scalar.
double logistic_loss(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                     const Eigen::VectorXd& w, double b, double l2);

void logistic_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const Eigen::VectorXd& w, double b, double l2,
                       Eigen::VectorXd& grad_w, double& grad_b);

/// Learner selection for composite models and the CLI.
struct LearnerSpec {
  enum class Kind { Tree, Forest, BalancedForest, Logistic };
  Kind kind = Kind::Forest;
  TreeConfig tree;
  ForestConfig forest;
  LogisticConfig logistic;
};

LearnerSpec::Kind learner_kind_from_string(const std::string& name);
std::string to_string(LearnerSpec::Kind kind);

/// Construct and fit the learner named by spec; seed overrides the config
/// seed for tree/forest kinds.
std::unique_ptr<Classifier> fit_learner(const LearnerSpec& spec, const Eigen::MatrixXd& x,
                                        const Eigen::VectorXi& y, std::uint64_t seed);

}  // namespace icll
