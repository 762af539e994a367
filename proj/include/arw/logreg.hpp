#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace arw {

struct LogRegOptions {
  std::vector<double> lambda_grid{1e-3, 1e-2, 0.1, 1.0, 10.0};
  std::size_t folds = 10;
  double label_fraction = 0.1;  // share of the training data used to pick lambda
  std::uint64_t seed = 1;
  double tolerance = 1e-6;  // stop once the gradient norm falls below this
  std::size_t max_iterations = 5000;
};

/// L2-regularized logistic regression on standardized features.
struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;
  double lambda = 0.0;
  std::vector<double> cv_auc;  // mean validation AUC per grid entry
  std::size_t iterations = 0;
  double gradient_norm = 0.0;

  /// P(y = 1 | x) for each row.
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

/// Training set with identical rows merged: row r stands for positives[r]
/// examples with label 1 and negatives[r] with label 0.
struct WeightedRows {
  Eigen::MatrixXd X;
  Eigen::VectorXd positives;
  Eigen::VectorXd negatives;
  double total = 0.0;
};

WeightedRows merge_rows(const Eigen::MatrixXd& X, std::span<const int> labels);

/// Mean log-loss plus (lambda / 2) ||w||^2; the bias is not penalized.
/// theta = [w; b]. When `gradient` is non-null it receives d/d theta.
double logistic_objective(const WeightedRows& data, const Eigen::VectorXd& theta, double lambda,
                          Eigen::VectorXd* gradient = nullptr);

/// Fits with a fixed lambda by full-batch gradient descent (Barzilai-Borwein
/// step with Armijo backtracking).
LogisticModel fit_logreg(const Eigen::MatrixXd& X, std::span<const int> labels, double lambda,
                         const LogRegOptions& options = {});

/// Picks lambda from the grid by stratified k-fold cross-validation on a
/// stratified label_fraction subsample (mean AUC, first best wins), then
/// fits on all rows.
LogisticModel train_logreg(const Eigen::MatrixXd& X, std::span<const int> labels,
                           const LogRegOptions& options = {});

/// Mean validation AUC of a fixed lambda over stratified folds.
double cross_validated_auc(const Eigen::MatrixXd& X, std::span<const int> labels, double lambda,
                           std::size_t folds, std::uint64_t seed,
                           const LogRegOptions& options = {});

/// Rank (Mann-Whitney) AUC; tied scores count one half. Labels are 0/1.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Two-sided exact sign test p-value for paired samples. Ties are dropped;
/// returns 1 when every pair ties.
double sign_test(std::span<const double> a, std::span<const double> b);

}  // namespace arw
