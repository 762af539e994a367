#include "arw/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <unordered_map>

#include "arw/error.hpp"
#include "arw/random.hpp"
#include "arw/skipgram.hpp"

namespace arw {

namespace {

void check_labels(const Eigen::MatrixXd& X, std::span<const int> labels) {
  if (static_cast<std::size_t>(X.rows()) != labels.size())
    throw InvalidArgument("feature rows and labels differ in length");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
    (y ? pos : neg) = true;
  }
  if (!pos || !neg) throw InvalidArgument("logistic regression needs both classes");
}

// log(1 + e^s)
double softplus(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

std::vector<std::size_t> shuffled(std::vector<std::size_t> v, SplitMix64& rng) {
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, std::span<const std::size_t> idx) {
  Eigen::MatrixXd out(idx.size(), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = X.row(idx[i]);
  return out;
}

}  // namespace

Eigen::VectorXd LogisticModel::predict(const Eigen::MatrixXd& X) const {
  if (X.cols() != weights.size()) throw InvalidArgument("feature width does not match model");
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double s = ((X.row(i) - mean).cwiseQuotient(scale)).dot(weights.transpose()) + bias;
    out[i] = sigmoid(s);
  }
  return out;
}

WeightedRows merge_rows(const Eigen::MatrixXd& X, std::span<const int> labels) {
  const std::size_t cols = X.cols();
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<std::size_t> first;
  std::vector<double> pos, neg;
  std::string key(cols * sizeof(double), '\0');
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (std::size_t c = 0; c < cols; ++c) {
      double v = X(i, c);
      if (v == 0.0) v = 0.0;  // fold -0 into 0
      std::memcpy(key.data() + c * sizeof(double), &v, sizeof(double));
    }
    auto [it, inserted] = seen.try_emplace(key, first.size());
    if (inserted) {
      first.push_back(i);
      pos.push_back(0);
      neg.push_back(0);
    }
    (labels[i] ? pos : neg)[it->second] += 1.0;
  }
  WeightedRows out;
  out.X = take_rows(X, first);
  out.positives = Eigen::Map<Eigen::VectorXd>(pos.data(), pos.size());
  out.negatives = Eigen::Map<Eigen::VectorXd>(neg.data(), neg.size());
  out.total = static_cast<double>(X.rows());
  return out;
}

double logistic_objective(const WeightedRows& data, const Eigen::VectorXd& theta, double lambda,
                          Eigen::VectorXd* gradient) {
  const Eigen::Index d = data.X.cols();
  const auto w = theta.head(d);
  const double b = theta[d];
  const Eigen::VectorXd s = (data.X * w).array() + b;
  double loss = 0.0;
  Eigen::VectorXd coef(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double a = data.positives[i], c = data.negatives[i];
    loss += a * softplus(-s[i]) + c * softplus(s[i]);
    coef[i] = (a + c) * sigmoid(s[i]) - a;
  }
  loss /= data.total;
  loss += 0.5 * lambda * w.squaredNorm();
  if (gradient) {
    gradient->resize(d + 1);
    gradient->head(d) = data.X.transpose() * coef / data.total + lambda * w;
    (*gradient)[d] = coef.sum() / data.total;
  }
  return loss;
}

LogisticModel fit_logreg(const Eigen::MatrixXd& X, std::span<const int> labels, double lambda,
                         const LogRegOptions& options) {
  check_labels(X, labels);
  if (!(lambda >= 0.0)) throw InvalidArgument("L2 strength must be >= 0");
  LogisticModel model;
  model.lambda = lambda;
  model.mean = X.colwise().mean();
  model.scale = ((X.rowwise() - model.mean).array().square().colwise().mean()).sqrt();
  for (Eigen::Index c = 0; c < model.scale.size(); ++c)
    if (!(model.scale[c] > 1e-12)) model.scale[c] = 1.0;
  const Eigen::MatrixXd Z = (X.rowwise() - model.mean).array().rowwise() / model.scale.array();
  const WeightedRows data = merge_rows(Z, labels);

  const Eigen::Index d = X.cols();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd grad, next_grad;
  double f = logistic_objective(data, theta, lambda, &grad);
  double step = 1.0;
  std::size_t it = 0;
  for (; it < options.max_iterations && grad.norm() >= options.tolerance; ++it) {
    const double g2 = grad.squaredNorm();
    double t = step;
    Eigen::VectorXd next;
    double next_f = f;
    for (int k = 0; k < 60; ++k) {
      next = theta - t * grad;
      next_f = logistic_objective(data, next, lambda, &next_grad);
      if (next_f <= f - 1e-4 * t * g2) break;
      t *= 0.5;
    }
    const Eigen::VectorXd s = next - theta;
    const Eigen::VectorXd y = next_grad - grad;
    const double sy = s.dot(y);
    step = sy > 0 ? s.squaredNorm() / sy : 1.0;
    if (next_f > f) break;  // no descent left at machine precision
    theta = std::move(next);
    grad = next_grad;
    f = next_f;
  }
  model.weights = theta.head(d);
  model.bias = theta[d];
  model.iterations = it;
  model.gradient_norm = grad.norm();
  return model;
}

namespace {

// Stratified fold id per row; rows of each class are shuffled then dealt
// round-robin.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds,
                                          SplitMix64& rng) {
  std::vector<std::size_t> fold(labels.size());
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    idx = shuffled(std::move(idx), rng);
    for (std::size_t k = 0; k < idx.size(); ++k) fold[idx[k]] = k % folds;
  }
  return fold;
}

std::size_t minority_count(std::span<const int> labels) {
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  return std::min(pos, labels.size() - pos);
}

}  // namespace

double cross_validated_auc(const Eigen::MatrixXd& X, std::span<const int> labels, double lambda,
                           std::size_t folds, std::uint64_t seed, const LogRegOptions& options) {
  check_labels(X, labels);
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (minority_count(labels) < folds)
    throw InvalidArgument("fewer examples of a class than folds");
  SplitMix64 rng(derive_seed(seed, 0xf01d));
  const auto fold = stratified_folds(labels, folds, rng);
  double total = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < labels.size(); ++i) (fold[i] == f ? test : train).push_back(i);
    std::vector<int> ytrain, ytest;
    for (auto i : train) ytrain.push_back(labels[i]);
    for (auto i : test) ytest.push_back(labels[i]);
    const auto model = fit_logreg(take_rows(X, train), ytrain, lambda, options);
    const Eigen::VectorXd scores = model.predict(take_rows(X, test));
    total += auc(std::span<const double>(scores.data(), scores.size()), ytest);
  }
  return total / static_cast<double>(folds);
}

LogisticModel train_logreg(const Eigen::MatrixXd& X, std::span<const int> labels,
                           const LogRegOptions& options) {
  check_labels(X, labels);
  if (options.lambda_grid.empty()) throw InvalidArgument("empty L2 grid");
  if (!(options.label_fraction > 0.0 && options.label_fraction <= 1.0))
    throw InvalidArgument("label fraction must lie in (0, 1]");
  if (options.lambda_grid.size() == 1) {
    auto model = fit_logreg(X, labels, options.lambda_grid[0], options);
    model.cv_auc = {std::numeric_limits<double>::quiet_NaN()};
    return model;
  }

  // Stratified subsample for model selection, at least 2 rows per class.
  SplitMix64 rng(derive_seed(options.seed, 0x5ab));
  std::vector<std::size_t> subset;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    idx = shuffled(std::move(idx), rng);
    std::size_t take = static_cast<std::size_t>(
        std::ceil(options.label_fraction * static_cast<double>(idx.size())));
    take = std::min(idx.size(), std::max<std::size_t>(take, 2));
    subset.insert(subset.end(), idx.begin(), idx.begin() + take);
  }
  std::sort(subset.begin(), subset.end());
  std::vector<int> ysub;
  for (auto i : subset) ysub.push_back(labels[i]);
  const std::size_t minority = minority_count(ysub);
  if (minority < 2) throw InvalidArgument("need at least 2 examples of each class");
  const std::size_t folds = std::clamp<std::size_t>(options.folds, 2, minority);
  const Eigen::MatrixXd Xsub = take_rows(X, subset);

  std::vector<double> scores;
  std::size_t best = 0;
  for (std::size_t g = 0; g < options.lambda_grid.size(); ++g) {
    scores.push_back(
        cross_validated_auc(Xsub, ysub, options.lambda_grid[g], folds, options.seed, options));
    if (scores[g] > scores[best]) best = g;
  }
  auto model = fit_logreg(X, labels, options.lambda_grid[best], options);
  model.cv_auc = std::move(scores);
  return model;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos = 0, neg = 0, rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based mean rank
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        rank_sum += avg_rank;
        ++pos;
      } else {
        ++neg;
      }
    }
    i = j;
  }
  if (pos == 0 || neg == 0) throw InvalidArgument("AUC needs both classes");
  return (rank_sum - pos * (pos + 1) / 2) / (pos * neg);
}

double sign_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("sign test needs paired samples");
  std::size_t plus = 0, n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    ++n;
    if (a[i] > b[i]) ++plus;
  }
  if (n == 0) return 1.0;
  const std::size_t k = std::min(plus, n - plus);
  // P(X <= k) for X ~ Binomial(n, 1/2), doubled.
  double tail = 0.0;
  for (std::size_t i = 0; i <= k; ++i)
    tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                     static_cast<double>(n) * std::log(2.0));
  return std::min(1.0, 2.0 * tail);
}

}  // namespace arw
