#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "arw/error.hpp"
#include "arw/graphlets.hpp"
#include "arw/linkpred.hpp"
#include "arw/logreg.hpp"
#include "arw/pipeline.hpp"
#include "arw/random.hpp"
#include "arw/space.hpp"
#include "support.hpp"

using namespace arw;
using namespace arw::testing;

namespace {

std::set<std::pair<NodeId, NodeId>> as_set(const std::vector<NodePair>& v) {
  std::set<std::pair<NodeId, NodeId>> s;
  for (auto [a, b] : v) s.insert({std::min(a, b), std::max(a, b)});
  return s;
}

EmbeddingMatrix small_embedding() {
  EmbeddingMatrix e(3, 4);
  SplitMix64 rng(2);
  for (float& v : e.values()) v = static_cast<float>(rng.uniform() - 0.5);
  return e;
}

}  // namespace

TEST(Split, TenEdges) {
  const Graph g = cycle_graph(10);
  const auto s = split_edges(g, 0.5, false, 1);
  EXPECT_EQ(s.positives.size(), 5u);
  EXPECT_EQ(s.negatives.size(), 5u);
  EXPECT_EQ(s.train_graph.num_edges(), 5u);
  EXPECT_EQ(s.train_graph.num_nodes(), 10u);
}

TEST(Split, Soundness) {
  const Graph g = powerlaw_cluster(200, 3, 0.3, 8);
  const auto s = split_edges(g, 0.5, false, 3);
  auto residual = as_set(s.train_graph.edges());
  const auto pos = as_set(s.positives);
  for (const auto& e : pos) EXPECT_EQ(residual.count(e), 0u);
  auto all = residual;
  all.insert(pos.begin(), pos.end());
  EXPECT_EQ(all, as_set(g.edges()));
  const auto neg = as_set(s.negatives);
  EXPECT_EQ(neg.size(), s.negatives.size());
  for (auto [u, v] : neg) {
    EXPECT_NE(u, v);
    EXPECT_FALSE(g.has_edge(u, v));
  }
}

TEST(Split, CompleteGraphHasNoNegatives) {
  EXPECT_THROW(split_edges(complete_graph(5), 0.5, false, 1), InvalidArgument);
}

TEST(Split, InvalidInputs) {
  EXPECT_THROW(split_edges(cycle_graph(10), 0.0, false, 1), InvalidArgument);
  EXPECT_THROW(split_edges(cycle_graph(10), 1.0, false, 1), InvalidArgument);
  EXPECT_THROW(split_edges(path_graph(2), 0.5, false, 1), InvalidArgument);
}

TEST(Split, PreserveDegreeOnStar) {
  // Every edge of a star ends at a leaf, so the guard refuses all of them.
  const auto s = split_edges(star_graph(9), 0.5, true, 1);
  EXPECT_LE(s.positives.size(), 4u);
  for (NodeId v = 0; v < 10; ++v) EXPECT_GE(s.train_graph.degree(v), 1u);
}

TEST(Split, PreserveDegreeKeepsEveryNodeCovered) {
  const Graph g = powerlaw_cluster(300, 2, 0.2, 4);
  const auto s = split_edges(g, 0.5, true, 2);
  for (NodeId v = 0; v < g.num_nodes(); ++v) EXPECT_GE(s.train_graph.degree(v), 1u);
  EXPECT_LE(s.positives.size(), g.num_edges() / 2);
}

TEST(Split, SeedsDiffer) {
  const Graph g = powerlaw_cluster(100, 3, 0.3, 1);
  EXPECT_NE(as_set(split_edges(g, 0.5, false, 1).positives),
            as_set(split_edges(g, 0.5, false, 2).positives));
}

TEST(EdgeFeatures, Operators) {
  EmbeddingMatrix e(2, 3);
  auto& v = e.values();
  v = {1, 2, 3, -1, -2, -3};
  const TypeMap same = TypeMap::from_assignment({0, 0}, {"0", "1"});
  const std::vector<NodePair> pair{{0, 1}};
  EXPECT_TRUE(edge_features(e, same, pair, EdgeOperator::weighted_l1).isZero());
  EXPECT_TRUE(edge_features(e, same, pair, EdgeOperator::weighted_l2).isZero());
  const TypeMap opposite = TypeMap::from_assignment({0, 1}, {"0", "1"});
  EXPECT_TRUE(edge_features(e, opposite, pair, EdgeOperator::mean).isZero());
  v = {1, 1, 1, 4, -5, 6};
  const auto h = edge_features(e, opposite, pair, EdgeOperator::hadamard);
  EXPECT_EQ(h(0, 0), 4);
  EXPECT_EQ(h(0, 1), -5);
  EXPECT_EQ(h(0, 2), 6);
}

TEST(EdgeFeatures, Symmetric) {
  const EmbeddingMatrix e = small_embedding();
  const TypeMap t = TypeMap::from_assignment({0, 1, 2, 1}, {"a", "b", "c"});
  const std::vector<NodePair> fwd{{0, 2}, {1, 3}, {3, 0}}, rev{{2, 0}, {3, 1}, {0, 3}};
  for (auto op : {EdgeOperator::mean, EdgeOperator::hadamard, EdgeOperator::weighted_l1,
                  EdgeOperator::weighted_l2})
    EXPECT_EQ(edge_features(e, t, fwd, op), edge_features(e, t, rev, op));
  EXPECT_THROW(edge_features(e, t, std::vector<NodePair>{{0, 9}}, EdgeOperator::mean),
               std::out_of_range);
  EXPECT_EQ(parse_edge_operator("weighted-l2"), EdgeOperator::weighted_l2);
  EXPECT_THROW(parse_edge_operator("max"), InvalidArgument);
}

TEST(Auc, Examples) {
  const std::vector<int> y{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, y), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, y), 0.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, y), 0.5);
  EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), InvalidArgument);
}

TEST(Auc, MonotoneInvariance) {
  SplitMix64 rng(3);
  std::vector<double> s(200), t(200);
  std::vector<int> y(200);
  for (std::size_t i = 0; i < s.size(); ++i) {
    y[i] = static_cast<int>(rng.below(2));
    s[i] = std::round(10 * (rng.uniform() + 0.3 * y[i]));  // with ties
    t[i] = std::exp(3 * s[i]) - 7;
  }
  EXPECT_DOUBLE_EQ(auc(s, y), auc(t, y));
}

TEST(LogReg, SeparableData) {
  SplitMix64 rng(1);
  Eigen::MatrixXd X(200, 2);
  std::vector<int> y(200);
  for (int i = 0; i < 200; ++i) {
    y[i] = i % 2;
    X(i, 0) = (y[i] ? 2.0 : -2.0) + rng.uniform() - 0.5;
    X(i, 1) = rng.uniform();
  }
  const auto m = train_logreg(X, y);
  const Eigen::VectorXd p = m.predict(X);
  int correct = 0;
  for (int i = 0; i < 200; ++i) correct += (p[i] > 0.5) == (y[i] == 1);
  EXPECT_GE(correct / 200.0, 0.99);
  EXPECT_EQ(m.cv_auc.size(), 5u);
}

TEST(LogReg, PermutedLabelsAreChance) {
  SplitMix64 rng(6);
  Eigen::MatrixXd X(1000, 4);
  std::vector<int> y(1000);
  for (int i = 0; i < 1000; ++i) {
    y[i] = static_cast<int>(rng.below(2));
    for (int j = 0; j < 4; ++j) X(i, j) = rng.uniform();
  }
  EXPECT_NEAR(cross_validated_auc(X, y, 1.0, 10, 1), 0.5, 0.05);
}

TEST(LogReg, GradientMatchesFiniteDifferences) {
  SplitMix64 rng(9);
  Eigen::MatrixXd X(50, 3);
  std::vector<int> y(50);
  for (int i = 0; i < 50; ++i) {
    y[i] = static_cast<int>(rng.below(2));
    for (int j = 0; j < 3; ++j) X(i, j) = rng.uniform() * 2 - 1;
  }
  const WeightedRows data = merge_rows(X, y);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd theta(4);
    for (int j = 0; j < 4; ++j) theta[j] = rng.uniform() * 2 - 1;
    Eigen::VectorXd g;
    logistic_objective(data, theta, 0.3, &g);
    Eigen::VectorXd fd(4);
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd a = theta, b = theta;
      a[j] += 1e-5;
      b[j] -= 1e-5;
      fd[j] = (logistic_objective(data, a, 0.3) - logistic_objective(data, b, 0.3)) / 2e-5;
    }
    EXPECT_LT((fd - g).norm() / g.norm(), 1e-5);
  }
}

TEST(LogReg, ConvergesToTolerance) {
  SplitMix64 rng(2);
  Eigen::MatrixXd X(300, 5);
  std::vector<int> y(300);
  for (int i = 0; i < 300; ++i) {
    for (int j = 0; j < 5; ++j) X(i, j) = rng.uniform();
    y[i] = X(i, 0) + 0.5 * rng.uniform() > 0.7;
  }
  const auto m = fit_logreg(X, y, 0.01);
  EXPECT_LT(m.gradient_norm, 1e-6);
  EXPECT_LT(m.iterations, 5000u);
}

TEST(LogReg, MergedRowsGiveTheSameObjective) {
  Eigen::MatrixXd X(6, 1);
  X << 1, 1, 1, 2, 2, 3;
  const std::vector<int> y{1, 0, 1, 0, 0, 1};
  const WeightedRows merged = merge_rows(X, y);
  EXPECT_EQ(merged.X.rows(), 3);
  Eigen::VectorXd theta(2);
  theta << 0.7, -0.2;
  double direct = 0;
  for (int i = 0; i < 6; ++i) {
    const double s = 0.7 * X(i, 0) - 0.2;
    direct += y[i] ? std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
  }
  direct = direct / 6 + 0.5 * 0.1 * 0.49;
  EXPECT_NEAR(logistic_objective(merged, theta, 0.1), direct, 1e-12);
}

TEST(LogReg, SingleClassRejected) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(10, 2);
  EXPECT_THROW(train_logreg(X, std::vector<int>(10, 1)), InvalidArgument);
}

TEST(SignTest, ExactBinomial) {
  const std::vector<double> a(10, 1.0), b(10, 0.0);
  EXPECT_NEAR(sign_test(a, b), 2.0 / 1024.0, 1e-15);
  EXPECT_DOUBLE_EQ(sign_test(a, a), 1.0);
  const std::vector<double> mixed{1, 0, 1, 0}, zero(4, 0.5);
  EXPECT_DOUBLE_EQ(sign_test(mixed, zero), 1.0);
}

TEST(Space, ReportMetric) {
  std::vector<SpaceInput> in{{"base", 1000, 10, {}, true}, {"small", 1, 10, {}, false}};
  const auto r = space_report(in);
  EXPECT_DOUBLE_EQ(r[0].log_gain, 0.0);
  EXPECT_NEAR(r[1].log_gain, 3.0, 1e-12);
  EXPECT_EQ(r[0].bytes, 40000u);
  EXPECT_THROW(space_report({in[0]}), InvalidArgument);
}

TEST(Space, TypeCountsRefine) {
  for (const Graph& g : {karate(), powerlaw_cluster(500, 3, 0.5, 1), erdos_renyi(80, 0.1, 2)}) {
    const auto rows = type_count_table(count_graphlets(g), {});
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].types, rows[i].types);
    EXPECT_EQ(rows[0].subset, "[x2 x3]");
  }
}

TEST(Pipeline, TypesFromGraphletsOrIdentity) {
  const Graph g = karate();
  TypingConfig t;
  t.columns = {"x2", "x3"};
  t.binning.scheme = BinningScheme::identity;
  EXPECT_EQ(assign_types(g, t).types.num_types(), 27u);
  t.mapping = TypeMapping::identity;
  EXPECT_EQ(assign_types(g, t).types.num_types(), 34u);
  t.mapping = TypeMapping::kmeans;
  t.rank = 2;
  t.clusters = 5;
  t.binning = {};
  const auto learned = assign_types(g, t);
  EXPECT_LE(learned.types.num_types(), 5u);
  EXPECT_TRUE(learned.model.has_value());
}

TEST(Pipeline, LinkPredictionSmoke) {
  const Graph g = powerlaw_cluster(200, 3, 0.5, 3);
  LinkPredConfig c;
  c.repetitions = 2;
  c.walk.walks_per_node = 2;
  c.walk.walk_length = 10;
  c.embedding.dims = 8;
  c.compare_identity = true;
  const auto r = run_link_prediction(g, c, "toy");
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.auc.size(), 2u);
    EXPECT_NE(row.seeds[0], row.seeds[1]);
    for (double a : row.auc) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
    EXPECT_TRUE(row.sign_test_p.has_value());
  }
  EXPECT_EQ(r.rows.back().types.front(), 200u);
  std::ostringstream tsv;
  write_linkpred_tsv(tsv, r);
  EXPECT_NE(tsv.str().find("toy\ttyped\tmean"), std::string::npos);
}

TEST(Pipeline, LinkPredictionOnCompleteGraphFails) {
  LinkPredConfig c;
  c.repetitions = 1;
  EXPECT_THROW(run_link_prediction(complete_graph(5), c), InvalidArgument);
}
