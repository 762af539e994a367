#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "arw/alias.hpp"
#include "arw/error.hpp"
#include "arw/walk.hpp"
#include "support.hpp"

using namespace arw;
using namespace arw::testing;

namespace {

// Normalized second-order bias weights computed straight from the rule.
std::vector<double> expected_step(const Graph& g, NodeId prev, NodeId cur, double p, double q) {
  std::vector<double> w;
  double total = 0;
  for (NodeId x : g.neighbors(cur)) {
    const double v = x == prev ? 1.0 / p : g.has_edge(prev, x) ? 1.0 : 1.0 / q;
    w.push_back(v);
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

TypeMap uniform_types(std::size_t n, std::size_t m = 1) {
  std::vector<TypeId> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<TypeId>(i % m);
  std::vector<std::string> vocab;
  for (std::size_t k = 0; k < m; ++k) vocab.push_back("t" + std::to_string(k));
  return TypeMap::from_assignment(t, vocab);
}

}  // namespace

TEST(Alias, ExactProbabilities) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(1 + rng.below(12));
    for (auto& x : w) x = rng.uniform() * 5 + 1e-3;
    double total = 0;
    for (double x : w) total += x;
    const AliasTable t(w);
    const auto p = t.probabilities();
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(p[i], w[i] / total, 1e-12);
  }
}

TEST(Alias, SamplingFrequencies) {
  const std::vector<double> w{1, 2, 3, 4};
  const AliasTable t(w);
  SplitMix64 rng(1);
  std::vector<double> counts(4);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++counts[t.sample(rng)];
  for (int k = 0; k < 4; ++k) {
    const double p = w[k] / 10.0;
    EXPECT_NEAR(counts[k] / draws, p, 4 * std::sqrt(p * (1 - p) / draws));
  }
}

TEST(Alias, RejectsBadWeights) {
  EXPECT_THROW(AliasTable(std::vector<double>{}), InvalidArgument);
  EXPECT_THROW(AliasTable(std::vector<double>{1, -1}), InvalidArgument);
  EXPECT_THROW(AliasTable(std::vector<double>{0, 0}), InvalidArgument);
}

TEST(Transitions, UniformWhenPQOne) {
  const Graph g = erdos_renyi(12, 0.4, 2);
  const TransitionTable t(g, 1, 1);
  EXPECT_TRUE(t.precomputed());
  for (auto [u, v] : g.edges()) {
    const auto probs = t.step_probabilities(u, v);
    for (double p : probs) EXPECT_NEAR(p, 1.0 / g.degree(v), 1e-12);
  }
}

TEST(Transitions, TriangleBias) {
  const Graph g = complete_graph(3);
  const TransitionTable t(g, 0.5, 2);
  // prev 0, cur 1: neighbor 0 is the return (1/p = 2), neighbor 2 is shared (1).
  EXPECT_EQ(t.weights(0, 1), (std::vector<double>{2, 1}));
  const auto p = t.step_probabilities(0, 1);
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-12);
}

TEST(Transitions, LeafHasProbabilityOne) {
  const Graph g = path_graph(3);
  const TransitionTable t(g, 0.3, 7);
  EXPECT_EQ(t.step_probabilities(1, 0), (std::vector<double>{1.0}));
}

TEST(Transitions, SmallGraphsMatchFormulaInBothModes) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = erdos_renyi(3 + seed % 8, 0.5, seed);
    for (auto [p, q] : {std::pair{0.25, 4.0}, std::pair{2.0, 0.5}, std::pair{1.0, 1.0}}) {
      const TransitionTable pre(g, p, q);
      const TransitionTable lazy(g, p, q, 0);
      EXPECT_FALSE(lazy.precomputed());
      for (NodeId v = 0; v < g.num_nodes(); ++v)
        for (NodeId t : g.neighbors(v)) {
          const auto want = expected_step(g, t, v, p, q);
          const auto a = pre.step_probabilities(t, v), b = lazy.step_probabilities(t, v);
          for (std::size_t k = 0; k < want.size(); ++k) {
            EXPECT_NEAR(a[k], want[k], 1e-12);
            EXPECT_NEAR(b[k], want[k], 1e-12);
          }
        }
    }
  }
}

TEST(Transitions, LazyCacheStaysBounded) {
  const Graph g = powerlaw_cluster(200, 3, 0.3, 1);
  const TransitionTable t(g, 0.5, 2, 0);
  TransitionSampler small(t, 1024);
  SplitMix64 rng(1);
  NodeId prev = 0, cur = g.neighbors(0)[0];
  for (int i = 0; i < 5000; ++i) {
    const NodeId next = small.step(prev, cur, rng);
    ASSERT_TRUE(g.has_edge(cur, next));
    prev = cur;
    cur = next;
  }
  EXPECT_LE(small.cached_tables(), 1 + 1024 / TransitionTable::kEntryBytes);
}

TEST(Walk, ForcedPath) {
  const Graph g = path_graph(2);
  const TypeMap types = TypeMap::from_assignment({0, 1}, {"A", "B"});
  const TransitionTable t(g, 1, 1);
  TransitionSampler s(t);
  SplitMix64 rng(1);
  const auto w = attributed_walk(s, types, 0, 3, rng, true);
  EXPECT_EQ(w.types, (std::vector<TypeId>{0, 1, 0, 1}));
  EXPECT_EQ(w.nodes, (std::vector<NodeId>{0, 1, 0, 1}));
}

TEST(Walk, SingleTypeTriangle) {
  const Graph g = complete_graph(3);
  const TransitionTable t(g, 0.5, 2);
  TransitionSampler s(t);
  SplitMix64 rng(4);
  EXPECT_EQ(attributed_walk(s, uniform_types(3), 2, 5, rng).types, std::vector<TypeId>(6, 0));
}

TEST(Walk, IsolatedNodeStopsEarly) {
  const Graph g = Graph::from_internal_edges(3, std::vector<NodePair>{{0, 1}});
  const TransitionTable t(g, 1, 1);
  TransitionSampler s(t);
  SplitMix64 rng(4);
  EXPECT_EQ(attributed_walk(s, uniform_types(3, 3), 2, 10, rng).types,
            (std::vector<TypeId>{2}));
}

TEST(Corpus, CountsAndLengths) {
  const Graph g = erdos_renyi(6, 0.8, 1);
  const TransitionTable t(g, 1, 1);
  WalkConfig c;
  c.walks_per_node = 10;
  c.walk_length = 80;
  const auto corpus = generate_corpus(t, uniform_types(6), c);
  EXPECT_EQ(corpus.num_walks(), 60u);
  c.walks_per_node = 1;
  c.walk_length = 1;
  const auto one = generate_corpus(t, map_identity(g), c);
  EXPECT_EQ(one.num_walks(), 6u);
  std::vector<int> seen(6, 0);
  for (std::size_t i = 0; i < one.num_walks(); ++i) {
    ASSERT_EQ(one.walk(i).size(), 2u);
    ++seen[one.walk(i)[0]];
  }
  EXPECT_EQ(seen, std::vector<int>(6, 1));
}

TEST(Corpus, TraceIsAdjacentAndMatchesTypes) {
  const Graph g = powerlaw_cluster(100, 2, 0.5, 3);
  const TransitionTable t(g, 0.5, 2);
  const TypeMap types = uniform_types(100, 7);
  WalkConfig c;
  c.walks_per_node = 2;
  c.walk_length = 20;
  c.keep_trace = true;
  const auto corpus = generate_corpus(t, types, c);
  for (std::size_t i = 0; i < corpus.num_walks(); ++i) {
    const auto nodes = corpus.node_trace(i);
    const auto toks = corpus.walk(i);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      EXPECT_EQ(toks[k], types.type_of(nodes[k]));
      if (k) {
        EXPECT_TRUE(g.has_edge(nodes[k - 1], nodes[k]));
      }
    }
  }
}

TEST(Corpus, SeedDeterminismAndThreadInvariance) {
  const Graph g = powerlaw_cluster(150, 3, 0.3, 4);
  const TransitionTable t(g, 2, 0.5);
  WalkConfig c;
  c.walks_per_node = 3;
  c.walk_length = 15;
  c.seed = 5;
  const auto a = generate_corpus(t, map_identity(g), c);
  const auto b = generate_corpus(t, map_identity(g), c);
  EXPECT_EQ(a, b);
  c.threads = 3;
  EXPECT_EQ(generate_corpus(t, map_identity(g), c), a);
  c.seed = 6;
  EXPECT_NE(generate_corpus(t, map_identity(g), c), a);
}

TEST(Corpus, FirstStepUniform) {
  const Graph g = erdos_renyi(8, 0.5, 10);
  const TransitionTable t(g, 1, 1);
  WalkConfig c;
  c.walks_per_node = 20000;
  c.walk_length = 1;
  const auto corpus = generate_corpus(t, map_identity(g), c);
  std::map<std::pair<TypeId, TypeId>, double> count;
  for (std::size_t i = 0; i < corpus.num_walks(); ++i) {
    const auto w = corpus.walk(i);
    if (w.size() == 2) ++count[{w[0], w[1]}];
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const double deg = static_cast<double>(g.degree(v));
    for (NodeId x : g.neighbors(v)) {
      const double p = 1.0 / deg;
      const double se = std::sqrt(p * (1 - p) / c.walks_per_node);
      const double freq = count[std::pair{v, x}] / c.walks_per_node;
      EXPECT_NEAR(freq, p, 3 * se);
    }
  }
}

TEST(Corpus, FileRoundTrip) {
  TempDir dir;
  const Graph g = karate();
  const TransitionTable t(g, 1, 1);
  WalkConfig c;
  c.walks_per_node = 2;
  c.walk_length = 5;
  c.keep_trace = true;
  const auto corpus = generate_corpus(t, map_identity(g), c);
  write_corpus(dir / "c.txt", corpus);
  const auto back = load_corpus(dir / "c.txt");
  EXPECT_EQ(back.tokens, corpus.tokens);
  EXPECT_EQ(back.offsets, corpus.offsets);
  write_trace(dir / "t.txt", corpus, g);
  EXPECT_FALSE(read_file(dir / "t.txt").empty());
}

TEST(WalkConfig, Validation) {
  WalkConfig c;
  c.p = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.walk_length = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.walks_per_node = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}
