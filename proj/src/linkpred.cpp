#include "arw/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "arw/error.hpp"
#include "arw/random.hpp"

namespace arw {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

LinkSplit split_edges(const Graph& graph, double fraction, bool preserve_degree,
                      std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw InvalidArgument("split fraction must lie in (0, 1)");
  if (graph.num_edges() < 2) throw InvalidArgument("splitting needs at least 2 edges");

  SplitMix64 rng(derive_seed(seed, 0x5b117));
  std::vector<NodePair> edges = graph.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  const auto target =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(edges.size())));

  std::vector<std::size_t> degree(graph.num_nodes());
  for (NodeId v = 0; v < graph.num_nodes(); ++v) degree[v] = graph.degree(v);

  LinkSplit split;
  split.split_seed = seed;
  std::vector<NodePair> kept;
  kept.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    const bool removable =
        split.positives.size() < target && (!preserve_degree || (degree[u] > 1 && degree[v] > 1));
    if (removable) {
      split.positives.push_back({u, v});
      --degree[u];
      --degree[v];
    } else {
      kept.push_back({u, v});
    }
  }

  const std::uint64_t n = graph.num_nodes();
  const std::uint64_t non_edges = n * (n - 1) / 2 - graph.num_edges();
  if (non_edges < split.positives.size())
    throw InvalidArgument("graph has " + std::to_string(non_edges) + " non-adjacent pairs, " +
                          std::to_string(split.positives.size()) + " negatives needed");
  std::unordered_set<std::uint64_t> taken;
  const std::size_t cap = 100 * split.positives.size();
  for (std::size_t attempt = 0; split.negatives.size() < split.positives.size(); ++attempt) {
    if (attempt >= cap)
      throw InvalidArgument("negative sampling exhausted after " + std::to_string(cap) +
                            " attempts");
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto v = static_cast<NodeId>(rng.below(n));
    if (u == v || graph.has_edge(u, v) || !taken.insert(pair_key(u, v)).second) continue;
    split.negatives.push_back({std::min(u, v), std::max(u, v)});
  }

  std::vector<ExternalId> ids(graph.external_ids().begin(), graph.external_ids().end());
  split.train_graph = Graph::from_internal_edges(graph.num_nodes(), kept, std::move(ids));
  return split;
}

EdgeOperator parse_edge_operator(const std::string& name) {
  if (name == "mean") return EdgeOperator::mean;
  if (name == "hadamard") return EdgeOperator::hadamard;
  if (name == "weighted-l1") return EdgeOperator::weighted_l1;
  if (name == "weighted-l2") return EdgeOperator::weighted_l2;
  throw InvalidArgument("unknown edge operator '" + name +
                        "' (expected mean, hadamard, weighted-l1 or weighted-l2)");
}

std::string to_string(EdgeOperator op) {
  switch (op) {
    case EdgeOperator::mean: return "mean";
    case EdgeOperator::hadamard: return "hadamard";
    case EdgeOperator::weighted_l1: return "weighted-l1";
    case EdgeOperator::weighted_l2: return "weighted-l2";
  }
  return "?";
}

Eigen::MatrixXd edge_features(const EmbeddingMatrix& embedding, const TypeMap& types,
                              std::span<const NodePair> pairs, EdgeOperator op) {
  const std::size_t d = embedding.dims();
  Eigen::MatrixXd out(pairs.size(), d);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto a = node_embedding(embedding, types, pairs[r].first);
    const auto b = node_embedding(embedding, types, pairs[r].second);
    for (std::size_t k = 0; k < d; ++k) {
      const double x = a[k], y = b[k];
      switch (op) {
        case EdgeOperator::mean: out(r, k) = 0.5 * (x + y); break;
        case EdgeOperator::hadamard: out(r, k) = x * y; break;
        case EdgeOperator::weighted_l1: out(r, k) = std::abs(x - y); break;
        case EdgeOperator::weighted_l2: out(r, k) = (x - y) * (x - y); break;
      }
    }
  }
  return out;
}

}  // namespace arw
