#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arw/graph.hpp"
#include "arw/skipgram.hpp"
#include "arw/type_map.hpp"

namespace arw {

struct LinkSplit {
  Graph train_graph;  // residual graph, same node set as the input
  std::vector<NodePair> positives;  // removed edges
  std::vector<NodePair> negatives;  // sampled non-edges of the input graph
  std::uint64_t split_seed = 0;
};

/// Removes floor(fraction * |E|) edges chosen uniformly at random and samples
/// as many distinct non-adjacent pairs. With preserve_degree, a removal that
/// would leave either endpoint without edges is skipped, so fewer edges may
/// be removed. Negative sampling gives up after 100 * |positives| draws.
LinkSplit split_edges(const Graph& graph, double fraction = 0.5, bool preserve_degree = false,
                      std::uint64_t seed = 1);

enum class EdgeOperator { mean, hadamard, weighted_l1, weighted_l2 };

EdgeOperator parse_edge_operator(const std::string& name);
std::string to_string(EdgeOperator op);

/// One row per pair: op(z_u, z_v) on the node embeddings. All four
/// operators are symmetric in u and v.
Eigen::MatrixXd edge_features(const EmbeddingMatrix& embedding, const TypeMap& types,
                              std::span<const NodePair> pairs, EdgeOperator op);

}  // namespace arw
