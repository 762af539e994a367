#pragma once

#include <array>
#include <string>

#include "arw/attributes.hpp"
#include "arw/graph.hpp"

namespace arw {

/// Column order of the nine connected graphlets on 2-4 nodes.
///
///   x1 edge        x4 4-path     x7 tailed triangle
///   x2 2-star      x5 3-star     x8 diamond
///   x3 triangle    x6 4-cycle    x9 4-clique
///
/// Each entry counts the induced subgraphs of that shape containing the node,
/// in any position.
inline const std::array<std::string, 9> kGraphletNames = {
    "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9"};

enum Graphlet : std::size_t {
  kEdge = 0,
  kTwoStar,
  kTriangle,
  kFourPath,
  kThreeStar,
  kFourCycle,
  kTailedTriangle,
  kDiamond,
  kFourClique,
};

/// Exact per-node induced graphlet participation counts (n x 9).
///
/// Triangles and 4-cliques are listed on a degree-ordered orientation; the
/// remaining shapes come from closed-form non-induced counts converted to
/// induced counts through the fixed subgraph-containment relations.
AttributeMatrix count_graphlets(const Graph& graph);

}  // namespace arw
