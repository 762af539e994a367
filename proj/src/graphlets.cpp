#include "arw/graphlets.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace arw {

namespace {

using Count = std::int64_t;

constexpr Count choose2(Count x) { return x < 2 ? 0 : x * (x - 1) / 2; }
constexpr Count choose3(Count x) { return x < 3 ? 0 : x * (x - 1) * (x - 2) / 6; }

struct OutEdge {
  NodeId node;
  std::uint32_t edge;
};

// Degree-ordered orientation: every edge points from lower to higher rank.
// Each out-list keeps the undirected edge id so per-edge counters can be
// updated without searching.
struct Oriented {
  std::vector<std::size_t> offsets;
  std::vector<OutEdge> out;

  std::span<const OutEdge> of(NodeId u) const {
    return {out.data() + offsets[u], offsets[u + 1] - offsets[u]};
  }
};

Oriented orient(const Graph& g, std::span<const std::uint32_t> slot_edge) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return g.degree(a) < g.degree(b);
  });
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;

  Oriented o;
  o.offsets.assign(n + 1, 0);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors(u))
      if (rank[u] < rank[v]) ++o.offsets[u + 1];
  for (std::size_t i = 0; i < n; ++i) o.offsets[i + 1] += o.offsets[i];
  o.out.resize(o.offsets[n]);
  std::vector<std::size_t> fill(o.offsets.begin(), o.offsets.end() - 1);
  for (NodeId u = 0; u < n; ++u) {
    auto nbrs = g.neighbors(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k)
      if (rank[u] < rank[nbrs[k]])
        o.out[fill[u]++] = {nbrs[k], slot_edge[g.offset(u) + k]};
  }
  return o;
}

// Calls f(a, b, c, e_ab, e_ac, e_bc) once per triangle.
template <typename F>
void for_each_triangle(const Oriented& o, std::size_t n, F&& f) {
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> mark(n, kNone);
  for (NodeId u = 0; u < n; ++u) {
    for (const auto& [w, e] : o.of(u)) mark[w] = e;
    for (const auto& [v, e_uv] : o.of(u))
      for (const auto& [w, e_vw] : o.of(v))
        if (mark[w] != kNone) f(u, v, w, e_uv, mark[w], e_vw);
    for (const auto& [w, e] : o.of(u)) mark[w] = kNone;
  }
}

}  // namespace

AttributeMatrix count_graphlets(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::string> names(kGraphletNames.begin(), kGraphletNames.end());
  AttributeMatrix out(n, kGraphletNames.size(), std::move(names));
  if (n == 0) return out;

  // Undirected edge id for every directed slot.
  std::vector<std::uint32_t> slot_edge(g.num_slots());
  {
    std::uint32_t next = 0;
    for (NodeId u = 0; u < n; ++u) {
      auto nbrs = g.neighbors(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        NodeId v = nbrs[k];
        if (u < v) {
          slot_edge[g.offset(u) + k] = next;
          slot_edge[*g.slot(v, u)] = next;
          ++next;
        }
      }
    }
  }
  const Oriented o = orient(g, slot_edge);

  std::vector<Count> deg(n), tri(n, 0), edge_tri(g.num_edges(), 0);
  for (NodeId v = 0; v < n; ++v) deg[v] = static_cast<Count>(g.degree(v));

  for_each_triangle(o, n, [&](NodeId a, NodeId b, NodeId c, std::uint32_t ab,
                              std::uint32_t ac, std::uint32_t bc) {
    ++tri[a];
    ++tri[b];
    ++tri[c];
    ++edge_tri[ab];
    ++edge_tri[ac];
    ++edge_tri[bc];
  });

  // Wing term of non-induced diamonds: node a opposite edge (b, c) of a
  // triangle can pair with any other common neighbor of b and c.
  std::vector<Count> diamond_wing(n, 0);
  for_each_triangle(o, n, [&](NodeId a, NodeId b, NodeId c, std::uint32_t ab,
                              std::uint32_t ac, std::uint32_t bc) {
    diamond_wing[a] += edge_tri[bc] - 1;
    diamond_wing[b] += edge_tri[ac] - 1;
    diamond_wing[c] += edge_tri[ab] - 1;
  });

  // 4-cliques: extend each oriented triangle (u, v, w) by a common
  // out-neighbor x of all three.
  std::vector<Count> clique(n, 0);
  {
    std::vector<std::uint8_t> in_u(n, 0), in_uv(n, 0);
    std::vector<NodeId> common;
    for (NodeId u = 0; u < n; ++u) {
      for (const auto& [w, e] : o.of(u)) in_u[w] = 1;
      for (const auto& [v, e_uv] : o.of(u)) {
        common.clear();
        for (const auto& [w, e_vw] : o.of(v))
          if (in_u[w]) {
            common.push_back(w);
            in_uv[w] = 1;
          }
        for (NodeId w : common)
          for (const auto& [x, e_wx] : o.of(w))
            if (in_uv[x]) {
              ++clique[u];
              ++clique[v];
              ++clique[w];
              ++clique[x];
            }
        for (NodeId w : common) in_uv[w] = 0;
      }
      for (const auto& [w, e] : o.of(u)) in_u[w] = 0;
    }
  }

  // sum over neighbors c of b of (deg(c) - 1)
  std::vector<Count> excess(n, 0);
  for (NodeId b = 0; b < n; ++b)
    for (NodeId c : g.neighbors(b)) excess[b] += deg[c] - 1;

  std::vector<Count> common_count(n, 0);
  std::vector<NodeId> touched;
  for (NodeId v = 0; v < n; ++v) {
    auto nbrs = g.neighbors(v);
    const Count d = deg[v];
    const Count t = tri[v];

    Count path3_end = 0;     // v at an end of a (non-induced) 2-path
    Count path4_end = 0;     // v at an end of a 3-edge path
    Count star_leaf = 0;     // v a leaf of a 3-star
    Count paw_tail = 0;      // v the pendant node of a tailed triangle
    Count paw_side = 0;      // v a degree-2 triangle node of a tailed triangle
    Count diamond_spine = 0; // v an endpoint of the shared edge of a diamond
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId u = nbrs[k];
      const Count t_vu = edge_tri[slot_edge[g.offset(v) + k]];
      path3_end += deg[u] - 1;
      path4_end += excess[u] - (d - 1);
      star_leaf += choose2(deg[u] - 1);
      paw_tail += tri[u] - t_vu;
      paw_side += t_vu * (deg[u] - 2);
      diamond_spine += choose2(t_vu);
    }

    // 4-cycles through v: pairs of paths v-a-w, v-b-w sharing the far end w.
    Count cycles = 0;
    touched.clear();
    for (NodeId a : nbrs)
      for (NodeId w : g.neighbors(a)) {
        if (w == v) continue;
        if (common_count[w]++ == 0) touched.push_back(w);
      }
    for (NodeId w : touched) {
      cycles += choose2(common_count[w]);
      common_count[w] = 0;
    }

    // Non-induced counts containing v.
    const Count n_path4 = (path4_end - 2 * t) + ((d - 1) * path3_end - 2 * t);
    const Count n_star = choose3(d) + star_leaf;
    const Count n_cycle = cycles;
    const Count n_paw = t * (d - 2) + paw_tail + paw_side;
    const Count n_diamond = diamond_spine + diamond_wing[v];
    const Count n_clique = clique[v];

    // Induced counts: subtract copies hiding inside denser 4-node graphlets.
    const Count k4 = n_clique;
    const Count diamond = n_diamond - 6 * k4;
    const Count cycle = n_cycle - diamond - 3 * k4;
    const Count paw = n_paw - 4 * diamond - 12 * k4;
    const Count star = n_star - paw - 2 * diamond - 4 * k4;
    const Count path4 = n_path4 - 4 * cycle - 2 * paw - 6 * diamond - 12 * k4;

    const Count wedge = choose2(d) + path3_end - 3 * t;

    out(v, kEdge) = static_cast<double>(d);
    out(v, kTwoStar) = static_cast<double>(wedge);
    out(v, kTriangle) = static_cast<double>(t);
    out(v, kFourPath) = static_cast<double>(path4);
    out(v, kThreeStar) = static_cast<double>(star);
    out(v, kFourCycle) = static_cast<double>(cycle);
    out(v, kTailedTriangle) = static_cast<double>(paw);
    out(v, kDiamond) = static_cast<double>(diamond);
    out(v, kFourClique) = static_cast<double>(k4);
  }
  return out;
}

}  // namespace arw
