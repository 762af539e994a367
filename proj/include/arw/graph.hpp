#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace arw {

using NodeId = std::uint32_t;
using ExternalId = std::uint64_t;
using NodePair = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Internal node indices are contiguous in [0, n). Every neighbor list is
/// strictly sorted, contains no self-loop and is mirrored in the neighbor
/// list of each of its entries. The external id of each node is kept so
/// outputs can be written in the caller's id space.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from edges given in external ids. Node indices follow the
  /// first-seen order of ids in `edges`; `extra_nodes` (if any) are appended
  /// afterwards as possibly isolated nodes. Self-loops are dropped and
  /// duplicates merged.
  static Graph from_external_edges(
      std::span<const std::pair<ExternalId, ExternalId>> edges,
      std::span<const ExternalId> extra_nodes = {});

  /// Builds a graph over internal indices [0, n), with external ids supplied
  /// by the caller (defaults to the identity). Used for residual graphs that
  /// must keep the node set of their parent.
  static Graph from_internal_edges(std::size_t num_nodes,
                                   std::span<const NodePair> edges,
                                   std::vector<ExternalId> external_ids = {});

  std::size_t num_nodes() const noexcept { return external_.size(); }
  std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

  /// Sorted neighbors of `node`. Throws std::out_of_range for a bad index.
  std::span<const NodeId> neighbors(NodeId node) const;

  std::size_t degree(NodeId node) const { return neighbors(node).size(); }

  /// Position of the first slot of `node` in the flat adjacency array; the
  /// directed edge (node -> neighbors(node)[k]) has slot offset(node) + k.
  std::size_t offset(NodeId node) const { return offsets_.at(node); }

  /// Total number of directed slots (2|E|).
  std::size_t num_slots() const noexcept { return adjacency_.size(); }

  /// Slot of the directed edge (from -> to), if present. O(log deg).
  std::optional<std::size_t> slot(NodeId from, NodeId to) const;

  bool has_edge(NodeId u, NodeId v) const { return slot(u, v).has_value(); }

  ExternalId external_id(NodeId node) const { return external_.at(node); }
  std::optional<NodeId> internal_id(ExternalId id) const;
  std::span<const ExternalId> external_ids() const noexcept { return external_; }

  /// Undirected edges as (u, v) with u < v, in slot order.
  std::vector<NodePair> edges() const;

  bool operator==(const Graph& other) const {
    return offsets_ == other.offsets_ && adjacency_ == other.adjacency_ &&
           external_ == other.external_;
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<ExternalId> external_;
  std::unordered_map<ExternalId, NodeId> index_;
};

/// Reads a whitespace-separated edge list. Lines starting with '#' or '%'
/// and blank lines are skipped; tokens after the second are ignored
/// (weights). Edges are always symmetrized; `directed_hint` is accepted for
/// interface compatibility and does not change the result.
Graph load_edge_list(const std::filesystem::path& path,
                     bool directed_hint = false);

/// Parses edge-list text already in memory; same rules as load_edge_list.
Graph parse_edge_list(std::string_view text);

/// Writes one "u v" line per undirected edge in external ids. Isolated nodes
/// cannot be represented in this format and are lost.
void write_edge_list(const std::filesystem::path& path, const Graph& graph);

}  // namespace arw
