#pragma once

#include <cstdint>
#include <filesystem>
#include <list>
#include <span>
#include <unordered_map>
#include <vector>

#include "arw/alias.hpp"
#include "arw/graph.hpp"
#include "arw/random.hpp"
#include "arw/type_map.hpp"

namespace arw {

struct WalkConfig {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool keep_trace = false;  // also record the underlying node ids

  void validate() const;
};

/// Second-order (p, q) transition structure.
///
/// For the directed edge (t -> v) the next node x in N(v) has weight 1/p if
/// x == t, 1 if x is adjacent to t and 1/q otherwise. One alias table per
/// directed edge is precomputed when the total size, sum over v of deg(v)^2
/// entries, fits the memory budget; otherwise tables are built on demand by
/// each TransitionSampler and kept in a bounded LRU cache. A budget of 0
/// always selects the on-demand mode.
class TransitionTable {
 public:
  static constexpr std::size_t kDefaultMemoryBudget = std::size_t{256} << 20;
  static constexpr std::size_t kEntryBytes = sizeof(double) + sizeof(std::uint32_t);

  /// `graph` must outlive the table.
  TransitionTable(const Graph& graph, double p, double q,
                  std::size_t memory_budget_bytes = kDefaultMemoryBudget);

  const Graph& graph() const noexcept { return *graph_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  bool precomputed() const noexcept { return precomputed_; }
  std::size_t memory_bytes() const noexcept;

  /// Unnormalized weights over neighbors(cur) after arriving from `prev`.
  std::vector<double> weights(NodeId prev, NodeId cur) const;

  /// Exact next-step distribution over neighbors(cur), read off the alias
  /// structure that sampling uses.
  std::vector<double> step_probabilities(NodeId prev, NodeId cur) const;

 private:
  friend class TransitionSampler;

  void fill_weights(NodeId prev, NodeId cur, std::span<double> out) const;

  const Graph* graph_;
  double p_;
  double q_;
  bool precomputed_ = false;
  std::vector<std::size_t> table_offset_;  // per directed slot, size 2|E|+1
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Draws walk steps from a TransitionTable. Not thread-safe; use one per
/// worker. In on-demand mode it owns the LRU cache of built tables.
class TransitionSampler {
 public:
  static constexpr std::size_t kDefaultCacheBytes = std::size_t{64} << 20;

  explicit TransitionSampler(const TransitionTable& table,
                             std::size_t cache_bytes = kDefaultCacheBytes);

  /// First step of a walk: uniform over neighbors(cur). cur must have one.
  NodeId first_step(NodeId cur, SplitMix64& rng) const;

  /// Biased step from cur after arriving from prev.
  NodeId step(NodeId prev, NodeId cur, SplitMix64& rng);

  std::size_t cached_tables() const noexcept { return cache_.size(); }
  const Graph& graph() const noexcept { return table_->graph(); }

 private:
  const AliasTable& cached(std::size_t slot, NodeId prev, NodeId cur);

  const TransitionTable* table_;
  std::size_t cache_bytes_;
  std::size_t cache_used_ = 0;
  std::list<std::pair<std::size_t, AliasTable>> lru_;
  std::unordered_map<std::size_t, std::list<std::pair<std::size_t, AliasTable>>::iterator> cache_;
};

struct AttributedWalk {
  std::vector<TypeId> types;
  std::vector<NodeId> nodes;  // filled only when a trace is requested
};

/// One attributed walk of `length` steps from `start`: the type sequence of
/// the visited nodes, length + 1 entries. A walk from an isolated node stops
/// immediately and holds only the start type.
AttributedWalk attributed_walk(TransitionSampler& sampler, const TypeMap& types,
                               NodeId start, std::size_t length, SplitMix64& rng,
                               bool keep_trace = false);

/// Flat storage of many walks.
struct WalkCorpus {
  std::vector<TypeId> tokens;
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> trace;  // parallel to tokens when recorded

  std::size_t num_walks() const noexcept { return offsets.size() - 1; }
  std::size_t num_tokens() const noexcept { return tokens.size(); }
  std::span<const TypeId> walk(std::size_t i) const {
    return {tokens.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::span<const NodeId> node_trace(std::size_t i) const {
    return {trace.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  void append(std::span<const TypeId> walk);

  bool operator==(const WalkCorpus&) const = default;
};

/// walks_per_node passes; each pass visits every node once in a freshly
/// shuffled order and starts one walk there. Walk j of pass r draws from the
/// stream derive_seed(seed, r, node), so the corpus is identical for every
/// thread count.
WalkCorpus generate_corpus(const TransitionTable& table, const TypeMap& types,
                           const WalkConfig& config);

/// One walk per line, space-separated type ids.
void write_corpus(const std::filesystem::path& path, const WalkCorpus& corpus);
/// Same layout as write_corpus with external node ids; needs a trace.
void write_trace(const std::filesystem::path& path, const WalkCorpus& corpus,
                 const Graph& graph);
WalkCorpus load_corpus(const std::filesystem::path& path);

}  // namespace arw
