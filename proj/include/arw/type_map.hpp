#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arw/attributes.hpp"
#include "arw/graph.hpp"

namespace arw {

using TypeId = std::uint32_t;

/// Node-to-type assignment plus its vocabulary of type signatures.
///
/// Type ids are contiguous in [0, m) and every id has a unique signature.
/// A type may be unused by the current nodes (learned mappings keep one type
/// per latent factor or cluster so new nodes can still land in it).
class TypeMap {
 public:
  TypeMap() = default;

  /// Ids are handed out in first-occurrence order of the per-node signatures.
  static TypeMap from_signatures(std::span<const std::string> node_signatures);

  /// Explicit assignment over a fixed vocabulary.
  static TypeMap from_assignment(std::vector<TypeId> node_types,
                                 std::vector<std::string> vocabulary);

  std::size_t num_nodes() const noexcept { return node_types_.size(); }
  std::size_t num_types() const noexcept { return vocabulary_.size(); }

  /// Type of `node`; throws std::out_of_range for a bad index.
  TypeId type_of(NodeId node) const { return node_types_.at(node); }
  std::span<const TypeId> node_types() const noexcept { return node_types_; }

  const std::string& signature(TypeId type) const { return vocabulary_.at(type); }
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  std::optional<TypeId> find(const std::string& signature) const;

  bool operator==(const TypeMap& other) const {
    return node_types_ == other.node_types_ && vocabulary_ == other.vocabulary_;
  }

 private:
  std::vector<TypeId> node_types_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, TypeId> lookup_;
};

/// Concatenation mapping: the signature of a node is its attribute values
/// joined with '-'. Nodes with identical rows share a type and distinct rows
/// get distinct types.
TypeMap map_concat(const AttributeMatrix& attrs);

/// One type per node, signature = external id. Recovers node-identity walks.
TypeMap map_identity(const Graph& graph);

/// TSV with one "node<TAB>type<TAB>signature" line per node.
void write_typemap(const std::filesystem::path& path, const Graph& graph,
                   const TypeMap& types);

/// TSV with one "type<TAB>signature" line per vocabulary entry.
void write_vocabulary(const std::filesystem::path& path, const TypeMap& types);

/// Reads write_typemap output. If `vocabulary_path` is given the vocabulary
/// (including unused types) comes from it; otherwise it is rebuilt from the
/// signatures present in the node file.
TypeMap load_typemap(const std::filesystem::path& path, const Graph& graph,
                     const std::filesystem::path& vocabulary_path = {});

}  // namespace arw
