#include "arw/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "arw/error.hpp"

namespace arw {

Graph Graph::from_internal_edges(std::size_t num_nodes,
                                 std::span<const NodePair> edges,
                                 std::vector<ExternalId> external_ids) {
  if (external_ids.empty()) {
    external_ids.resize(num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) external_ids[i] = i;
  }
  if (external_ids.size() != num_nodes)
    throw InvalidArgument("external id count does not match node count");

  std::vector<NodePair> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes)
      throw InvalidArgument("edge endpoint out of range");
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Graph g;
  g.offsets_.assign(num_nodes + 1, 0);
  for (const auto& e : directed) ++g.offsets_[e.first + 1];
  for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(directed.size());
  for (std::size_t k = 0; k < directed.size(); ++k) g.adjacency_[k] = directed[k].second;
  g.external_ = std::move(external_ids);
  g.index_.reserve(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (!g.index_.emplace(g.external_[i], static_cast<NodeId>(i)).second)
      throw InvalidArgument("duplicate external id " + std::to_string(g.external_[i]));
  }
  return g;
}

Graph Graph::from_external_edges(
    std::span<const std::pair<ExternalId, ExternalId>> edges,
    std::span<const ExternalId> extra_nodes) {
  std::vector<ExternalId> external;
  std::unordered_map<ExternalId, NodeId> index;
  auto intern = [&](ExternalId id) {
    auto [it, inserted] = index.emplace(id, static_cast<NodeId>(external.size()));
    if (inserted) external.push_back(id);
    return it->second;
  };
  std::vector<NodePair> internal;
  internal.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    NodeId u = intern(a);
    NodeId v = intern(b);
    internal.emplace_back(u, v);
  }
  for (ExternalId id : extra_nodes) intern(id);
  const std::size_t n = external.size();
  return from_internal_edges(n, internal, std::move(external));
}

std::span<const NodeId> Graph::neighbors(NodeId node) const {
  if (node >= num_nodes())
    throw std::out_of_range("node index " + std::to_string(node) + " out of range");
  return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
}

std::optional<std::size_t> Graph::slot(NodeId from, NodeId to) const {
  auto nbrs = neighbors(from);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), to);
  if (it == nbrs.end() || *it != to) return std::nullopt;
  return offsets_[from] + static_cast<std::size_t>(it - nbrs.begin());
}

std::optional<NodeId> Graph::internal_id(ExternalId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph parse_edge_list(std::string_view text) {
  std::vector<std::pair<ExternalId, ExternalId>> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#' || line[i] == '%') continue;

    ExternalId ids[2];
    for (int t = 0; t < 2; ++t) {
      while (i < line.size() && is_space(line[i])) ++i;
      std::size_t start = i;
      while (i < line.size() && !is_space(line[i])) ++i;
      if (start == i) throw ParseError("expected two node ids", line_no);
      std::string_view token = line.substr(start, i - start);
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), ids[t]);
      if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("invalid node id '" + std::string(token) + "'", line_no);
    }
    edges.emplace_back(ids[0], ids[1]);
  }
  Graph g = Graph::from_external_edges(edges);
  if (g.num_nodes() == 0) throw Error("edge list contains no edges");
  return g;
}

Graph load_edge_list(const std::filesystem::path& path, bool /*directed_hint*/) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open edge list '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list(buffer.str());
}

void write_edge_list(const std::filesystem::path& path, const Graph& graph) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (const auto& [u, v] : graph.edges())
    out << graph.external_id(u) << ' ' << graph.external_id(v) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace arw
