#include "arw/type_map.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "arw/error.hpp"

namespace arw {

TypeMap TypeMap::from_signatures(std::span<const std::string> node_signatures) {
  TypeMap tm;
  tm.node_types_.reserve(node_signatures.size());
  for (const auto& sig : node_signatures) {
    auto [it, inserted] = tm.lookup_.try_emplace(sig, static_cast<TypeId>(tm.vocabulary_.size()));
    if (inserted) tm.vocabulary_.push_back(sig);
    tm.node_types_.push_back(it->second);
  }
  return tm;
}

TypeMap TypeMap::from_assignment(std::vector<TypeId> node_types,
                                 std::vector<std::string> vocabulary) {
  TypeMap tm;
  for (TypeId t : node_types)
    if (t >= vocabulary.size()) throw InvalidArgument("type id outside vocabulary");
  tm.node_types_ = std::move(node_types);
  tm.vocabulary_ = std::move(vocabulary);
  for (std::size_t i = 0; i < tm.vocabulary_.size(); ++i)
    if (!tm.lookup_.emplace(tm.vocabulary_[i], static_cast<TypeId>(i)).second)
      throw InvalidArgument("duplicate type signature '" + tm.vocabulary_[i] + "'");
  return tm;
}

std::optional<TypeId> TypeMap::find(const std::string& signature) const {
  auto it = lookup_.find(signature);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

TypeMap map_concat(const AttributeMatrix& attrs) {
  if (attrs.cols() == 0) throw InvalidArgument("concatenation needs at least one attribute");
  attrs.require_finite();
  std::vector<std::string> sigs(attrs.rows());
  for (std::size_t r = 0; r < attrs.rows(); ++r) {
    std::string s;
    for (std::size_t c = 0; c < attrs.cols(); ++c) {
      if (c) s += '-';
      s += format_number(attrs(r, c));
    }
    sigs[r] = std::move(s);
  }
  return TypeMap::from_signatures(sigs);
}

TypeMap map_identity(const Graph& graph) {
  std::vector<std::string> sigs(graph.num_nodes());
  for (NodeId i = 0; i < graph.num_nodes(); ++i) sigs[i] = std::to_string(graph.external_id(i));
  return TypeMap::from_signatures(sigs);
}

void write_typemap(const std::filesystem::path& path, const Graph& graph,
                   const TypeMap& types) {
  if (types.num_nodes() != graph.num_nodes())
    throw InvalidArgument("type map does not cover the graph");
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "node\ttype\tsignature\n";
  for (NodeId i = 0; i < graph.num_nodes(); ++i) {
    TypeId t = types.type_of(i);
    out << graph.external_id(i) << '\t' << t << '\t' << types.signature(t) << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_vocabulary(const std::filesystem::path& path, const TypeMap& types) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "type\tsignature\n";
  for (TypeId t = 0; t < types.num_types(); ++t) out << t << '\t' << types.signature(t) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

namespace {

template <typename Int>
Int parse_int(std::string_view token, std::size_t line_no) {
  Int v{};
  auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || p != token.data() + token.size())
    throw ParseError("invalid integer '" + std::string(token) + "'", line_no);
  return v;
}

std::vector<std::string> tab_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  return out;
}

}  // namespace

TypeMap load_typemap(const std::filesystem::path& path, const Graph& graph,
                     const std::filesystem::path& vocabulary_path) {
  std::map<TypeId, std::string> vocab;
  if (!vocabulary_path.empty()) {
    std::ifstream vin(vocabulary_path);
    if (!vin) throw Error("cannot open vocabulary '" + vocabulary_path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(vin, line)) {
      ++line_no;
      if (line_no == 1 || line.empty()) continue;
      auto f = tab_fields(line);
      if (f.size() != 2) throw ParseError("expected type and signature", line_no);
      vocab[parse_int<TypeId>(f[0], line_no)] = f[1];
    }
  }

  std::ifstream in(path);
  if (!in) throw Error("cannot open type map '" + path.string() + "'");
  std::vector<TypeId> node_types(graph.num_nodes(), 0);
  std::vector<bool> seen(graph.num_nodes(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    auto f = tab_fields(line);
    if (f.size() != 3) throw ParseError("expected node, type and signature", line_no);
    auto node = graph.internal_id(parse_int<ExternalId>(f[0], line_no));
    if (!node) throw ParseError("unknown node id " + f[0], line_no);
    TypeId t = parse_int<TypeId>(f[1], line_no);
    auto [it, inserted] = vocab.emplace(t, f[2]);
    if (!inserted && it->second != f[2])
      throw ParseError("type " + f[1] + " has conflicting signatures", line_no);
    node_types[*node] = t;
    seen[*node] = true;
  }
  for (NodeId i = 0; i < graph.num_nodes(); ++i)
    if (!seen[i]) throw Error("type map has no entry for node " + std::to_string(graph.external_id(i)));

  std::vector<std::string> vocabulary;
  if (vocabulary_path.empty()) {
    // Only the types in use are known; renumber them densely in id order.
    std::map<TypeId, TypeId> dense;
    for (const auto& [t, sig] : vocab) {
      dense[t] = static_cast<TypeId>(vocabulary.size());
      vocabulary.push_back(sig);
    }
    for (auto& t : node_types) t = dense[t];
  } else {
    for (const auto& [t, sig] : vocab) {
      if (t != vocabulary.size())
        throw Error("type ids in '" + vocabulary_path.string() + "' are not contiguous");
      vocabulary.push_back(sig);
    }
  }
  return TypeMap::from_assignment(std::move(node_types), std::move(vocabulary));
}

}  // namespace arw
