#include "arw/walk.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <string>
#include <thread>

#include "arw/error.hpp"

namespace arw {

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw InvalidArgument("walks per node must be >= 1");
  if (walk_length < 1) throw InvalidArgument("walk length must be >= 1");
  if (!(p > 0.0)) throw InvalidArgument("return parameter p must be > 0");
  if (!(q > 0.0)) throw InvalidArgument("in-out parameter q must be > 0");
  if (threads < 1) throw InvalidArgument("thread count must be >= 1");
}

TransitionTable::TransitionTable(const Graph& graph, double p, double q,
                                 std::size_t memory_budget_bytes)
    : graph_(&graph), p_(p), q_(q) {
  if (!(p > 0.0) || !(q > 0.0)) throw InvalidArgument("p and q must be > 0");

  std::size_t entries = 0;
  for (NodeId v = 0; v < graph.num_nodes(); ++v) entries += graph.degree(v) * graph.degree(v);
  if (memory_budget_bytes == 0 || entries * kEntryBytes > memory_budget_bytes) return;

  precomputed_ = true;
  table_offset_.assign(graph.num_slots() + 1, 0);
  for (NodeId t = 0; t < graph.num_nodes(); ++t) {
    auto nbrs = graph.neighbors(t);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::size_t s = graph.offset(t) + k;
      table_offset_[s + 1] = table_offset_[s] + graph.degree(nbrs[k]);
    }
  }
  prob_.resize(entries);
  alias_.resize(entries);
  std::vector<double> w;
  for (NodeId t = 0; t < graph.num_nodes(); ++t) {
    auto nbrs = graph.neighbors(t);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::size_t s = graph.offset(t) + k;
      const NodeId v = nbrs[k];
      w.resize(graph.degree(v));
      fill_weights(t, v, w);
      const std::size_t len = table_offset_[s + 1] - table_offset_[s];
      build_alias(w, std::span(prob_).subspan(table_offset_[s], len),
                  std::span(alias_).subspan(table_offset_[s], len));
    }
  }
}

std::size_t TransitionTable::memory_bytes() const noexcept {
  return prob_.size() * sizeof(double) + alias_.size() * sizeof(std::uint32_t) +
         table_offset_.size() * sizeof(std::size_t);
}

void TransitionTable::fill_weights(NodeId prev, NodeId cur, std::span<double> out) const {
  auto next = graph_->neighbors(cur);
  auto back = graph_->neighbors(prev);
  const double ret = 1.0 / p_;
  const double away = 1.0 / q_;
  // Both lists are sorted, so adjacency to prev is a merge.
  std::size_t j = 0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const NodeId x = next[i];
    if (x == prev) {
      out[i] = ret;
      continue;
    }
    while (j < back.size() && back[j] < x) ++j;
    out[i] = (j < back.size() && back[j] == x) ? 1.0 : away;
  }
}

std::vector<double> TransitionTable::weights(NodeId prev, NodeId cur) const {
  if (!graph_->has_edge(prev, cur)) throw InvalidArgument("prev and cur are not adjacent");
  std::vector<double> w(graph_->degree(cur));
  fill_weights(prev, cur, w);
  return w;
}

std::vector<double> TransitionTable::step_probabilities(NodeId prev, NodeId cur) const {
  auto s = graph_->slot(prev, cur);
  if (!s) throw InvalidArgument("prev and cur are not adjacent");
  if (precomputed_) {
    const std::size_t len = table_offset_[*s + 1] - table_offset_[*s];
    return alias_probabilities(std::span(prob_).subspan(table_offset_[*s], len),
                               std::span(alias_).subspan(table_offset_[*s], len));
  }
  return AliasTable(weights(prev, cur)).probabilities();
}

TransitionSampler::TransitionSampler(const TransitionTable& table, std::size_t cache_bytes)
    : table_(&table), cache_bytes_(cache_bytes) {}

NodeId TransitionSampler::first_step(NodeId cur, SplitMix64& rng) const {
  auto nbrs = table_->graph().neighbors(cur);
  return nbrs[static_cast<std::size_t>(rng.below(nbrs.size()))];
}

const AliasTable& TransitionSampler::cached(std::size_t slot, NodeId prev, NodeId cur) {
  if (auto it = cache_.find(slot); it != cache_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
  }
  AliasTable built(table_->weights(prev, cur));
  const std::size_t bytes = built.memory_bytes();
  while (!lru_.empty() && cache_used_ + bytes > cache_bytes_) {
    cache_used_ -= lru_.back().second.memory_bytes();
    cache_.erase(lru_.back().first);
    lru_.pop_back();
  }
  lru_.emplace_front(slot, std::move(built));
  cache_.emplace(slot, lru_.begin());
  cache_used_ += bytes;
  return lru_.front().second;
}

NodeId TransitionSampler::step(NodeId prev, NodeId cur, SplitMix64& rng) {
  const Graph& g = table_->graph();
  auto nbrs = g.neighbors(cur);
  if (table_->precomputed_) {
    // prev -> cur slot: binary search in prev's sorted list.
    const std::size_t s = *g.slot(prev, cur);
    const std::size_t off = table_->table_offset_[s];
    const std::size_t len = table_->table_offset_[s + 1] - off;
    const std::size_t k = alias_sample(std::span(table_->prob_).subspan(off, len),
                                       std::span(table_->alias_).subspan(off, len), rng);
    return nbrs[k];
  }
  const std::size_t s = *g.slot(prev, cur);
  return nbrs[cached(s, prev, cur).sample(rng)];
}

namespace {

// Writes the walk into out_types (and out_nodes if non-null); returns the
// number of entries written, 1 for an isolated start.
std::size_t walk_into(TransitionSampler& sampler, const TypeMap& types, NodeId start,
                      std::size_t length, SplitMix64& rng, TypeId* out_types,
                      NodeId* out_nodes) {
  out_types[0] = types.type_of(start);
  if (out_nodes) out_nodes[0] = start;
  if (sampler.graph().degree(start) == 0) return 1;
  NodeId prev = start;
  NodeId cur = sampler.first_step(start, rng);
  out_types[1] = types.type_of(cur);
  if (out_nodes) out_nodes[1] = cur;
  for (std::size_t i = 2; i <= length; ++i) {
    const NodeId next = sampler.step(prev, cur, rng);
    out_types[i] = types.type_of(next);
    if (out_nodes) out_nodes[i] = next;
    prev = cur;
    cur = next;
  }
  return length + 1;
}

}  // namespace

AttributedWalk attributed_walk(TransitionSampler& sampler, const TypeMap& types,
                               NodeId start, std::size_t length, SplitMix64& rng,
                               bool keep_trace) {
  if (length < 1) throw InvalidArgument("walk length must be >= 1");
  if (types.num_nodes() != sampler.graph().num_nodes())
    throw InvalidArgument("type map does not cover the graph");
  (void)sampler.graph().neighbors(start);  // range check
  AttributedWalk walk;
  walk.types.resize(length + 1);
  if (keep_trace) walk.nodes.resize(length + 1);
  const std::size_t len = walk_into(sampler, types, start, length, rng, walk.types.data(),
                                    keep_trace ? walk.nodes.data() : nullptr);
  walk.types.resize(len);
  if (keep_trace) walk.nodes.resize(len);
  return walk;
}

void WalkCorpus::append(std::span<const TypeId> walk) {
  tokens.insert(tokens.end(), walk.begin(), walk.end());
  offsets.push_back(tokens.size());
}

WalkCorpus generate_corpus(const TransitionTable& table, const TypeMap& types,
                           const WalkConfig& config) {
  config.validate();
  const Graph& g = table.graph();
  const std::size_t n = g.num_nodes();
  if (types.num_nodes() != n) throw InvalidArgument("type map does not cover the graph");

  // Walk order: pass-major, shuffled node order within each pass.
  const std::size_t total = config.walks_per_node * n;
  std::vector<NodeId> starts(total);
  std::vector<std::uint32_t> pass_of(total);
  for (std::size_t pass = 0; pass < config.walks_per_node; ++pass) {
    auto first = starts.begin() + static_cast<std::ptrdiff_t>(pass * n);
    std::iota(first, first + static_cast<std::ptrdiff_t>(n), NodeId{0});
    SplitMix64 shuffle_rng(derive_seed(config.seed, pass, ~std::uint64_t{0}));
    for (std::size_t i = n; i > 1; --i)
      std::swap(first[static_cast<std::ptrdiff_t>(i - 1)],
                first[static_cast<std::ptrdiff_t>(shuffle_rng.below(i))]);
    std::fill(pass_of.begin() + static_cast<std::ptrdiff_t>(pass * n),
              pass_of.begin() + static_cast<std::ptrdiff_t>((pass + 1) * n),
              static_cast<std::uint32_t>(pass));
  }

  WalkCorpus corpus;
  corpus.offsets.resize(total + 1);
  corpus.offsets[0] = 0;
  for (std::size_t w = 0; w < total; ++w)
    corpus.offsets[w + 1] =
        corpus.offsets[w] + (g.degree(starts[w]) == 0 ? 1 : config.walk_length + 1);
  corpus.tokens.resize(corpus.offsets[total]);
  if (config.keep_trace) corpus.trace.resize(corpus.offsets[total]);

  auto work = [&](std::size_t begin, std::size_t end) {
    TransitionSampler sampler(table);
    for (std::size_t w = begin; w < end; ++w) {
      SplitMix64 rng(derive_seed(config.seed, pass_of[w], starts[w]));
      walk_into(sampler, types, starts[w], config.walk_length, rng,
                corpus.tokens.data() + corpus.offsets[w],
                config.keep_trace ? corpus.trace.data() + corpus.offsets[w] : nullptr);
    }
  };

  const std::size_t threads = std::min(config.threads, std::max<std::size_t>(total, 1));
  if (threads <= 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(work, total * t / threads, total * (t + 1) / threads);
    for (auto& th : pool) th.join();
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& path, const WalkCorpus& corpus) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  std::string line;
  char buf[16];
  for (std::size_t w = 0; w < corpus.num_walks(); ++w) {
    line.clear();
    for (TypeId t : corpus.walk(w)) {
      if (!line.empty()) line += ' ';
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, t);
      line.append(buf, p);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_trace(const std::filesystem::path& path, const WalkCorpus& corpus,
                 const Graph& graph) {
  if (corpus.trace.size() != corpus.tokens.size())
    throw InvalidArgument("corpus was generated without a node trace");
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (std::size_t w = 0; w < corpus.num_walks(); ++w) {
    bool first = true;
    for (NodeId v : corpus.node_trace(w)) {
      out << (first ? "" : " ") << graph.external_id(v);
      first = false;
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

WalkCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus '" + path.string() + "'");
  WalkCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  std::vector<TypeId> walk;
  while (std::getline(in, line)) {
    ++line_no;
    walk.clear();
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      TypeId t = 0;
      auto [q, ec] = std::from_chars(p, end, t);
      if (ec != std::errc{}) throw ParseError("invalid type id in corpus", line_no);
      walk.push_back(t);
      p = q;
      if (p < end && *p != ' ' && *p != '\t' && *p != '\r')
        throw ParseError("invalid type id in corpus", line_no);
    }
    if (!walk.empty()) corpus.append(walk);
  }
  return corpus;
}

}  // namespace arw
