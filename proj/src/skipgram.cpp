#include "arw/skipgram.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "arw/alias.hpp"
#include "arw/error.hpp"
#include "arw/random.hpp"

namespace arw {

void EmbeddingConfig::validate() const {
  if (dims < 1) throw InvalidArgument("embedding dimensions must be >= 1");
  if (window < 1) throw InvalidArgument("window must be >= 1");
  if (negatives < 1) throw InvalidArgument("negative sample count must be >= 1");
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (!(initial_lr > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (threads < 1) throw InvalidArgument("thread count must be >= 1");
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dims,
                                 std::vector<std::string> signatures)
    : rows_(rows), dims_(dims), values_(rows * dims, 0.0f), signatures_(std::move(signatures)) {
  if (signatures_.empty()) {
    signatures_.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) signatures_[r] = std::to_string(r);
  }
  if (signatures_.size() != rows) throw InvalidArgument("signature count does not match rows");
}

namespace {

struct NoiseDistribution {
  AliasTable table;
  std::vector<TypeId> ids;

  TypeId sample(SplitMix64& rng) const { return ids[table.sample(rng)]; }
};

NoiseDistribution make_noise(const WalkCorpus& corpus, std::size_t vocab_size) {
  std::vector<std::uint64_t> counts(vocab_size, 0);
  for (TypeId t : corpus.tokens) ++counts[t];
  NoiseDistribution noise;
  std::vector<double> weights;
  for (std::size_t t = 0; t < vocab_size; ++t)
    if (counts[t] > 0) {
      noise.ids.push_back(static_cast<TypeId>(t));
      weights.push_back(std::pow(static_cast<double>(counts[t]), 0.75));
    }
  noise.table = AliasTable(weights);
  return noise;
}

struct WorkerStats {
  double loss = 0.0;
  std::uint64_t pairs = 0;
};

}  // namespace

TrainedEmbedding train_skipgram(const WalkCorpus& corpus, std::size_t vocab_size,
                                const EmbeddingConfig& config,
                                std::vector<std::string> signatures) {
  config.validate();
  if (corpus.num_tokens() == 0) throw InvalidArgument("cannot train on an empty corpus");
  if (vocab_size == 0) throw InvalidArgument("vocabulary is empty");
  for (TypeId t : corpus.tokens)
    if (t >= vocab_size)
      throw InvalidArgument("type id " + std::to_string(t) + " outside vocabulary of size " +
                            std::to_string(vocab_size));

  const std::size_t d = config.dims;
  TrainedEmbedding out{EmbeddingMatrix(vocab_size, d, signatures),
                       EmbeddingMatrix(vocab_size, d, signatures), {}};
  {
    SplitMix64 init(derive_seed(config.seed, 0x5eed));
    for (float& v : out.types.values())
      v = static_cast<float>((init.uniform() - 0.5) / static_cast<double>(d));
  }
  const NoiseDistribution noise = make_noise(corpus, vocab_size);

  float* Z = out.types.values().data();
  float* C = out.context.values().data();
  const std::size_t total_tokens = corpus.num_tokens() * config.epochs;
  std::atomic<std::size_t> processed{0};
  const std::size_t threads = std::min(config.threads, corpus.num_walks());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<WorkerStats> stats(threads);
    auto work = [&](std::size_t worker, std::size_t begin, std::size_t end) {
      SplitMix64 rng(derive_seed(config.seed, epoch + 1, worker));
      std::vector<float> grad(d);
      WorkerStats& st = stats[worker];
      std::size_t local = 0;
      double lr = config.initial_lr;
      for (std::size_t w = begin; w < end; ++w) {
        auto walk = corpus.walk(w);
        const std::size_t len = walk.size();
        for (std::size_t i = 0; i < len; ++i) {
          if (++local == 1000) {
            processed.fetch_add(local, std::memory_order_relaxed);
            local = 0;
          }
          const double progress =
              static_cast<double>(processed.load(std::memory_order_relaxed) + local) /
              static_cast<double>(total_tokens + 1);
          lr = config.initial_lr * std::max(1e-4, 1.0 - progress);

          const std::size_t b = static_cast<std::size_t>(rng.below(config.window)) + 1;
          const std::size_t lo = i >= b ? i - b : 0;
          const std::size_t hi = std::min(len - 1, i + b);
          float* z = Z + static_cast<std::size_t>(walk[i]) * d;
          for (std::size_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const TypeId target = walk[j];
            std::fill(grad.begin(), grad.end(), 0.0f);
            for (std::size_t s = 0; s <= config.negatives; ++s) {
              TypeId row;
              float label;
              if (s == 0) {
                row = target;
                label = 1.0f;
              } else {
                row = noise.sample(rng);
                if (row == target) continue;
                label = 0.0f;
              }
              float* c = C + static_cast<std::size_t>(row) * d;
              float score = 0.0f;
              for (std::size_t k = 0; k < d; ++k) score += z[k] * c[k];
              const float g = -static_cast<float>(lr) * sgns_score_gradient(score, label);
              st.loss -= label > 0.0f ? log_sigmoid(static_cast<double>(score))
                                      : log_sigmoid(-static_cast<double>(score));
              for (std::size_t k = 0; k < d; ++k) grad[k] += g * c[k];
              for (std::size_t k = 0; k < d; ++k) c[k] += g * z[k];
            }
            for (std::size_t k = 0; k < d; ++k) z[k] += grad[k];
            ++st.pairs;
          }
        }
      }
      processed.fetch_add(local, std::memory_order_relaxed);
    };

    const std::size_t walks = corpus.num_walks();
    if (threads <= 1) {
      work(0, 0, walks);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back(work, t, walks * t / threads, walks * (t + 1) / threads);
      for (auto& th : pool) th.join();
    }
    double loss = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& st : stats) {
      loss += st.loss;
      pairs += st.pairs;
    }
    out.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }
  return out;
}

std::span<const float> node_embedding(const EmbeddingMatrix& embedding, const TypeMap& types,
                                      NodeId node) {
  if (node >= types.num_nodes())
    throw std::out_of_range("node index " + std::to_string(node) + " out of range");
  const TypeId t = types.type_of(node);
  if (t >= embedding.rows()) throw InvalidArgument("node type has no embedding row");
  return embedding.row(t);
}

std::size_t embedding_size_bytes(std::size_t rows, std::size_t dims,
                                 std::span<const std::string> signatures) {
  std::size_t bytes = rows * dims * sizeof(float);
  for (const auto& s : signatures) bytes += s.size() + 1;
  return bytes;
}

std::size_t embedding_size_bytes(const EmbeddingMatrix& embedding) {
  return embedding_size_bytes(embedding.rows(), embedding.dims(), embedding.signatures());
}

namespace {

void append_float(std::string& line, float v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  line += ' ';
  line.append(buf, p);
}

}  // namespace

void write_embedding(const std::filesystem::path& path, const EmbeddingMatrix& embedding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << embedding.rows() << ' ' << embedding.dims() << '\n';
  std::string line;
  for (std::size_t r = 0; r < embedding.rows(); ++r) {
    line = embedding.signatures()[r];
    for (float v : embedding.row(r)) append_float(line, v);
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

EmbeddingMatrix load_embedding(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding '" + path.string() + "'");
  std::size_t rows = 0, dims = 0;
  if (!(in >> rows >> dims)) throw ParseError("missing 'm d' header", 1);
  std::vector<std::string> sigs(rows);
  std::vector<float> values(rows * dims);
  std::string token;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!(in >> sigs[r])) throw ParseError("missing signature", r + 2);
    for (std::size_t k = 0; k < dims; ++k) {
      if (!(in >> token)) throw ParseError("missing value", r + 2);
      float v = 0;
      auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc{} || p != token.data() + token.size())
        throw ParseError("invalid value '" + token + "'", r + 2);
      values[r * dims + k] = v;
    }
  }
  EmbeddingMatrix e(rows, dims, std::move(sigs));
  e.values() = std::move(values);
  return e;
}

void write_node_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& embedding,
                           const TypeMap& types, const Graph& graph) {
  if (types.num_nodes() != graph.num_nodes())
    throw InvalidArgument("type map does not cover the graph");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << graph.num_nodes() << ' ' << embedding.dims() << '\n';
  std::string line;
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    line = std::to_string(graph.external_id(v));
    for (float x : node_embedding(embedding, types, v)) append_float(line, x);
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace arw
