#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "arw/graph.hpp"
#include "arw/type_map.hpp"
#include "arw/walk.hpp"

namespace arw {

struct EmbeddingConfig {
  std::size_t dims = 128;
  std::size_t window = 10;
  std::size_t negatives = 5;
  std::size_t epochs = 1;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  void validate() const;
};

/// m x d float matrix, one row per type, with the type signatures.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dims, std::vector<std::string> signatures = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dims() const noexcept { return dims_; }

  std::span<float> row(std::size_t r) { return {values_.data() + r * dims_, dims_}; }
  std::span<const float> row(std::size_t r) const { return {values_.data() + r * dims_, dims_}; }

  std::vector<float>& values() noexcept { return values_; }
  const std::vector<float>& values() const noexcept { return values_; }
  const std::vector<std::string>& signatures() const noexcept { return signatures_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<float> values_;
  std::vector<std::string> signatures_;
};

struct TrainedEmbedding {
  EmbeddingMatrix types;    // Z, the learned type embeddings
  EmbeddingMatrix context;  // C, output vectors used only during training
  std::vector<double> epoch_loss;  // mean pair loss per epoch
};

template <typename T>
T sigmoid(T x) {
  if (x >= 0) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

/// log(sigmoid(x)) without overflow.
template <typename T>
T log_sigmoid(T x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

/// Negative-sampling loss of one (center, context) pair:
///   -log s(z . c) - sum_k log s(-z . n_k)
/// `negatives` holds k rows of length d back to back.
template <typename T>
T sgns_loss(std::span<const T> center, std::span<const T> context,
            std::span<const T> negatives) {
  const std::size_t d = center.size();
  auto dot = [&](const T* b) {
    T acc = 0;
    for (std::size_t i = 0; i < d; ++i) acc += center[i] * b[i];
    return acc;
  };
  T loss = -log_sigmoid(dot(context.data()));
  for (std::size_t k = 0; k * d < negatives.size(); ++k)
    loss -= log_sigmoid(-dot(negatives.data() + k * d));
  return loss;
}

/// d loss / d score for a sample with label 1 (context) or 0 (noise).
template <typename T>
T sgns_score_gradient(T score, T label) {
  return sigmoid(score) - label;
}

/// Analytic gradient of sgns_loss. Outputs are resized to match the inputs.
template <typename T>
T sgns_gradient(std::span<const T> center, std::span<const T> context,
                std::span<const T> negatives, std::vector<T>& grad_center,
                std::vector<T>& grad_context, std::vector<T>& grad_negatives) {
  const std::size_t d = center.size();
  grad_center.assign(d, T(0));
  grad_context.assign(d, T(0));
  grad_negatives.assign(negatives.size(), T(0));
  auto accumulate = [&](const T* row, T* grad_row, T label) {
    T score = 0;
    for (std::size_t i = 0; i < d; ++i) score += center[i] * row[i];
    const T g = sgns_score_gradient(score, label);
    for (std::size_t i = 0; i < d; ++i) {
      grad_center[i] += g * row[i];
      grad_row[i] += g * center[i];
    }
  };
  accumulate(context.data(), grad_context.data(), T(1));
  for (std::size_t k = 0; k * d < negatives.size(); ++k)
    accumulate(negatives.data() + k * d, grad_negatives.data() + k * d, T(0));
  return sgns_loss(center, context, negatives);
}

/// Skip-gram with negative sampling over the type corpus.
///
/// Each token is a center; contexts are the tokens within a window drawn
/// uniformly from [1, window] on each side. Negatives follow the unigram
/// distribution raised to 3/4. The learning rate decays linearly to
/// initial_lr * 1e-4. Z starts uniform in (-0.5/d, 0.5/d) and C at zero.
/// With threads == 1 the result is a pure function of the inputs; with more
/// threads, workers update Z and C without locking.
TrainedEmbedding train_skipgram(const WalkCorpus& corpus, std::size_t vocab_size,
                                const EmbeddingConfig& config,
                                std::vector<std::string> signatures = {});

/// Row of the node's type. Same-typed nodes share the vector.
std::span<const float> node_embedding(const EmbeddingMatrix& embedding, const TypeMap& types,
                                      NodeId node);

/// Stored size: 4 bytes per value plus each signature with a terminator.
std::size_t embedding_size_bytes(std::size_t rows, std::size_t dims,
                                 std::span<const std::string> signatures);
std::size_t embedding_size_bytes(const EmbeddingMatrix& embedding);

/// Text format: "m d" header, then signature followed by d floats per line.
void write_embedding(const std::filesystem::path& path, const EmbeddingMatrix& embedding);
EmbeddingMatrix load_embedding(const std::filesystem::path& path);

/// Node-level export: "n d" header, then external id and d floats per line.
void write_node_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& embedding,
                           const TypeMap& types, const Graph& graph);

}  // namespace arw
