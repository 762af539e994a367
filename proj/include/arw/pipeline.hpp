#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arw/attributes.hpp"
#include "arw/binning.hpp"
#include "arw/factorization.hpp"
#include "arw/graph.hpp"
#include "arw/linkpred.hpp"
#include "arw/logreg.hpp"
#include "arw/skipgram.hpp"
#include "arw/type_map.hpp"
#include "arw/walk.hpp"

namespace arw {

enum class TypeMapping { concat, identity, argmax, kmeans };

TypeMapping parse_type_mapping(const std::string& name);
std::string to_string(TypeMapping mapping);

struct TypingConfig {
  TypeMapping mapping = TypeMapping::concat;
  std::vector<std::string> columns;  // attribute columns to use; empty = all
  BinningConfig binning;
  std::size_t rank = 0;      // F, latent factors for learned mappings
  std::size_t clusters = 0;  // m, k-means types
  double factor_lambda = 0.1;
  std::size_t factor_iterations = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Typing {
  AttributeMatrix attributes;  // after column selection and binning
  TypeMap types;
  std::optional<FactorizationModel> model;  // learned mappings only
};

/// Attribute selection, transform and type mapping. Without `attrs` the
/// graphlet counts of `graph` are used.
Typing assign_types(const Graph& graph, const TypingConfig& config,
                    const AttributeMatrix* attrs = nullptr);

struct EmbeddingRun {
  Typing typing;
  WalkCorpus corpus;
  TrainedEmbedding embedding;
};

/// Types, walks and skip-gram in one go.
EmbeddingRun embed_graph(const Graph& graph, const TypingConfig& typing, const WalkConfig& walk,
                         const EmbeddingConfig& embedding,
                         const AttributeMatrix* attrs = nullptr);

struct LinkPredConfig {
  TypingConfig typing;
  WalkConfig walk;
  EmbeddingConfig embedding;
  std::vector<EdgeOperator> operators{EdgeOperator::mean, EdgeOperator::hadamard};
  std::size_t repetitions = 10;
  double fraction = 0.5;
  bool preserve_degree = false;
  double train_share = 0.5;  // share of labeled pairs used to fit the classifier
  LogRegOptions logreg;
  bool permuted_control = true;
  bool compare_identity = false;  // also run identity types for a paired sign test
  std::vector<double> pq_grid;    // when set, p and q are tuned on a validation split
  std::uint64_t seed = 1;

  void validate() const;
};

struct LinkPredRow {
  std::string method;
  EdgeOperator op = EdgeOperator::mean;
  std::vector<std::uint64_t> seeds;
  std::vector<double> auc;
  std::vector<double> control_auc;  // permuted-label control, same splits
  std::vector<std::size_t> types;   // m per repetition
  std::vector<std::size_t> bytes;   // sigma per repetition
  double p = 1.0;
  double q = 1.0;
  std::optional<double> sign_test_p;  // typed vs identity, when compared

  double mean_auc() const;
  double std_auc() const;
  double mean_control_auc() const;
};

struct LinkPredReport {
  std::string dataset;
  std::vector<LinkPredRow> rows;
};

/// Per repetition: split, type and embed the residual graph, fit logistic
/// regression on a share of the labeled pairs and score the rest.
LinkPredReport run_link_prediction(const Graph& graph, const LinkPredConfig& config,
                                   const std::string& dataset = "graph");

void write_linkpred_tsv(std::ostream& out, const LinkPredReport& report);
void print_linkpred_table(std::ostream& out, const LinkPredReport& report);

double mean(const std::vector<double>& v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(const std::vector<double>& v);

}  // namespace arw
