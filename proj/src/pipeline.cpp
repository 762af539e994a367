#include "arw/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "arw/error.hpp"
#include "arw/graphlets.hpp"
#include "arw/random.hpp"

namespace arw {

TypeMapping parse_type_mapping(const std::string& name) {
  if (name == "concat") return TypeMapping::concat;
  if (name == "identity") return TypeMapping::identity;
  if (name == "argmax") return TypeMapping::argmax;
  if (name == "kmeans") return TypeMapping::kmeans;
  throw InvalidArgument("unknown type mapping '" + name +
                        "' (expected concat, identity, argmax or kmeans)");
}

std::string to_string(TypeMapping mapping) {
  switch (mapping) {
    case TypeMapping::concat: return "concat";
    case TypeMapping::identity: return "identity";
    case TypeMapping::argmax: return "argmax";
    case TypeMapping::kmeans: return "kmeans";
  }
  return "?";
}

void TypingConfig::validate() const {
  binning.validate();
  const bool learned = mapping == TypeMapping::argmax || mapping == TypeMapping::kmeans;
  if (learned && rank < 1) throw InvalidArgument("learned mappings need a rank >= 1");
  if (mapping == TypeMapping::kmeans && clusters < 1)
    throw InvalidArgument("k-means mapping needs a cluster count >= 1");
  if (!(factor_lambda >= 0.0)) throw InvalidArgument("factorization lambda must be >= 0");
  if (learned && factor_iterations < 1)
    throw InvalidArgument("factorization needs at least one iteration");
}

Typing assign_types(const Graph& graph, const TypingConfig& config,
                    const AttributeMatrix* attrs) {
  config.validate();
  Typing out;
  if (config.mapping == TypeMapping::identity) {
    out.types = map_identity(graph);
    return out;
  }
  AttributeMatrix base = attrs ? *attrs : count_graphlets(graph);
  if (base.rows() != graph.num_nodes())
    throw InvalidArgument("attribute rows do not match the node count");
  if (!config.columns.empty()) base = base.select(config.columns);
  base.require_finite();

  if (config.mapping == TypeMapping::concat) {
    out.attributes = transform(base, config.binning);
    out.types = map_concat(out.attributes);
    return out;
  }
  out.attributes = std::move(base);
  FactorizeOptions opts;
  opts.rank = config.rank;
  opts.iterations = config.factor_iterations;
  opts.lambda = config.factor_lambda;
  opts.seed = config.seed;
  FactorizationModel model = factorize(out.attributes, opts);
  out.types = config.mapping == TypeMapping::argmax
                  ? argmax_types(model)
                  : kmeans_types(model, config.clusters, 100, config.seed);
  out.model = std::move(model);
  return out;
}

EmbeddingRun embed_graph(const Graph& graph, const TypingConfig& typing, const WalkConfig& walk,
                         const EmbeddingConfig& embedding, const AttributeMatrix* attrs) {
  walk.validate();
  embedding.validate();
  EmbeddingRun run;
  run.typing = assign_types(graph, typing, attrs);
  const TransitionTable table(graph, walk.p, walk.q);
  run.corpus = generate_corpus(table, run.typing.types, walk);
  run.embedding = train_skipgram(run.corpus, run.typing.types.num_types(), embedding,
                                 run.typing.types.vocabulary());
  return run;
}

void LinkPredConfig::validate() const {
  typing.validate();
  walk.validate();
  embedding.validate();
  if (operators.empty()) throw InvalidArgument("no edge operator selected");
  if (repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw InvalidArgument("split fraction must lie in (0, 1)");
  if (!(train_share > 0.0 && train_share < 1.0))
    throw InvalidArgument("training share must lie in (0, 1)");
  for (double v : pq_grid)
    if (!(v > 0.0)) throw InvalidArgument("p/q grid values must be > 0");
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double LinkPredRow::mean_auc() const { return mean(auc); }
double LinkPredRow::std_auc() const { return stddev(auc); }
double LinkPredRow::mean_control_auc() const { return mean(control_auc); }

namespace {

struct Labeled {
  std::vector<NodePair> train_pairs, test_pairs;
  std::vector<int> train_labels, test_labels;
};

// Stratified split of positives and negatives into classifier train/test.
Labeled label_pairs(const LinkSplit& split, double train_share, std::uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, 0x1abe1));
  Labeled out;
  auto deal = [&](std::vector<NodePair> pairs, int label) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const auto cut = static_cast<std::size_t>(
        std::llround(train_share * static_cast<double>(pairs.size())));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      (i < cut ? out.train_pairs : out.test_pairs).push_back(pairs[i]);
      (i < cut ? out.train_labels : out.test_labels).push_back(label);
    }
  };
  deal(split.positives, 1);
  deal(split.negatives, 0);
  return out;
}

struct Scores {
  double auc = 0.0;
  double control = 0.0;
};

Scores score_operator(const EmbeddingRun& run, const Labeled& data, EdgeOperator op,
                      const LogRegOptions& options, bool control, std::uint64_t seed) {
  const auto& emb = run.embedding.types;
  const auto& types = run.typing.types;
  const Eigen::MatrixXd Xtrain = edge_features(emb, types, data.train_pairs, op);
  const Eigen::MatrixXd Xtest = edge_features(emb, types, data.test_pairs, op);
  Scores s;
  const auto model = train_logreg(Xtrain, data.train_labels, options);
  Eigen::VectorXd p = model.predict(Xtest);
  s.auc = auc(std::span<const double>(p.data(), p.size()), data.test_labels);
  if (control) {
    std::vector<int> permuted = data.train_labels;
    SplitMix64 rng(derive_seed(seed, 0xc0de));
    std::shuffle(permuted.begin(), permuted.end(), rng);
    const auto null_model = train_logreg(Xtrain, permuted, options);
    p = null_model.predict(Xtest);
    s.control = auc(std::span<const double>(p.data(), p.size()), data.test_labels);
  }
  return s;
}

// Picks (p, q) from the grid by mean-operator AUC on a validation split of
// the residual graph of the first repetition.
std::pair<double, double> tune_pq(const Graph& graph, const LinkPredConfig& config) {
  const std::uint64_t s = derive_seed(config.seed, 0x7e57);
  const LinkSplit outer = split_edges(graph, config.fraction, config.preserve_degree, s);
  const LinkSplit inner = split_edges(outer.train_graph, config.fraction, config.preserve_degree,
                                      derive_seed(s, 1));
  const Labeled data = label_pairs(inner, config.train_share, s);
  double best = -1.0;
  std::pair<double, double> best_pq{config.walk.p, config.walk.q};
  for (double p : config.pq_grid)
    for (double q : config.pq_grid) {
      WalkConfig walk = config.walk;
      walk.p = p;
      walk.q = q;
      const auto run = embed_graph(inner.train_graph, config.typing, walk, config.embedding);
      const double a =
          score_operator(run, data, EdgeOperator::mean, config.logreg, false, s).auc;
      if (a > best) {
        best = a;
        best_pq = {p, q};
      }
    }
  return best_pq;
}

}  // namespace

LinkPredReport run_link_prediction(const Graph& graph, const LinkPredConfig& config,
                                   const std::string& dataset) {
  config.validate();
  WalkConfig walk = config.walk;
  if (!config.pq_grid.empty()) std::tie(walk.p, walk.q) = tune_pq(graph, config);

  struct Method {
    std::string name;
    TypingConfig typing;
  };
  std::vector<Method> methods{{"typed", config.typing}};
  if (config.compare_identity) {
    TypingConfig identity = config.typing;
    identity.mapping = TypeMapping::identity;
    methods.push_back({"identity", identity});
  }

  LinkPredReport report;
  report.dataset = dataset;
  for (const auto& m : methods)
    for (EdgeOperator op : config.operators) {
      LinkPredRow row;
      row.method = m.name;
      row.op = op;
      row.p = walk.p;
      row.q = walk.q;
      report.rows.push_back(std::move(row));
    }

  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t seed = derive_seed(config.seed, rep);
    const LinkSplit split = split_edges(graph, config.fraction, config.preserve_degree, seed);
    if (split.positives.empty())
      throw InvalidArgument("split removed no edges; cannot evaluate");
    const Labeled data = label_pairs(split, config.train_share, seed);
    LogRegOptions logreg = config.logreg;
    logreg.seed = derive_seed(seed, 0x109);

    std::size_t row = 0;
    for (const auto& m : methods) {
      WalkConfig w = walk;
      w.seed = derive_seed(config.walk.seed, rep);
      EmbeddingConfig e = config.embedding;
      e.seed = derive_seed(config.embedding.seed, rep);
      const auto run = embed_graph(split.train_graph, m.typing, w, e);
      for (EdgeOperator op : config.operators) {
        const Scores s = score_operator(run, data, op, logreg, config.permuted_control, seed);
        auto& r = report.rows[row++];
        r.seeds.push_back(seed);
        r.auc.push_back(s.auc);
        if (config.permuted_control) r.control_auc.push_back(s.control);
        r.types.push_back(run.typing.types.num_types());
        r.bytes.push_back(embedding_size_bytes(run.embedding.types));
      }
    }
  }

  if (config.compare_identity) {
    const std::size_t k = config.operators.size();
    for (std::size_t i = 0; i < k; ++i) {
      const double p = sign_test(report.rows[i].auc, report.rows[k + i].auc);
      report.rows[i].sign_test_p = p;
      report.rows[k + i].sign_test_p = p;
    }
  }
  return report;
}

namespace {

double mean_of(const std::vector<std::size_t>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void write_linkpred_tsv(std::ostream& out, const LinkPredReport& report) {
  out << "dataset\tmethod\toperator\tp\tq\trepetitions\tauc_mean\tauc_std\tcontrol_auc_mean"
         "\tm_mean\tsigma_bytes_mean\tlog_space\tsign_test_p\tauc_per_seed\n";
  // Same reference as space_report: the smallest identity row, else the
  // smallest row overall.
  const bool has_baseline = std::any_of(report.rows.begin(), report.rows.end(),
                                        [](const auto& r) { return r.method == "identity"; });
  double sigma_min = std::numeric_limits<double>::infinity();
  for (const auto& r : report.rows)
    if (!has_baseline || r.method == "identity") sigma_min = std::min(sigma_min, mean_of(r.bytes));
  for (const auto& r : report.rows) {
    out << report.dataset << '\t' << r.method << '\t' << to_string(r.op) << '\t'
        << format_number(r.p) << '\t' << format_number(r.q) << '\t' << r.auc.size() << '\t'
        << std::setprecision(6) << r.mean_auc() << '\t' << r.std_auc() << '\t';
    if (r.control_auc.empty())
      out << "NA";
    else
      out << r.mean_control_auc();
    const double sigma = mean_of(r.bytes);
    out << '\t' << mean_of(r.types) << '\t' << sigma << '\t'
        << std::log10(sigma_min / sigma) << '\t';
    if (r.sign_test_p)
      out << *r.sign_test_p;
    else
      out << "NA";
    out << '\t';
    for (std::size_t i = 0; i < r.auc.size(); ++i)
      out << (i ? "," : "") << r.seeds[i] << ':' << r.auc[i];
    out << '\n';
  }
}

void print_linkpred_table(std::ostream& out, const LinkPredReport& report) {
  out << std::left << std::setw(10) << "method" << std::setw(13) << "operator" << std::setw(20)
      << "AUC (mean +- std)" << std::setw(12) << "control" << std::setw(10) << "m"
      << "sigma (bytes)\n";
  for (const auto& r : report.rows) {
    std::ostringstream auc_text;
    auc_text << std::fixed << std::setprecision(4) << r.mean_auc() << " +- " << r.std_auc();
    std::ostringstream control;
    if (r.control_auc.empty())
      control << "-";
    else
      control << std::fixed << std::setprecision(4) << r.mean_control_auc();
    out << std::setw(10) << r.method << std::setw(13) << to_string(r.op) << std::setw(20)
        << auc_text.str() << std::setw(12) << control.str() << std::setw(10)
        << static_cast<std::size_t>(std::llround(mean_of(r.types)))
        << static_cast<std::size_t>(std::llround(mean_of(r.bytes))) << '\n';
  }
}

}  // namespace arw
