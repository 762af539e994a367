#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "arw/attributes.hpp"
#include "arw/error.hpp"
#include "arw/factorization.hpp"
#include "arw/graph.hpp"
#include "arw/graphlets.hpp"
#include "arw/pipeline.hpp"
#include "arw/space.hpp"

namespace arw::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct MissingFile : Error {
  using Error::Error;
};

/// Every flag of every subcommand; unused ones keep their defaults.
struct Options {
  std::string subcommand;

  // inputs
  std::string graph, attrs, types_in, vocab_in, corpus_in, model_in;
  std::vector<std::string> embeddings;  // name=path, space only
  // outputs
  std::string out, vocab_out, typemap_out, trace_out, model_out;
  std::string format = "types";

  // typing
  std::vector<std::string> columns;
  std::string mapping = "concat";
  std::string binning = "log";
  double alpha = 0.5;
  std::size_t rank = 0;
  std::size_t clusters = 0;
  double factor_lambda = 0.1;
  std::size_t factor_iterations = 100;
  bool identity_types = false;

  // walks
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  double p = 1.0;
  double q = 1.0;

  // embedding
  std::size_t dims = 128;
  std::size_t window = 10;
  std::size_t negatives = 5;
  std::size_t epochs = 1;
  double lr = 0.025;

  // link prediction
  std::vector<std::string> operators{"mean", "hadamard"};
  std::size_t repetitions = 10;
  double fraction = 0.5;
  bool preserve_degree = false;
  double train_share = 0.5;
  std::vector<double> pq_grid;
  bool compare_identity = false;
  bool no_control = false;
  std::size_t folds = 10;
  double label_fraction = 0.1;
  std::string dataset;

  // execution
  std::size_t threads = 1;
  bool deterministic = false;
  std::uint64_t seed = 1;
};

/// Typed, validated view of Options.
struct Resolved {
  TypingConfig typing;
  WalkConfig walk;
  EmbeddingConfig embedding;
  LinkPredConfig linkpred;
};

Resolved resolve(Options& o) {
  if (o.deterministic) o.threads = 1;
  if (o.threads < 1) throw InvalidArgument("thread count must be >= 1");
  Resolved r;
  r.typing.mapping = o.identity_types ? TypeMapping::identity : parse_type_mapping(o.mapping);
  r.typing.columns = o.columns;
  r.typing.binning.scheme = parse_binning_scheme(o.binning);
  r.typing.binning.alpha = o.alpha;
  r.typing.rank = o.rank;
  r.typing.clusters = o.clusters;
  r.typing.factor_lambda = o.factor_lambda;
  r.typing.factor_iterations = o.factor_iterations;
  r.typing.seed = o.seed;
  r.typing.validate();

  r.walk.walks_per_node = o.walks_per_node;
  r.walk.walk_length = o.walk_length;
  r.walk.p = o.p;
  r.walk.q = o.q;
  r.walk.seed = o.seed;
  r.walk.threads = o.threads;
  r.walk.keep_trace = !o.trace_out.empty();
  r.walk.validate();

  r.embedding.dims = o.dims;
  r.embedding.window = o.window;
  r.embedding.negatives = o.negatives;
  r.embedding.epochs = o.epochs;
  r.embedding.initial_lr = o.lr;
  r.embedding.seed = o.seed;
  r.embedding.threads = o.threads;
  r.embedding.validate();

  auto& lp = r.linkpred;
  lp.typing = r.typing;
  lp.walk = r.walk;
  lp.walk.keep_trace = false;
  lp.embedding = r.embedding;
  lp.operators.clear();
  for (const auto& name : o.operators) lp.operators.push_back(parse_edge_operator(name));
  lp.repetitions = o.repetitions;
  lp.fraction = o.fraction;
  lp.preserve_degree = o.preserve_degree;
  lp.train_share = o.train_share;
  lp.logreg.folds = o.folds;
  lp.logreg.label_fraction = o.label_fraction;
  lp.permuted_control = !o.no_control;
  lp.compare_identity = o.compare_identity;
  lp.pq_grid = o.pq_grid;
  lp.seed = o.seed;
  if (o.subcommand == "linkpred") lp.validate();

  if (o.format != "types" && o.format != "nodes")
    throw InvalidArgument("output format must be 'types' or 'nodes'");
  return r;
}

json manifest(const Options& o, const Resolved& r) {
  json inputs = json::object(), outputs = json::object();
  auto put = [](json& j, const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  put(inputs, "graph", o.graph);
  put(inputs, "attrs", o.attrs);
  put(inputs, "types", o.types_in);
  put(inputs, "vocab", o.vocab_in);
  put(inputs, "corpus", o.corpus_in);
  put(inputs, "model", o.model_in);
  if (!o.embeddings.empty()) inputs["embeddings"] = o.embeddings;
  put(outputs, "out", o.out);
  put(outputs, "vocab", o.vocab_out);
  put(outputs, "typemap", o.typemap_out);
  put(outputs, "trace", o.trace_out);
  put(outputs, "model", o.model_out);

  json typing = {{"mapping", to_string(r.typing.mapping)},
                 {"columns", r.typing.columns},
                 {"binning", to_string(r.typing.binning.scheme)},
                 {"alpha", r.typing.binning.alpha},
                 {"rank", r.typing.rank},
                 {"clusters", r.typing.clusters},
                 {"factor_lambda", r.typing.factor_lambda},
                 {"factor_iterations", r.typing.factor_iterations}};
  json walk = {{"walks_per_node", r.walk.walks_per_node},
               {"walk_length", r.walk.walk_length},
               {"p", r.walk.p},
               {"q", r.walk.q}};
  json embedding = {{"dims", r.embedding.dims},
                    {"window", r.embedding.window},
                    {"negatives", r.embedding.negatives},
                    {"epochs", r.embedding.epochs},
                    {"initial_lr", r.embedding.initial_lr}};
  std::vector<std::string> ops;
  for (auto op : r.linkpred.operators) ops.push_back(to_string(op));
  json linkpred = {{"operators", ops},
                   {"repetitions", r.linkpred.repetitions},
                   {"fraction", r.linkpred.fraction},
                   {"preserve_degree", r.linkpred.preserve_degree},
                   {"train_share", r.linkpred.train_share},
                   {"folds", r.linkpred.logreg.folds},
                   {"label_fraction", r.linkpred.logreg.label_fraction},
                   {"l2_grid", r.linkpred.logreg.lambda_grid},
                   {"permuted_control", r.linkpred.permuted_control},
                   {"compare_identity", r.linkpred.compare_identity},
                   {"pq_grid", r.linkpred.pq_grid}};
  return {{"subcommand", o.subcommand},
          {"inputs", inputs},
          {"outputs", outputs},
          {"typing", typing},
          {"walk", walk},
          {"embedding", embedding},
          {"linkpred", linkpred},
          {"threads", o.threads},
          {"deterministic", o.deterministic},
          {"seed", o.seed}};
}

void require_file(const std::string& path) {
  if (!path.empty() && !fs::is_regular_file(path))
    throw MissingFile("input file '" + path + "' does not exist");
}

void require_output(const std::string& path, const char* flag) {
  if (path.empty()) throw InvalidArgument(std::string("missing output path ") + flag);
}

// Attribute matrix from --attrs, else graphlet counts.
AttributeMatrix base_attributes(const Options& o, const Graph& graph) {
  return o.attrs.empty() ? count_graphlets(graph) : load_attributes(o.attrs, graph);
}

// Types from a persisted typemap, an applied model or the typing config.
TypeMap load_or_assign_types(const Options& o, const Resolved& r, const Graph& graph) {
  if (!o.types_in.empty()) return load_typemap(o.types_in, graph, o.vocab_in);
  if (!o.model_in.empty()) {
    const FactorizationModel model = load_model(o.model_in);
    const AttributeMatrix attrs = base_attributes(o, graph).select(model.columns);
    return inductive_assign(attrs, model);
  }
  if (r.typing.mapping == TypeMapping::identity) return map_identity(graph);
  const AttributeMatrix attrs = base_attributes(o, graph);
  return assign_types(graph, r.typing, &attrs).types;
}

int cmd_features(const Options& o, const Resolved&, std::ostream&) {
  require_output(o.out, "--out");
  const Graph graph = load_edge_list(o.graph);
  write_attributes(o.out, graph, count_graphlets(graph));
  return 0;
}

int cmd_types(const Options& o, const Resolved& r, std::ostream& out) {
  require_output(o.out, "--out");
  const Graph graph = load_edge_list(o.graph);
  TypeMap types;
  if (!o.model_in.empty() || r.typing.mapping == TypeMapping::identity) {
    types = load_or_assign_types(o, r, graph);
  } else {
    const AttributeMatrix attrs = base_attributes(o, graph);
    Typing typing = assign_types(graph, r.typing, &attrs);
    if (!o.model_out.empty()) {
      if (!typing.model) throw InvalidArgument("--model-out needs a learned mapping");
      save_model(o.model_out, *typing.model);
    }
    types = std::move(typing.types);
  }
  write_typemap(o.out, graph, types);
  if (!o.vocab_out.empty()) write_vocabulary(o.vocab_out, types);
  out << "nodes\t" << types.num_nodes() << "\ntypes\t" << types.num_types() << '\n';
  return 0;
}

int cmd_walks(const Options& o, const Resolved& r, std::ostream& out) {
  require_output(o.out, "--out");
  const Graph graph = load_edge_list(o.graph);
  const TypeMap types = load_or_assign_types(o, r, graph);
  const TransitionTable table(graph, r.walk.p, r.walk.q);
  const WalkCorpus corpus = generate_corpus(table, types, r.walk);
  write_corpus(o.out, corpus);
  if (!o.trace_out.empty()) write_trace(o.trace_out, corpus, graph);
  if (!o.typemap_out.empty()) write_typemap(o.typemap_out, graph, types);
  if (!o.vocab_out.empty()) write_vocabulary(o.vocab_out, types);
  out << "walks\t" << corpus.num_walks() << "\ntokens\t" << corpus.num_tokens() << '\n';
  return 0;
}

int cmd_embed(const Options& o, const Resolved& r, std::ostream& out) {
  require_output(o.out, "--out");
  const Graph graph = load_edge_list(o.graph);
  const TypeMap types = load_or_assign_types(o, r, graph);
  WalkCorpus corpus;
  if (!o.corpus_in.empty()) {
    if (o.types_in.empty())
      throw InvalidArgument("--corpus needs the --types map the walks were generated with");
    corpus = load_corpus(o.corpus_in);
  } else {
    const TransitionTable table(graph, r.walk.p, r.walk.q);
    corpus = generate_corpus(table, types, r.walk);
  }
  const TrainedEmbedding trained =
      train_skipgram(corpus, types.num_types(), r.embedding, types.vocabulary());
  if (o.format == "nodes")
    write_node_embeddings(o.out, trained.types, types, graph);
  else
    write_embedding(o.out, trained.types);
  if (!o.typemap_out.empty()) write_typemap(o.typemap_out, graph, types);
  if (!o.vocab_out.empty()) write_vocabulary(o.vocab_out, types);
  out << "nodes\t" << graph.num_nodes() << "\ntypes\t" << types.num_types() << "\ndims\t"
      << r.embedding.dims << "\nsigma_bytes\t" << embedding_size_bytes(trained.types)
      << "\nloss\t" << trained.epoch_loss.back() << '\n';
  return 0;
}

int cmd_linkpred(const Options& o, const Resolved& r, std::ostream& out) {
  const Graph graph = load_edge_list(o.graph);
  const std::string dataset = o.dataset.empty() ? fs::path(o.graph).stem().string() : o.dataset;
  const LinkPredReport report = run_link_prediction(graph, r.linkpred, dataset);
  if (o.out.empty()) {
    write_linkpred_tsv(out, report);
  } else {
    std::ofstream file(o.out);
    if (!file) throw Error("cannot write '" + o.out + "'");
    write_linkpred_tsv(file, report);
    print_linkpred_table(out, report);
  }
  return 0;
}

int cmd_space(const Options& o, const Resolved& r, std::ostream& out) {
  const Graph graph = load_edge_list(o.graph);
  const AttributeMatrix graphlets = count_graphlets(graph);
  const auto table = type_count_table(graphlets, r.typing.binning);
  const AttributeMatrix binned = transform(graphlets, r.typing.binning);

  std::vector<SpaceInput> inputs;
  std::vector<std::string> attributes;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const TypeMap types = map_concat(binned.select(table[i].columns));
    inputs.push_back({"typed-" + std::to_string(i + 1), types.num_types(), r.embedding.dims,
                      types.vocabulary(), false});
    attributes.push_back(table[i].subset);
  }
  const TypeMap identity = map_identity(graph);
  inputs.push_back(
      {"identity", identity.num_types(), r.embedding.dims, identity.vocabulary(), true});
  attributes.push_back("-");
  for (const auto& spec : o.embeddings) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--embedding expects name=path");
    const EmbeddingMatrix e = load_embedding(spec.substr(eq + 1));
    inputs.push_back(SpaceInput::from(spec.substr(0, eq), e));
    attributes.push_back("file");
  }
  const auto report = space_report(inputs);

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw Error("cannot write '" + o.out + "'");
  }
  std::ostream& tsv = o.out.empty() ? out : file;
  const std::string dataset = o.dataset.empty() ? fs::path(o.graph).stem().string() : o.dataset;
  tsv << "dataset\tname\tattributes\tm\td\tsigma_bytes\tlog_space\n";
  for (std::size_t i = 0; i < report.size(); ++i)
    tsv << dataset << '\t' << report[i].name << '\t' << attributes[i] << '\t' << report[i].rows
        << '\t' << report[i].dims << '\t' << report[i].bytes << '\t' << report[i].log_gain
        << '\n';
  return 0;
}

void add_exec_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  cmd->add_flag("--deterministic", o.deterministic, "Single-threaded, reproducible run");
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_typing_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--attrs", o.attrs, "Attribute TSV (default: graphlet counts)");
  cmd->add_option("--columns", o.columns, "Attribute columns to use, e.g. x2,x3")
      ->delimiter(',');
  cmd->add_option("--mapping", o.mapping, "concat, identity, argmax or kmeans")
      ->capture_default_str();
  cmd->add_option("--binning", o.binning, "log, equal-width or identity")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Binning fraction")->capture_default_str();
  cmd->add_option("--rank", o.rank, "Latent factors F for learned mappings");
  cmd->add_option("--clusters", o.clusters, "Types m for the k-means mapping");
  cmd->add_option("--factor-lambda", o.factor_lambda, "Factorization ridge penalty")
      ->capture_default_str();
  cmd->add_option("--factor-iterations", o.factor_iterations, "ALS sweeps")
      ->capture_default_str();
  cmd->add_flag("--identity-types", o.identity_types, "One type per node");
}

void add_type_input_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--types", o.types_in, "Typemap TSV from 'types'");
  cmd->add_option("--vocab", o.vocab_in, "Vocabulary TSV matching --types");
  cmd->add_option("--model", o.model_in, "Factorization model applied to new attributes");
}

void add_walk_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("-r,--walks-per-node", o.walks_per_node, "Walks per node")
      ->capture_default_str();
  cmd->add_option("-l,--walk-length", o.walk_length, "Steps per walk")->capture_default_str();
  cmd->add_option("-p", o.p, "Return parameter")->capture_default_str();
  cmd->add_option("-q", o.q, "In-out parameter")->capture_default_str();
}

void add_embed_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("-d,--dims", o.dims, "Embedding dimensions")->capture_default_str();
  cmd->add_option("-w,--window", o.window, "Context window")->capture_default_str();
  cmd->add_option("--negatives", o.negatives, "Negative samples per pair")
      ->capture_default_str();
  cmd->add_option("--epochs", o.epochs, "Passes over the corpus")->capture_default_str();
  cmd->add_option("--lr", o.lr, "Initial learning rate")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Attributed random walk embeddings"};
  app.require_subcommand(1);

  auto* features = app.add_subcommand("features", "Per-node graphlet counts");
  features->add_option("--graph", o.graph, "Edge list")->required();
  features->add_option("-o,--out", o.out, "Attribute TSV")->required();
  add_exec_flags(features, o);

  auto* types = app.add_subcommand("types", "Map nodes to types");
  types->add_option("--graph", o.graph, "Edge list")->required();
  types->add_option("-o,--out", o.out, "Typemap TSV")->required();
  types->add_option("--vocab-out", o.vocab_out, "Vocabulary TSV");
  types->add_option("--model-out", o.model_out, "Save the learned factorization");
  types->add_option("--model", o.model_in, "Assign types with a saved factorization");
  add_typing_flags(types, o);
  add_exec_flags(types, o);

  auto* walks = app.add_subcommand("walks", "Generate attributed random walks");
  walks->add_option("--graph", o.graph, "Edge list")->required();
  walks->add_option("-o,--out", o.out, "Corpus of type ids")->required();
  walks->add_option("--trace-out", o.trace_out, "Node-id walks");
  walks->add_option("--typemap-out", o.typemap_out, "Typemap used");
  walks->add_option("--vocab-out", o.vocab_out, "Vocabulary used");
  add_type_input_flags(walks, o);
  add_typing_flags(walks, o);
  add_walk_flags(walks, o);
  add_exec_flags(walks, o);

  auto* embed = app.add_subcommand("embed", "Learn type embeddings");
  embed->add_option("--graph", o.graph, "Edge list")->required();
  embed->add_option("-o,--out", o.out, "Embedding file")->required();
  embed->add_option("--format", o.format, "types (m rows) or nodes (n rows)")
      ->capture_default_str();
  embed->add_option("--typemap-out", o.typemap_out, "Typemap used");
  embed->add_option("--vocab-out", o.vocab_out, "Vocabulary used");
  embed->add_option("--corpus", o.corpus_in, "Corpus from 'walks' (needs --types)");
  add_type_input_flags(embed, o);
  add_typing_flags(embed, o);
  add_walk_flags(embed, o);
  add_embed_flags(embed, o);
  add_exec_flags(embed, o);

  auto* linkpred = app.add_subcommand("linkpred", "Link-prediction benchmark");
  linkpred->add_option("--graph", o.graph, "Edge list")->required();
  linkpred->add_option("-o,--out", o.out, "Report TSV (default: stdout)");
  linkpred->add_option("--dataset", o.dataset, "Name in the report");
  linkpred->add_option("--operators", o.operators, "Edge operators")
      ->delimiter(',')
      ->capture_default_str();
  linkpred->add_option("--repetitions", o.repetitions, "Seeded repetitions")
      ->capture_default_str();
  linkpred->add_option("--fraction", o.fraction, "Share of edges removed")
      ->capture_default_str();
  linkpred->add_flag("--preserve-degree", o.preserve_degree,
                     "Never remove a node's last edge");
  linkpred->add_option("--train-share", o.train_share, "Labeled pairs used for training")
      ->capture_default_str();
  linkpred->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
  linkpred->add_option("--label-fraction", o.label_fraction,
                       "Share of training pairs used to pick the L2 strength")
      ->capture_default_str();
  linkpred->add_option("--pq-grid", o.pq_grid, "Tune p and q over these values, e.g. "
                                                "0.25,0.5,1,2,4")
      ->delimiter(',');
  linkpred->add_flag("--compare-identity", o.compare_identity,
                     "Also run one type per node and sign-test the difference");
  linkpred->add_flag("--no-control", o.no_control, "Skip the permuted-label control");
  add_typing_flags(linkpred, o);
  add_walk_flags(linkpred, o);
  add_embed_flags(linkpred, o);
  add_exec_flags(linkpred, o);

  auto* space = app.add_subcommand("space", "Type counts and embedding sizes");
  space->add_option("--graph", o.graph, "Edge list")->required();
  space->add_option("-o,--out", o.out, "Report TSV (default: stdout)");
  space->add_option("--dataset", o.dataset, "Name in the report");
  space->add_option("--binning", o.binning, "log, equal-width or identity")
      ->capture_default_str();
  space->add_option("--alpha", o.alpha, "Binning fraction")->capture_default_str();
  space->add_option("-d,--dims", o.dims, "Embedding dimensions")->capture_default_str();
  space->add_option("--embedding", o.embeddings, "Extra embedding file as name=path");
  add_exec_flags(space, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  o.subcommand = app.get_subcommands().front()->get_name();

  try {
    Resolved r = resolve(o);
    err << json{{"run_config", manifest(o, r)}}.dump() << '\n';
    for (const auto* path : {&o.graph, &o.attrs, &o.types_in, &o.vocab_in, &o.corpus_in,
                             &o.model_in})
      require_file(*path);
    for (const auto& spec : o.embeddings) {
      const auto eq = spec.find('=');
      if (eq != std::string::npos) require_file(spec.substr(eq + 1));
    }

    if (o.subcommand == "features") return cmd_features(o, r, out);
    if (o.subcommand == "types") return cmd_types(o, r, out);
    if (o.subcommand == "walks") return cmd_walks(o, r, out);
    if (o.subcommand == "embed") return cmd_embed(o, r, out);
    if (o.subcommand == "linkpred") return cmd_linkpred(o, r, out);
    if (o.subcommand == "space") return cmd_space(o, r, out);
    throw InvalidArgument("unknown subcommand");
  } catch (const MissingFile& e) {
    err << "arw: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "arw: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace arw::cli
