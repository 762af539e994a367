#include "arw/factorization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "arw/error.hpp"
#include "arw/random.hpp"

namespace arw {

Eigen::MatrixXd to_matrix(const AttributeMatrix& attrs) {
  Eigen::MatrixXd X(attrs.rows(), attrs.cols());
  for (std::size_t r = 0; r < attrs.rows(); ++r)
    for (std::size_t c = 0; c < attrs.cols(); ++c) X(r, c) = attrs(r, c);
  return X;
}

double factorization_loss(const Eigen::MatrixXd& X, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& V, double lambda) {
  return (X - U * V.transpose()).squaredNorm() +
         lambda * (U.squaredNorm() + V.squaredNorm());
}

Eigen::MatrixXd solve_factors(const Eigen::MatrixXd& X, const Eigen::MatrixXd& V, double lambda) {
  const Eigen::Index f = V.cols();
  Eigen::MatrixXd gram = V.transpose() * V;
  gram.diagonal().array() += lambda;
  // Explicit inverse so every row goes through the identical arithmetic.
  Eigen::MatrixXd inverse;
  if (lambda > 0.0) {
    inverse = gram.ldlt().solve(Eigen::MatrixXd::Identity(f, f));
  } else {
    inverse = gram.completeOrthogonalDecomposition().pseudoInverse();
  }
  const Eigen::MatrixXd projector = V * inverse;  // k x F
  Eigen::MatrixXd U(X.rows(), f);
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (Eigen::Index j = 0; j < f; ++j) {
      double acc = 0.0;
      for (Eigen::Index c = 0; c < X.cols(); ++c) acc += X(r, c) * projector(c, j);
      U(r, j) = acc;
    }
  }
  return U;
}

FactorizationModel factorize(const AttributeMatrix& attrs, const FactorizeOptions& options) {
  const std::size_t n = attrs.rows();
  const std::size_t k = attrs.cols();
  if (options.rank < 1) throw InvalidArgument("factorization rank must be >= 1");
  if (options.rank > std::min(n, k))
    throw InvalidArgument("factorization rank " + std::to_string(options.rank) +
                          " exceeds min(n, k) = " + std::to_string(std::min(n, k)));
  if (options.iterations < 1) throw InvalidArgument("factorization needs >= 1 iteration");
  if (!(options.lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  attrs.require_finite();

  const Eigen::MatrixXd X = to_matrix(attrs);
  if (X.squaredNorm() == 0.0) throw InvalidArgument("cannot factorize an all-zero matrix");

  const auto F = static_cast<Eigen::Index>(options.rank);
  SplitMix64 rng(derive_seed(options.seed, 0xfac7));
  FactorizationModel model;
  model.rank = options.rank;
  model.lambda = options.lambda;
  model.columns = attrs.names();
  model.U.resize(static_cast<Eigen::Index>(n), F);
  model.V.resize(static_cast<Eigen::Index>(k), F);
  for (Eigen::Index i = 0; i < model.U.size(); ++i) model.U.data()[i] = rng.uniform();
  for (Eigen::Index i = 0; i < model.V.size(); ++i) model.V.data()[i] = rng.uniform();

  model.loss_history.reserve(options.iterations);
  for (std::size_t it = 0; it < options.iterations; ++it) {
    model.V = solve_factors(X.transpose(), model.U, options.lambda);
    model.U = solve_factors(X, model.V, options.lambda);
    model.loss_history.push_back(factorization_loss(X, model.U, model.V, options.lambda));
  }
  return model;
}

namespace {

double squared_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                        const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return acc;
}

double assign_all(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                  std::vector<TypeId>& assignment) {
  double objective = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    TypeId c = nearest_centroid(points.row(i), centroids);
    assignment[static_cast<std::size_t>(i)] = c;
    objective += squared_distance(points.row(i), centroids.row(c));
  }
  return objective;
}

}  // namespace

TypeId nearest_centroid(const Eigen::Ref<const Eigen::RowVectorXd>& point,
                        const Eigen::MatrixXd& centroids) {
  TypeId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(point, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = static_cast<TypeId>(c);
    }
  }
  return best;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t clusters,
                    std::size_t iterations, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (clusters < 1) throw InvalidArgument("k-means needs at least one cluster");
  if (clusters > n)
    throw InvalidArgument("k-means cluster count " + std::to_string(clusters) +
                          " exceeds point count " + std::to_string(n));
  if (iterations < 1) throw InvalidArgument("k-means needs >= 1 iteration");

  const auto m = static_cast<Eigen::Index>(clusters);
  Eigen::MatrixXd centroids(m, points.cols());

  // Farthest-point seeding.
  SplitMix64 rng(derive_seed(seed, 0x6b6d));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  auto first = static_cast<Eigen::Index>(rng.below(n));
  centroids.row(0) = points.row(first);
  for (Eigen::Index c = 1; c < m; ++c) {
    std::size_t pick = 0;
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(static_cast<Eigen::Index>(i)),
                                                         centroids.row(c - 1)));
      if (nearest[i] > far) {
        far = nearest[i];
        pick = i;
      }
    }
    centroids.row(c) = points.row(static_cast<Eigen::Index>(pick));
  }

  KMeansResult result;
  result.assignment.assign(n, 0);
  result.objective_history.push_back(assign_all(points, centroids, result.assignment));

  std::vector<TypeId> next(n);
  std::vector<std::size_t> sizes(clusters);
  for (std::size_t it = 1; it < iterations; ++it) {
    centroids.setZero();
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      centroids.row(result.assignment[i]) += points.row(static_cast<Eigen::Index>(i));
      ++sizes[result.assignment[i]];
    }
    for (Eigen::Index c = 0; c < m; ++c)
      if (sizes[static_cast<std::size_t>(c)] > 0)
        centroids.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
      std::vector<double> spread(n);
      for (std::size_t i = 0; i < n; ++i)
        spread[i] = squared_distance(points.row(static_cast<Eigen::Index>(i)),
                                     centroids.row(result.assignment[i]));
      for (Eigen::Index c = 0; c < m; ++c) {
        if (sizes[static_cast<std::size_t>(c)] > 0) continue;
        const auto pick = static_cast<std::size_t>(
            std::max_element(spread.begin(), spread.end()) - spread.begin());
        centroids.row(c) = points.row(static_cast<Eigen::Index>(pick));
        spread[pick] = -1.0;
      }
    }
    result.objective_history.push_back(assign_all(points, centroids, next));
    if (next == result.assignment) break;
    result.assignment.swap(next);
  }

  // Drop clusters that ended up empty.
  std::vector<std::size_t> count(clusters, 0);
  for (TypeId a : result.assignment) ++count[a];
  std::vector<TypeId> remap(clusters, 0);
  Eigen::Index kept = 0;
  for (std::size_t c = 0; c < clusters; ++c)
    if (count[c] > 0) remap[c] = static_cast<TypeId>(kept++);
  Eigen::MatrixXd compact(kept, points.cols());
  for (std::size_t c = 0; c < clusters; ++c)
    if (count[c] > 0) compact.row(remap[c]) = centroids.row(static_cast<Eigen::Index>(c));
  for (TypeId& a : result.assignment) a = remap[a];
  result.centroids = std::move(compact);
  return result;
}

TypeMap kmeans_types(FactorizationModel& model, std::size_t m, std::size_t iterations,
                     std::uint64_t seed) {
  if (!model.trained()) throw InvalidArgument("factorization model is untrained");
  KMeansResult km = kmeans(model.U, m, iterations, seed);
  model.centroids = km.centroids;
  model.rule = AssignmentRule::nearest_centroid;
  std::vector<std::string> vocab(static_cast<std::size_t>(km.centroids.rows()));
  for (std::size_t c = 0; c < vocab.size(); ++c) vocab[c] = "c" + std::to_string(c);
  return TypeMap::from_assignment(std::move(km.assignment), std::move(vocab));
}

namespace {

std::vector<TypeId> argmax_rows(const Eigen::MatrixXd& U) {
  std::vector<TypeId> types(static_cast<std::size_t>(U.rows()));
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < U.cols(); ++j)
      if (U(i, j) > U(i, best)) best = j;
    types[static_cast<std::size_t>(i)] = static_cast<TypeId>(best);
  }
  return types;
}

std::vector<std::string> factor_vocabulary(std::size_t rank) {
  std::vector<std::string> vocab(rank);
  for (std::size_t j = 0; j < rank; ++j) vocab[j] = "f" + std::to_string(j);
  return vocab;
}

}  // namespace

TypeMap argmax_types(FactorizationModel& model) {
  if (model.U.cols() == 0) throw InvalidArgument("factorization model is untrained");
  model.rule = AssignmentRule::argmax;
  return TypeMap::from_assignment(argmax_rows(model.U),
                                  factor_vocabulary(static_cast<std::size_t>(model.U.cols())));
}

TypeMap inductive_assign(const AttributeMatrix& new_attrs, const FactorizationModel& model) {
  if (!model.trained() || model.rule == AssignmentRule::none)
    throw InvalidArgument("factorization model is untrained or has no type rule");
  if (new_attrs.cols() != static_cast<std::size_t>(model.V.rows()))
    throw InvalidArgument("attribute column count " + std::to_string(new_attrs.cols()) +
                          " does not match the model's " + std::to_string(model.V.rows()));
  new_attrs.require_finite();
  const Eigen::MatrixXd U = solve_factors(to_matrix(new_attrs), model.V, model.lambda);
  if (model.rule == AssignmentRule::argmax)
    return TypeMap::from_assignment(argmax_rows(U),
                                    factor_vocabulary(static_cast<std::size_t>(model.V.cols())));

  std::vector<TypeId> types(static_cast<std::size_t>(U.rows()));
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    types[static_cast<std::size_t>(i)] = nearest_centroid(U.row(i), model.centroids);
  std::vector<std::string> vocab(static_cast<std::size_t>(model.centroids.rows()));
  for (std::size_t c = 0; c < vocab.size(); ++c) vocab[c] = "c" + std::to_string(c);
  return TypeMap::from_assignment(std::move(types), std::move(vocab));
}

// Persistence: a line-oriented text format.
//
//   arw-factorization 1
//   rank <F>
//   lambda <value>
//   rule none|argmax|nearest-centroid
//   columns <k> <name>...
//   loss <count> <values>...
//   matrix U|V|centroids <rows> <cols>
//   <rows lines of cols values>
namespace {

std::string rule_name(AssignmentRule r) {
  switch (r) {
    case AssignmentRule::none: return "none";
    case AssignmentRule::argmax: return "argmax";
    case AssignmentRule::nearest_centroid: return "nearest-centroid";
  }
  return "none";
}

std::string exact(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_matrix(std::ostream& out, const char* name, const Eigen::MatrixXd& M) {
  out << "matrix " << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) out << (c ? "\t" : "") << exact(M(r, c));
    out << '\n';
  }
}

}  // namespace

void save_model(const std::filesystem::path& path, const FactorizationModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "arw-factorization 1\n";
  out << "rank " << model.rank << '\n';
  out << "lambda " << exact(model.lambda) << '\n';
  out << "rule " << rule_name(model.rule) << '\n';
  out << "columns " << model.columns.size();
  for (const auto& c : model.columns) out << ' ' << c;
  out << '\n';
  out << "loss " << model.loss_history.size();
  for (double l : model.loss_history) out << ' ' << exact(l);
  out << '\n';
  write_matrix(out, "U", model.U);
  write_matrix(out, "V", model.V);
  write_matrix(out, "centroids", model.centroids);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

FactorizationModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model '" + path.string() + "'");
  auto fail = [&](const std::string& what) -> FactorizationModel {
    throw ParseError("malformed model file '" + path.string() + "': " + what, 0);
  };
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "arw-factorization" || version != 1)
    return fail("bad magic");
  FactorizationModel m;
  std::string rule;
  std::size_t count = 0;
  if (!(in >> word >> m.rank) || word != "rank") return fail("rank");
  if (!(in >> word >> m.lambda) || word != "lambda") return fail("lambda");
  if (!(in >> word >> rule) || word != "rule") return fail("rule");
  if (rule == "none") m.rule = AssignmentRule::none;
  else if (rule == "argmax") m.rule = AssignmentRule::argmax;
  else if (rule == "nearest-centroid") m.rule = AssignmentRule::nearest_centroid;
  else return fail("unknown rule '" + rule + "'");
  if (!(in >> word >> count) || word != "columns") return fail("columns");
  m.columns.resize(count);
  for (auto& c : m.columns)
    if (!(in >> c)) return fail("column names");
  if (!(in >> word >> count) || word != "loss") return fail("loss");
  m.loss_history.resize(count);
  for (auto& l : m.loss_history)
    if (!(in >> l)) return fail("loss values");
  for (const char* expected : {"U", "V", "centroids"}) {
    Eigen::Index rows = 0, cols = 0;
    std::string name;
    if (!(in >> word >> name >> rows >> cols) || word != "matrix" || name != expected)
      return fail(std::string("matrix ") + expected);
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (!(in >> M(r, c))) return fail(std::string("values of ") + expected);
    if (name == "U") m.U = std::move(M);
    else if (name == "V") m.V = std::move(M);
    else m.centroids = std::move(M);
  }
  return m;
}

}  // namespace arw
