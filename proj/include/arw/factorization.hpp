#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arw/attributes.hpp"
#include "arw/type_map.hpp"

namespace arw {

/// How a trained factorization turns latent node factors into types.
enum class AssignmentRule { none, argmax, nearest_centroid };

/// X ~ U V^T with ridge penalty lambda (||U||^2 + ||V||^2).
///
/// V holds one row per attribute column and never depends on node identity,
/// which is what lets new nodes be typed from their attributes alone.
struct FactorizationModel {
  Eigen::MatrixXd U;          // n x F
  Eigen::MatrixXd V;          // k x F
  Eigen::MatrixXd centroids;  // m x F, filled by kmeans_types
  std::size_t rank = 0;
  double lambda = 0.1;
  std::vector<double> loss_history;  // objective after each ALS sweep
  AssignmentRule rule = AssignmentRule::none;
  std::vector<std::string> columns;

  bool trained() const noexcept { return V.size() > 0; }
};

struct FactorizeOptions {
  std::size_t rank = 0;
  std::size_t iterations = 100;
  double lambda = 0.1;
  std::uint64_t seed = 1;
};

/// Alternating least squares on the squared Frobenius loss. Each sweep
/// solves V given U and then U given V, so the final U is the exact ridge
/// solution for the final V.
FactorizationModel factorize(const AttributeMatrix& attrs, const FactorizeOptions& options);

Eigen::MatrixXd to_matrix(const AttributeMatrix& attrs);

/// ||X - U V^T||_F^2 + lambda (||U||_F^2 + ||V||_F^2)
double factorization_loss(const Eigen::MatrixXd& X, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& V, double lambda);

/// Rows of U minimizing ||X - U V^T||^2 + lambda ||U||^2 for fixed V.
/// Computed row by row, so each row depends only on its own attributes.
/// lambda = 0 falls back to the minimum-norm solution.
Eigen::MatrixXd solve_factors(const Eigen::MatrixXd& X, const Eigen::MatrixXd& V, double lambda);

struct KMeansResult {
  std::vector<TypeId> assignment;
  Eigen::MatrixXd centroids;
  std::vector<double> objective_history;  // after every assignment step

  double objective() const { return objective_history.back(); }
};

/// Lloyd's algorithm with farthest-point seeding. The first center is drawn
/// from `seed`; the rest are the points farthest from the centers so far.
/// An empty cluster is re-seeded at the point farthest from its own
/// centroid. Stops when the assignment no longer changes. Clusters left
/// empty at the end are dropped and ids compacted.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t clusters,
                    std::size_t iterations = 100, std::uint64_t seed = 1);

/// Index of the closest centroid (lowest index on ties).
TypeId nearest_centroid(const Eigen::Ref<const Eigen::RowVectorXd>& point,
                        const Eigen::MatrixXd& centroids);

/// Clusters the rows of model.U into at most m types and stores the
/// centroids in the model.
TypeMap kmeans_types(FactorizationModel& model, std::size_t m,
                     std::size_t iterations = 100, std::uint64_t seed = 1);

/// Type of node i = argmax_k U(i, k), lowest k on ties. The vocabulary has
/// one type per factor.
TypeMap argmax_types(FactorizationModel& model);

/// Types for unseen nodes: U' is solved against the trained V with the same
/// lambda, then the model's assignment rule is applied. V is never refit.
TypeMap inductive_assign(const AttributeMatrix& new_attrs, const FactorizationModel& model);

void save_model(const std::filesystem::path& path, const FactorizationModel& model);
FactorizationModel load_model(const std::filesystem::path& path);

}  // namespace arw
