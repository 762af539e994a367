#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arw/attributes.hpp"
#include "arw/graph.hpp"

namespace arw::testing {

/// Path of a file under tests/data.
std::filesystem::path data_path(const std::string& name);
Graph karate();

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph star_graph(std::size_t leaves);  // center is node 0
Graph graph_from(std::size_t n, const std::vector<NodePair>& edges);
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);
/// Preferential attachment with triad closure (Holme-Kim): every new node
/// adds m edges; after each attachment a triangle is closed with
/// probability p_triangle.
Graph powerlaw_cluster(std::size_t n, std::size_t m, double p_triangle, std::uint64_t seed);

/// Graphlet participation counts by enumerating every 2-, 3- and 4-node
/// subset. O(n^4); refuses graphs above 100 nodes.
AttributeMatrix brute_force_graphlets(const Graph& graph);

/// Smallest within-cluster sum of squares over every split of the rows into
/// two non-empty groups. Refuses more than 20 rows.
double brute_force_two_means(const Eigen::MatrixXd& points);

/// Largest k singular values of X, by power iteration on X^T X with
/// deflation. Independent of Eigen's decompositions.
std::vector<double> top_singular_values(const Eigen::MatrixXd& X, std::size_t k);

/// Squared Frobenius error of the best rank-k approximation of X.
double best_rank_k_error(const Eigen::MatrixXd& X, std::size_t k);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace arw::testing
