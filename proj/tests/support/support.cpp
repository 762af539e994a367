#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <unistd.h>

#include "arw/graphlets.hpp"
#include "arw/random.hpp"

namespace arw::testing {

std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(ARW_TEST_DATA_DIR) / name;
}

Graph karate() { return load_edge_list(data_path("karate.edges")); }

Graph graph_from(std::size_t n, const std::vector<NodePair>& edges) {
  return Graph::from_internal_edges(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<NodePair> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v});
  return graph_from(n, e);
}

Graph cycle_graph(std::size_t n) {
  std::vector<NodePair> e;
  for (NodeId u = 0; u < n; ++u) e.push_back({u, static_cast<NodeId>((u + 1) % n)});
  return graph_from(n, e);
}

Graph path_graph(std::size_t n) {
  std::vector<NodePair> e;
  for (NodeId u = 0; u + 1 < n; ++u) e.push_back({u, u + 1});
  return graph_from(n, e);
}

Graph star_graph(std::size_t leaves) {
  std::vector<NodePair> e;
  for (NodeId v = 1; v <= leaves; ++v) e.push_back({0, v});
  return graph_from(leaves + 1, e);
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<NodePair> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.uniform() < p) e.push_back({u, v});
  return graph_from(n, e);
}

Graph powerlaw_cluster(std::size_t n, std::size_t m, double p_triangle, std::uint64_t seed) {
  if (m < 1 || n <= m) throw std::invalid_argument("need 1 <= m < n");
  SplitMix64 rng(seed);
  std::vector<std::vector<NodeId>> adj(n);
  std::vector<NodeId> repeated;  // node appears once per incident edge
  std::vector<NodePair> edges;
  auto connect = [&](NodeId u, NodeId v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
    edges.push_back({u, v});
  };
  auto adjacent = [&](NodeId u, NodeId v) {
    return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
  };
  // The first new node attaches to all of the m seed nodes.
  for (NodeId v = 0; v < m; ++v) {
    connect(static_cast<NodeId>(m), v);
    repeated.push_back(v);
    repeated.push_back(static_cast<NodeId>(m));
  }
  for (NodeId source = static_cast<NodeId>(m + 1); source < n; ++source) {
    NodeId last = 0;
    std::size_t added = 0;
    while (added < m) {
      NodeId target = source;
      if (added > 0 && rng.uniform() < p_triangle) {
        std::vector<NodeId> options;
        for (NodeId w : adj[last])
          if (w != source && !adjacent(source, w)) options.push_back(w);
        if (!options.empty()) target = options[rng.below(options.size())];
      }
      if (target == source) {
        do {
          target = repeated[rng.below(repeated.size())];
        } while (target == source || adjacent(source, target));
      }
      connect(source, target);
      repeated.push_back(target);
      last = target;
      ++added;
    }
    for (std::size_t k = 0; k < m; ++k) repeated.push_back(source);
  }
  return graph_from(n, edges);
}

AttributeMatrix brute_force_graphlets(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n > 100) throw std::invalid_argument("brute-force oracle limited to 100 nodes");
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  AttributeMatrix x(n, 9, std::vector<std::string>(kGraphletNames.begin(), kGraphletNames.end()));
  auto bump = [&](std::initializer_list<std::size_t> nodes, std::size_t col) {
    for (auto v : nodes) x(v, col) += 1;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (a[i][j]) bump({i, j}, 0);
      for (std::size_t k = j + 1; k < n; ++k) {
        const int e3 = a[i][j] + a[i][k] + a[j][k];
        if (e3 == 2) bump({i, j, k}, 1);
        if (e3 == 3) bump({i, j, k}, 2);
        for (std::size_t l = k + 1; l < n; ++l) {
          const std::size_t s[4] = {i, j, k, l};
          int deg[4] = {0, 0, 0, 0};
          int edges = 0;
          for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q)
              if (a[s[p]][s[q]]) {
                ++deg[p];
                ++deg[q];
                ++edges;
              }
          if (std::count(deg, deg + 4, 0) > 0) continue;  // has an isolated node
          const int maxdeg = *std::max_element(deg, deg + 4);
          std::size_t col = 0;
          switch (edges) {
            case 3: col = maxdeg == 3 ? 4 : 3; break;  // star or path
            case 4: col = maxdeg == 3 ? 6 : 5; break;  // tailed triangle or cycle
            case 5: col = 7; break;
            case 6: col = 8; break;
            default: continue;  // two disjoint edges
          }
          bump({i, j, k, l}, col);
        }
      }
    }
  return x;
}

double brute_force_two_means(const Eigen::MatrixXd& points) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n < 2 || n > 20) throw std::invalid_argument("two-means oracle needs 2..20 rows");
  double best = std::numeric_limits<double>::infinity();
  // Node 0 always in group 0; enumerate the rest.
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    double total = 0.0;
    for (int group = 0; group <= 1; ++group) {
      Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(points.cols());
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const int gi = i == 0 ? 0 : static_cast<int>((mask >> (i - 1)) & 1u);
        if (gi == group) {
          sum += points.row(i);
          ++count;
        }
      }
      const Eigen::RowVectorXd centroid = sum / static_cast<double>(count);
      for (std::size_t i = 0; i < n; ++i) {
        const int gi = i == 0 ? 0 : static_cast<int>((mask >> (i - 1)) & 1u);
        if (gi == group) total += (points.row(i) - centroid).squaredNorm();
      }
    }
    best = std::min(best, total);
  }
  return best;
}

std::vector<double> top_singular_values(const Eigen::MatrixXd& X, std::size_t k) {
  Eigen::MatrixXd G = X.transpose() * X;
  std::vector<double> out;
  SplitMix64 rng(12345);
  for (std::size_t i = 0; i < k && i < static_cast<std::size_t>(G.rows()); ++i) {
    Eigen::VectorXd v(G.rows());
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = rng.uniform() - 0.5;
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
      Eigen::VectorXd w = G * v;
      const double next = v.dot(w);
      const double norm = w.norm();
      if (norm == 0.0) {
        lambda = 0.0;
        break;
      }
      v = w / norm;
      if (std::abs(next - lambda) <= 1e-15 * std::max(1.0, std::abs(next)) && it > 50) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    out.push_back(std::sqrt(std::max(0.0, lambda)));
    G -= lambda * v * v.transpose();
  }
  return out;
}

double best_rank_k_error(const Eigen::MatrixXd& X, std::size_t k) {
  const auto all = top_singular_values(X, static_cast<std::size_t>(X.cols()));
  double err = 0.0;
  for (std::size_t i = k; i < all.size(); ++i) err += all[i] * all[i];
  return err;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("arw-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace arw::testing
