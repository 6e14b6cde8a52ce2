#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace proteinoid {

/// Directed graph with exactly one out-edge per vertex: s -> image[s].
struct FunctionalGraph {
  std::vector<std::uint32_t> image;

  std::size_t size() const noexcept { return image.size(); }
  /// Throws ConfigError when an image lies outside the vertex set.
  void validate() const;
};

inline constexpr std::int32_t kUnreachable = -1;

/// Directed distances from `source` to every vertex (kUnreachable if none).
std::vector<std::int32_t> distances_from(const FunctionalGraph& graph, std::uint32_t source);

struct GraphMetricOptions {
  /// Distance matrix and closeness are only materialised up to this many vertices.
  std::size_t dense_limit = 4096;
  double eigen_tolerance = 1e-10;
  std::size_t eigen_max_iterations = 100000;
};

/// Conventions:
///  - distances are directed; eccentricity is the largest finite distance
///    out of a vertex, so radius/diameter range over reachable sets only;
///  - degree centrality is (in + out) / (n - 1), a self-loop adding one to each;
///  - closeness uses incoming distances, scaled by (r - 1) / (n - 1) where r
///    counts the vertices that reach the target;
///  - node and edge connectivity are taken on the underlying simple
///    undirected graph (self-loops dropped, antiparallel edges merged);
///  - eigenvector centrality is the in-edge (left) eigenvector found by power
///    iteration on A^T + I from the uniform vector, L2-normalised; when the
///    dominant eigenvalue is repeated (several cycles) the uniform start
///    selects the limit.
struct GraphMetrics {
  std::size_t vertices = 0;
  std::vector<std::uint32_t> in_degree;
  std::map<std::uint32_t, std::size_t> in_degree_distribution;   // degree -> vertices
  std::map<std::uint32_t, std::size_t> out_degree_distribution;  // always {1: n}
  std::optional<std::vector<std::int32_t>> distance;             // row-major n x n
  std::vector<std::int32_t> eccentricity;
  std::int32_t radius = 0;
  std::int32_t diameter = 0;
  std::size_t components = 0;  // weakly connected
  std::size_t cycles = 0;
  std::int32_t node_connectivity = 0;
  std::int32_t edge_connectivity = 0;
  std::vector<double> degree_centrality;
  std::optional<std::vector<double>> closeness_centrality;
  std::vector<double> eigenvector_centrality;
  std::size_t eigenvector_iterations = 0;
  bool eigenvector_converged = false;
};

GraphMetrics graph_metrics(const FunctionalGraph& graph, const GraphMetricOptions& options = {});

}  // namespace proteinoid
