#include "proteinoid/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "proteinoid/errors.hpp"

namespace proteinoid {

void FunctionalGraph::validate() const {
  if (image.empty()) throw ConfigError("graph: no vertices");
  for (const auto t : image) {
    if (t >= image.size()) throw ConfigError("graph: edge target outside the vertex set");
  }
}

std::vector<std::int32_t> distances_from(const FunctionalGraph& graph, std::uint32_t source) {
  std::vector<std::int32_t> d(graph.size(), kUnreachable);
  std::uint32_t v = source;
  for (std::int32_t step = 0; d[v] == kUnreachable; ++step) {
    d[v] = step;
    v = graph.image[v];
  }
  return d;
}

namespace {

struct CycleStructure {
  std::vector<std::int32_t> cycle_length;  // length of the cycle the vertex ends in
  std::vector<std::int32_t> tail;          // steps until the vertex is on its cycle
  std::size_t cycles = 0;
};

CycleStructure analyse_cycles(const FunctionalGraph& g) {
  const std::size_t n = g.size();
  CycleStructure s{std::vector<std::int32_t>(n, -1), std::vector<std::int32_t>(n, -1), 0};
  std::vector<std::uint32_t> path;
  std::vector<std::int32_t> position(n, -1);  // index on the current walk
  for (std::uint32_t start = 0; start < n; ++start) {
    if (s.tail[start] >= 0) continue;
    path.clear();
    std::uint32_t v = start;
    while (s.tail[v] < 0 && position[v] < 0) {
      position[v] = static_cast<std::int32_t>(path.size());
      path.push_back(v);
      v = g.image[v];
    }
    std::size_t resolved = path.size();
    if (s.tail[v] < 0) {
      // New cycle: path[position[v]..] closes on itself.
      const auto first = static_cast<std::size_t>(position[v]);
      const auto len = static_cast<std::int32_t>(path.size() - first);
      for (std::size_t i = first; i < path.size(); ++i) {
        s.tail[path[i]] = 0;
        s.cycle_length[path[i]] = len;
      }
      ++s.cycles;
      resolved = first;
    }
    for (std::size_t i = resolved; i-- > 0;) {
      const std::uint32_t u = path[i];
      const std::uint32_t next = g.image[u];
      s.tail[u] = s.tail[next] + 1;
      s.cycle_length[u] = s.cycle_length[next];
    }
    for (const auto u : path) position[u] = -1;
  }
  return s;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

// Each weak component of a functional graph carries exactly one cycle, so
// its simple undirected shadow is a tree or a unicyclic graph. Such a graph
// is 2-connected only when it is a bare cycle of length >= 3; otherwise it
// has a leaf (degree 1), which bounds both connectivities by 1.
std::pair<std::int32_t, std::int32_t> connectivity(const FunctionalGraph& g,
                                                   std::size_t components) {
  const std::size_t n = g.size();
  if (n < 2 || components > 1) return {0, 0};
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::uint32_t t = g.image[v];
    if (t != v) edges.emplace(std::min(v, t), std::max(v, t));
  }
  std::vector<std::uint32_t> degree(n, 0);
  for (const auto& [a, b] : edges) {
    ++degree[a];
    ++degree[b];
  }
  const bool bare_cycle =
      n >= 3 && std::all_of(degree.begin(), degree.end(), [](std::uint32_t d) { return d == 2; });
  if (bare_cycle) return {2, 2};
  return {1, 1};
}

}  // namespace

GraphMetrics graph_metrics(const FunctionalGraph& g, const GraphMetricOptions& options) {
  g.validate();
  const std::size_t n = g.size();
  GraphMetrics m;
  m.vertices = n;

  m.in_degree.assign(n, 0);
  for (const auto t : g.image) ++m.in_degree[t];
  for (const auto d : m.in_degree) ++m.in_degree_distribution[d];
  m.out_degree_distribution[1] = n;

  const CycleStructure cs = analyse_cycles(g);
  m.cycles = cs.cycles;
  m.eccentricity.resize(n);
  for (std::size_t v = 0; v < n; ++v) m.eccentricity[v] = cs.tail[v] + cs.cycle_length[v] - 1;
  m.radius = *std::min_element(m.eccentricity.begin(), m.eccentricity.end());
  m.diameter = *std::max_element(m.eccentricity.begin(), m.eccentricity.end());

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t v = 0; v < n; ++v) {
    parent[find_root(parent, v)] = find_root(parent, g.image[v]);
  }
  for (std::size_t v = 0; v < n; ++v) m.components += find_root(parent, v) == v;
  std::tie(m.node_connectivity, m.edge_connectivity) = connectivity(g, m.components);

  m.degree_centrality.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    m.degree_centrality[v] =
        n == 1 ? 1.0 : static_cast<double>(m.in_degree[v] + 1) / static_cast<double>(n - 1);
  }

  if (n <= options.dense_limit) {
    std::vector<std::int32_t> dist(n * n, kUnreachable);
    for (std::uint32_t s = 0; s < n; ++s) {
      const auto row = distances_from(g, s);
      std::copy(row.begin(), row.end(), dist.begin() + static_cast<std::ptrdiff_t>(s * n));
    }
    std::vector<double> closeness(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      std::size_t reach = 0;
      std::int64_t total = 0;
      for (std::size_t v = 0; v < n; ++v) {
        const std::int32_t d = dist[v * n + u];
        if (d == kUnreachable) continue;
        ++reach;
        total += d;
      }
      if (total > 0 && n > 1) {
        const double r = static_cast<double>(reach - 1);
        closeness[u] = (r / static_cast<double>(total)) * (r / static_cast<double>(n - 1));
      }
    }
    m.distance = std::move(dist);
    m.closeness_centrality = std::move(closeness);
  }

  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (m.eigenvector_iterations = 0; m.eigenvector_iterations < options.eigen_max_iterations;) {
    ++m.eigenvector_iterations;
    next = x;
    for (std::size_t v = 0; v < n; ++v) next[g.image[v]] += x[v];
    double norm = 0.0;
    for (const double z : next) norm += z * z;
    norm = std::sqrt(norm);
    if (norm == 0.0) norm = 1.0;
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= norm;
      change += std::abs(next[v] - x[v]);
    }
    std::swap(x, next);
    if (change < static_cast<double>(n) * options.eigen_tolerance) {
      m.eigenvector_converged = true;
      break;
    }
  }
  m.eigenvector_centrality = std::move(x);
  return m;
}

}  // namespace proteinoid
