#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "obsmap/graph.hpp"
#include "obsmap/rng.hpp"
#include "obsmap/spectral.hpp"

namespace testing {

using obsmap::Edge;
using obsmap::Graph;
using obsmap::VertexId;

inline Graph path_graph(VertexId n) {
  std::vector<Edge> e;
  for (VertexId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph::from_edges(n, e);
}

inline Graph cycle_graph(VertexId n) {
  std::vector<Edge> e;
  for (VertexId v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(VertexId n) {
  std::vector<Edge> e;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

// Center 0, leaves 1..leaves.
inline Graph star_graph(VertexId leaves) {
  std::vector<Edge> e;
  for (VertexId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, e);
}

// Random labelled tree plus `extra` random chords: always connected.
inline Graph random_connected(VertexId n, int extra, std::uint64_t seed) {
  obsmap::Rng rng(seed);
  std::set<Edge> edges;
  for (VertexId v = 1; v < n; ++v) {
    const auto u = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(v)));
    edges.emplace(u, v);
  }
  for (int i = 0; i < extra * 4 && static_cast<int>(edges.size()) < n - 1 + extra; ++i) {
    auto u = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n)));
    auto v = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    edges.emplace(u, v);
  }
  std::vector<Edge> list(edges.begin(), edges.end());
  return Graph::from_edges(n, list);
}

// All-pairs shortest paths by Floyd-Warshall on the adjacency matrix.
inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
  const int n = g.n();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int v = 0; v < n; ++v) {
    d[v][v] = 0;
    for (VertexId u : g.neighbors(v)) d[v][u] = 1;
  }
  for (int w = 0; w < n; ++w)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) d[u][v] = std::min(d[u][v], d[u][w] + d[w][v]);
  return d;
}

// Codes from explicit integer rows (n x m).
inline obsmap::QuantizedCodes codes_from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  std::vector<std::int64_t> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return obsmap::QuantizedCodes(n, m, std::move(flat), obsmap::Quantizer::absolute, 1.0, 1.0);
}

inline obsmap::DistanceProfiles profiles_from_rows(const std::vector<std::vector<std::int32_t>>& rows) {
  obsmap::DistanceProfiles p;
  p.n = static_cast<VertexId>(rows.size());
  p.k = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) p.values.insert(p.values.end(), r.begin(), r.end());
  return p;
}

}  // namespace testing
