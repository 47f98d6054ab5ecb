#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace obsmap {

using VertexId = std::int32_t;
using Edge = std::pair<VertexId, VertexId>;

// Immutable simple undirected graph in compressed adjacency form. Neighbor
// lists are sorted; every edge is stored in both directions.
class Graph {
 public:
  Graph() = default;

  // Builds a graph on vertices 0..n-1. Rejects self-loops, duplicate edges
  // (in either orientation) and out-of-range endpoints with ParameterError.
  static Graph from_edges(VertexId n, std::span<const Edge> edges);

  VertexId n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(VertexId u, VertexId v) const;

  std::size_t min_degree() const noexcept;
  std::size_t max_degree() const noexcept;

  // Edges with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

 private:
  VertexId n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> targets_;
};

// Uniform pairing of half-edges, restarted from scratch whenever a self-loop,
// a multi-edge, or a disconnected outcome appears. Deterministic in seed.
Graph random_regular(VertexId n, int r, std::uint64_t seed);

struct EdgeListResult {
  Graph graph;
  std::vector<std::string> tokens;  // tokens[id] is the original vertex label
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
};

// Parses a whitespace-separated edge list. '#' lines and blank lines are
// skipped; vertex labels are arbitrary tokens, numbered densely in order of
// first appearance. Throws ParseError on a line without exactly two tokens.
EdgeListResult from_edge_list(std::istream& in);

// Writes "u v" lines, using tokens as labels when given.
void write_edge_list(const Graph& g, std::ostream& out,
                     std::span<const std::string> tokens = {});
void write_token_map(std::span<const std::string> tokens, std::ostream& out);

struct InducedSubgraph {
  Graph graph;
  std::vector<VertexId> original_ids;  // new id -> id in the source graph
};

// Largest connected component, re-indexed in increasing original id order.
// Among equally large components the one holding the smallest id wins.
InducedSubgraph largest_connected_component(const Graph& g);

// Connected components labelled 0.. in order of their smallest vertex.
std::vector<VertexId> component_labels(const Graph& g);
bool is_connected(const Graph& g);

// BFS distances from source; throws ConnectivityError if some vertex is
// unreachable.
std::vector<std::int32_t> bfs_distances(const Graph& g, VertexId source);

// Ordered set of distinct anchor vertices.
class AnchorSet {
 public:
  AnchorSet() = default;
  AnchorSet(std::vector<VertexId> anchors, VertexId n);

  std::span<const VertexId> ids() const noexcept { return anchors_; }
  std::size_t size() const noexcept { return anchors_.size(); }
  bool empty() const noexcept { return anchors_.empty(); }

 private:
  std::vector<VertexId> anchors_;
};

// Row-major n x k table of anchor distances.
struct DistanceProfiles {
  VertexId n = 0;
  std::size_t k = 0;
  std::vector<std::int32_t> values;

  std::span<const std::int32_t> row(VertexId v) const noexcept {
    return {values.data() + static_cast<std::size_t>(v) * k, k};
  }
};

DistanceProfiles anchor_profile(const Graph& g, const AnchorSet& anchors);

struct GraphStats {
  VertexId n = 0;
  std::size_t edge_count = 0;
  double avg_degree = 0;
  double density = 0;
  std::int32_t diameter = 0;
  double avg_shortest_path_length = 0;
  double avg_clustering = 0;
  double transitivity = 0;
  double degree_variance = 0;
  double degree_gini = 0;
};

// Requires a connected graph with n >= 2.
GraphStats structural_stats(const Graph& g);

}  // namespace obsmap
