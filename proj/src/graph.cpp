#include "obsmap/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "obsmap/errors.hpp"
#include "obsmap/rng.hpp"

namespace obsmap {

namespace {

constexpr int kMaxRegularAttempts = 1'000'000;

// Distances from source with -1 for unreachable vertices.
std::vector<std::int32_t> bfs_raw(const Graph& g, VertexId source) {
  std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n()), -1);
  std::vector<VertexId> queue;
  queue.reserve(static_cast<std::size_t>(g.n()));
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const std::int32_t next = dist[v] + 1;
    for (VertexId u : g.neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = next;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Graph Graph::from_edges(VertexId n, std::span<const Edge> edges) {
  if (n < 0) throw ParameterError("vertex count must be non-negative");
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ParameterError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                           std::to_string(v) + ")");
    }
    if (u == v) throw ParameterError("self-loop at vertex " + std::to_string(u));
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  if (auto dup = std::adjacent_find(directed.begin(), directed.end()); dup != directed.end()) {
    throw ParameterError("duplicate edge (" + std::to_string(dup->first) + ", " +
                         std::to_string(dup->second) + ")");
  }

  Graph g;
  g.n_ = n;
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : directed) ++g.offsets_[static_cast<std::size_t>(e.first) + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.reserve(directed.size());
  for (const auto& e : directed) g.targets_.push_back(e.second);
  return g;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::min_degree() const noexcept {
  std::size_t best = n_ > 0 ? std::numeric_limits<std::size_t>::max() : 0;
  for (VertexId v = 0; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (VertexId v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId u = 0; u < n_; ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph random_regular(VertexId n, int r, std::uint64_t seed) {
  if (r < 3) throw ParameterError("regular degree must be at least 3");
  if (n <= r) throw ParameterError("vertex count must exceed the degree");
  if ((static_cast<std::int64_t>(n) * r) % 2 != 0) {
    throw ParameterError("n * r must be even");
  }

  Rng rng(seed);
  const std::size_t stub_count = static_cast<std::size_t>(n) * static_cast<std::size_t>(r);
  std::vector<VertexId> stubs(stub_count);
  std::vector<Edge> edges;
  edges.reserve(stub_count / 2);
  // Partner lists double as the multi-edge check; r is small.
  std::vector<std::vector<VertexId>> partners(static_cast<std::size_t>(n));

  for (int attempt = 0; attempt < kMaxRegularAttempts; ++attempt) {
    for (std::size_t i = 0; i < stub_count; ++i) stubs[i] = static_cast<VertexId>(i / r);
    rng.shuffle(std::span<VertexId>(stubs));

    edges.clear();
    for (auto& p : partners) p.clear();
    bool simple = true;
    for (std::size_t i = 0; i < stub_count && simple; i += 2) {
      const VertexId u = stubs[i];
      const VertexId v = stubs[i + 1];
      if (u == v || std::find(partners[u].begin(), partners[u].end(), v) != partners[u].end()) {
        simple = false;
        break;
      }
      partners[u].push_back(v);
      partners[v].push_back(u);
      edges.emplace_back(u, v);
    }
    if (!simple) continue;

    Graph g = Graph::from_edges(n, edges);
    if (is_connected(g)) return g;
  }
  throw NumericError("random_regular: no simple connected pairing after " +
                     std::to_string(kMaxRegularAttempts) + " attempts");
}

EdgeListResult from_edge_list(std::istream& in) {
  EdgeListResult result;
  std::unordered_map<std::string, VertexId> ids;
  std::vector<Edge> edges;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.try_emplace(token, static_cast<VertexId>(result.tokens.size()));
    if (inserted) result.tokens.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream fields(body);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(line_no, "expected two vertex tokens, got \"" + body + "\"");
    }
    const VertexId u = intern(a);
    const VertexId v = intern(b);
    if (u == v) {
      ++result.self_loops_dropped;
      continue;
    }
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  if (in.bad()) throw IoError("failed while reading edge list");

  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  result.duplicates_dropped = static_cast<std::size_t>(std::distance(last, edges.end()));
  edges.erase(last, edges.end());
  result.graph = Graph::from_edges(static_cast<VertexId>(result.tokens.size()), edges);
  return result;
}

void write_edge_list(const Graph& g, std::ostream& out, std::span<const std::string> tokens) {
  if (!tokens.empty() && tokens.size() != static_cast<std::size_t>(g.n())) {
    throw ParameterError("token count does not match vertex count");
  }
  for (const auto& [u, v] : g.edges()) {
    if (tokens.empty()) {
      out << u << ' ' << v << '\n';
    } else {
      out << tokens[u] << ' ' << tokens[v] << '\n';
    }
  }
  if (!out) throw IoError("failed to write edge list");
}

void write_token_map(std::span<const std::string> tokens, std::ostream& out) {
  out << "token\tid\n";
  for (std::size_t i = 0; i < tokens.size(); ++i) out << tokens[i] << '\t' << i << '\n';
  if (!out) throw IoError("failed to write token map");
}

std::vector<VertexId> component_labels(const Graph& g) {
  std::vector<VertexId> label(static_cast<std::size_t>(g.n()), -1);
  std::vector<VertexId> stack;
  VertexId next = 0;
  for (VertexId s = 0; s < g.n(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (VertexId u : g.neighbors(v)) {
        if (label[u] < 0) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_connected(const Graph& g) {
  if (g.n() == 0) return true;
  const auto dist = bfs_raw(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::int32_t d) { return d < 0; });
}

InducedSubgraph largest_connected_component(const Graph& g) {
  if (g.n() == 0) throw ParameterError("largest_connected_component: empty graph");
  const auto label = component_labels(g);
  const VertexId count = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count), 0);
  for (VertexId l : label) ++sizes[l];
  // Labels follow smallest-member order, so the first maximum wins ties.
  const auto best = static_cast<VertexId>(
      std::distance(sizes.begin(), std::max_element(sizes.begin(), sizes.end())));

  InducedSubgraph sub;
  std::vector<VertexId> new_id(static_cast<std::size_t>(g.n()), -1);
  for (VertexId v = 0; v < g.n(); ++v) {
    if (label[v] == best) {
      new_id[v] = static_cast<VertexId>(sub.original_ids.size());
      sub.original_ids.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) {
    if (label[u] == best) edges.emplace_back(new_id[u], new_id[v]);
  }
  sub.graph = Graph::from_edges(static_cast<VertexId>(sub.original_ids.size()), edges);
  return sub;
}

std::vector<std::int32_t> bfs_distances(const Graph& g, VertexId source) {
  if (source < 0 || source >= g.n()) {
    throw ParameterError("bfs source out of range: " + std::to_string(source));
  }
  auto dist = bfs_raw(g, source);
  for (VertexId v = 0; v < g.n(); ++v) {
    if (dist[v] < 0) {
      throw ConnectivityError("vertex " + std::to_string(v) + " unreachable from " +
                              std::to_string(source));
    }
  }
  return dist;
}

AnchorSet::AnchorSet(std::vector<VertexId> anchors, VertexId n) : anchors_(std::move(anchors)) {
  std::vector<VertexId> sorted = anchors_;
  std::sort(sorted.begin(), sorted.end());
  for (VertexId a : sorted) {
    if (a < 0 || a >= n) throw ParameterError("anchor out of range: " + std::to_string(a));
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParameterError("duplicate anchor");
  }
}

DistanceProfiles anchor_profile(const Graph& g, const AnchorSet& anchors) {
  DistanceProfiles out;
  out.n = g.n();
  out.k = anchors.size();
  out.values.assign(static_cast<std::size_t>(g.n()) * out.k, 0);
  for (std::size_t i = 0; i < out.k; ++i) {
    const auto anchor = anchors.ids()[i];
    if (anchor >= g.n()) throw ParameterError("anchor out of range for graph");
    const auto dist = bfs_distances(g, anchor);
    for (VertexId v = 0; v < g.n(); ++v) {
      out.values[static_cast<std::size_t>(v) * out.k + i] = dist[v];
    }
  }
  return out;
}

GraphStats structural_stats(const Graph& g) {
  const VertexId n = g.n();
  if (n < 2) throw ParameterError("structural_stats needs at least two vertices");

  GraphStats s;
  s.n = n;
  s.edge_count = g.edge_count();
  const double nd = static_cast<double>(n);
  s.avg_degree = 2.0 * static_cast<double>(s.edge_count) / nd;
  s.density = 2.0 * static_cast<double>(s.edge_count) / (nd * (nd - 1.0));

  // All-pairs BFS; integer path sums are exact.
  std::uint64_t path_sum = 0;
  std::int32_t diameter = 0;
  for (VertexId src = 0; src < n; ++src) {
    const auto dist = bfs_distances(g, src);
    for (VertexId v = src + 1; v < n; ++v) {
      path_sum += static_cast<std::uint64_t>(dist[v]);
      diameter = std::max(diameter, dist[v]);
    }
  }
  s.diameter = diameter;
  s.avg_shortest_path_length =
      static_cast<double>(path_sum) / (nd * (nd - 1.0) / 2.0);

  // Each triangle u < v < w is found once from its lowest edge (u, v).
  std::vector<std::uint64_t> triangles(static_cast<std::size_t>(n), 0);
  for (VertexId u = 0; u < n; ++u) {
    const auto nu = g.neighbors(u);
    for (VertexId v : nu) {
      if (v <= u) continue;
      const auto nv = g.neighbors(v);
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++triangles[u];
          ++triangles[v];
          ++triangles[*a];
          ++a;
          ++b;
        }
      }
    }
  }

  std::uint64_t closed = 0;
  std::uint64_t triples = 0;
  double clustering_sum = 0;
  for (VertexId v = 0; v < n; ++v) {
    const std::uint64_t d = g.degree(v);
    const std::uint64_t pairs = d * (d - (d > 0 ? 1 : 0)) / 2;
    closed += triangles[v];
    triples += pairs;
    if (d >= 2) clustering_sum += static_cast<double>(triangles[v]) / static_cast<double>(pairs);
  }
  s.avg_clustering = clustering_sum / nd;
  s.transitivity = triples == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triples);

  std::vector<std::uint64_t> degrees(static_cast<std::size_t>(n));
  for (VertexId v = 0; v < n; ++v) degrees[v] = g.degree(v);
  std::sort(degrees.begin(), degrees.end());
  const std::uint64_t degree_sum = 2 * s.edge_count;
  long double sq_dev = 0;
  const long double mean = static_cast<long double>(degree_sum) / n;
  long double gini_num = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const long double d = static_cast<long double>(degrees[i]);
    sq_dev += (d - mean) * (d - mean);
    gini_num += (2.0L * static_cast<long double>(i + 1) - n - 1) * d;
  }
  s.degree_variance = static_cast<double>(sq_dev / n);
  s.degree_gini =
      degree_sum == 0 ? 0.0 : static_cast<double>(gini_num / (static_cast<long double>(n) * degree_sum));
  return s;
}

}  // namespace obsmap
