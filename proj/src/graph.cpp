#include "mwis/graph.hpp"

#include <algorithm>
#include <numeric>

namespace mwis {

WeightedGraph::WeightedGraph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                             std::vector<double> weights) {
  ids_.resize(n);
  std::iota(ids_.begin(), ids_.end(), NodeId{0});
  weights_ = weights.empty() ? std::vector<double>(n, 1.0) : std::move(weights);
  require(weights_.size() == n, "weights size must match n");
  build(edges);
}

WeightedGraph::WeightedGraph(std::vector<NodeId> ids,
                             const std::vector<std::pair<NodeId, NodeId>>& edges,
                             std::vector<double> weights) {
  const std::size_t n = ids.size();
  if (weights.empty()) weights.assign(n, 1.0);
  require(weights.size() == n, "weights size must match ids size");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  ids_.resize(n);
  weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids_[i] = ids[order[i]];
    weights_[i] = weights[order[i]];
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    require(ids_[i] < ids_[i + 1], "node identifiers must be distinct");
  dense_ids_ = true;
  for (std::size_t i = 0; i < n; ++i)
    if (ids_[i] != static_cast<NodeId>(i)) { dense_ids_ = false; break; }
  build(edges);
}

void WeightedGraph::build(const std::vector<std::pair<NodeId, NodeId>>& edges) {
  const std::size_t n = ids_.size();
  if (n > 0) require(ids_.front() >= 0, "node identifiers must be nonnegative");
  for (double w : weights_) require(w >= 0.0, "node weights must be nonnegative");

  edges_.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    require(u != v, "self loops are not allowed");
    std::size_t i = index_of(u), j = index_of(v);
    if (i > j) std::swap(i, j);
    edges_.emplace_back(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
  require(std::adjacent_find(edges_.begin(), edges_.end()) == edges_.end(),
          "duplicate edges are not allowed");

  std::vector<std::size_t> deg(n, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  neighbors_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges_) {
    neighbors_[fill[i]++] = j;
    neighbors_[fill[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(neighbors_.begin() + offsets_[i], neighbors_.begin() + offsets_[i + 1]);

  max_degree_ = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

bool WeightedGraph::has_node(NodeId v) const {
  if (dense_ids_) return v >= 0 && static_cast<std::size_t>(v) < ids_.size();
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

std::size_t WeightedGraph::index_of(NodeId v) const {
  if (dense_ids_) {
    require(v >= 0 && static_cast<std::size_t>(v) < ids_.size(), "unknown node identifier");
    return static_cast<std::size_t>(v);
  }
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  require(it != ids_.end() && *it == v, "unknown node identifier");
  return static_cast<std::size_t>(it - ids_.begin());
}

bool WeightedGraph::has_edge(std::size_t i, std::size_t j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

double set_weight(const WeightedGraph& g, std::span<const double> w,
                  std::span<const NodeId> members) {
  double s = 0.0;
  for (NodeId v : members) s += w[g.index_of(v)];
  return s;
}

bool is_independent(const WeightedGraph& g, std::span<const NodeId> members) {
  std::vector<char> in(g.n(), 0);
  for (NodeId v : members) in[g.index_of(v)] = 1;
  for (NodeId v : members)
    for (std::size_t u : g.neighbors(g.index_of(v)))
      if (in[u]) return false;
  return true;
}

IndependentSet make_independent_set(const WeightedGraph& g, std::span<const double> w,
                                    std::vector<NodeId> members, bool check) {
  std::sort(members.begin(), members.end());
  require(std::adjacent_find(members.begin(), members.end()) == members.end(),
          "independent set members must be distinct");
  if (check) require(is_independent(g, members), "member list is not independent");
  double s = set_weight(g, w, members);
  return IndependentSet{std::move(members), s};
}

double caro_wei_bound(const WeightedGraph& g) { return caro_wei_bound(g, g.weights()); }

double caro_wei_bound(const WeightedGraph& g, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) s += w[i] / static_cast<double>(g.degree(i) + 1);
  return s;
}

double edge_weight(const WeightedGraph& g, NodeId u, NodeId v) {
  std::size_t i = g.index_of(u), j = g.index_of(v);
  require(g.has_edge(i, j), "edge_weight needs an edge of the graph");
  return std::min(g.weight(i), g.weight(j));
}

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const NodeId> members) {
  std::vector<NodeId> ids(members.begin(), members.end());
  std::sort(ids.begin(), ids.end());
  require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(),
          "induced subgraph members must be distinct");
  std::vector<char> in(g.n(), 0);
  std::vector<double> w(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    std::size_t i = g.index_of(ids[k]);
    in[i] = 1;
    w[k] = g.weight(i);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [i, j] : g.edges())
    if (in[i] && in[j]) edges.emplace_back(g.id(i), g.id(j));
  return WeightedGraph(std::move(ids), edges, std::move(w));
}

namespace {

// Union-find on indices; returns false as soon as a cycle edge shows up.
struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

bool is_forest(const WeightedGraph& g) {
  DisjointSets ds(g.n());
  for (const auto& [i, j] : g.edges())
    if (!ds.unite(i, j)) return false;
  return true;
}

bool is_tree(const WeightedGraph& g) {
  return g.n() >= 1 && g.m() == g.n() - 1 && is_forest(g);
}

}  // namespace mwis
