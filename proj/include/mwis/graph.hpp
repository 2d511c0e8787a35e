#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mwis/util.hpp"

namespace mwis {

// Undirected simple graph with nonnegative node weights.
//
// Node identifiers are arbitrary distinct nonnegative integers; an induced
// subgraph keeps the identifiers of its parent graph, so tie-breaking rules
// stay stable across restriction. Library code addresses nodes by dense index
// 0..n-1 (position in the sorted identifier list); identifiers appear in
// messages, tie-breaks and the public set types. For a graph built with
// dense identifiers 0..n-1 the two coincide.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Dense identifiers 0..n-1. Empty weights mean unit weights.
  WeightedGraph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                std::vector<double> weights = {});

  // Explicit identifier set; weights[i] belongs to ids[i]. Identifiers must be
  // distinct and nonnegative; they get sorted internally.
  WeightedGraph(std::vector<NodeId> ids, const std::vector<std::pair<NodeId, NodeId>>& edges,
                std::vector<double> weights = {});

  std::size_t n() const { return ids_.size(); }
  std::size_t m() const { return edges_.size(); }

  std::span<const NodeId> ids() const { return ids_; }
  NodeId id(std::size_t i) const { return ids_[i]; }
  bool has_node(NodeId v) const;
  std::size_t index_of(NodeId v) const;  // throws std::invalid_argument if absent

  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const { return total_weight_; }

  std::span<const std::size_t> neighbors(std::size_t i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t max_degree() const { return max_degree_; }
  bool has_edge(std::size_t i, std::size_t j) const;

  // Edges as index pairs (i, j) with i < j, lexicographically sorted.
  std::span<const std::pair<std::size_t, std::size_t>> edges() const { return edges_; }

 private:
  void build(const std::vector<std::pair<NodeId, NodeId>>& edges);

  std::vector<NodeId> ids_;       // sorted ascending
  std::vector<double> weights_;   // by index
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> neighbors_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::size_t max_degree_ = 0;
  double total_weight_ = 0.0;
  bool dense_ids_ = true;
};

// Members are identifiers, sorted ascending. `weight` is the set's value under
// the weight function it was scored with (the graph's own weights unless the
// caller passed an alternative).
struct IndependentSet {
  std::vector<NodeId> members;
  double weight = 0.0;
};

// Sum of w over the member identifiers.
double set_weight(const WeightedGraph& g, std::span<const double> w,
                  std::span<const NodeId> members);

// True iff no two members are adjacent. Throws if a member id is not in g.
bool is_independent(const WeightedGraph& g, std::span<const NodeId> members);

// Scores (and by default validates) a member list into an IndependentSet.
IndependentSet make_independent_set(const WeightedGraph& g, std::span<const double> w,
                                    std::vector<NodeId> members, bool check = true);

// sum_v w(v) / (deg(v) + 1), the degree-weighted lower bound on the optimum.
double caro_wei_bound(const WeightedGraph& g);
double caro_wei_bound(const WeightedGraph& g, std::span<const double> w);

// Weight of an edge: min of its endpoint weights. u, v are identifiers and
// must form an edge of g.
double edge_weight(const WeightedGraph& g, NodeId u, NodeId v);

// Subgraph induced by the given member identifiers (weights and ids kept).
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const NodeId> members);

// True iff g has no cycle (connectivity not required).
bool is_forest(const WeightedGraph& g);

// Forest check plus connectivity (n >= 1 and m == n-1).
bool is_tree(const WeightedGraph& g);

}  // namespace mwis
