#include "mwis/oracle.hpp"

#include <bit>
#include <cstdint>

namespace mwis {

namespace {

std::vector<NodeId> mask_to_members(const WeightedGraph& g, std::uint64_t mask) {
  std::vector<NodeId> members;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (mask >> i & 1) members.push_back(g.id(i));
  return members;
}

struct BranchAndBound {
  const WeightedGraph& g;
  std::span<const double> w;
  std::vector<std::uint64_t> adj;
  double best = 0.0;
  std::uint64_t best_mask = 0;

  explicit BranchAndBound(const WeightedGraph& graph, std::span<const double> weights)
      : g(graph), w(weights), adj(graph.n(), 0) {
    for (const auto& [i, j] : g.edges()) {
      adj[i] |= std::uint64_t{1} << j;
      adj[j] |= std::uint64_t{1} << i;
    }
  }

  double mask_weight(std::uint64_t mask) const {
    double s = 0.0;
    while (mask) {
      int b = std::countr_zero(mask);
      s += w[b];
      mask &= mask - 1;
    }
    return s;
  }

  void record(std::uint64_t mask, double value) {
    if (value > best) {
      best = value;
      best_mask = mask;
    }
  }

  void search(std::uint64_t avail, std::uint64_t chosen, double value) {
    if (avail == 0) {
      record(chosen, value);
      return;
    }
    if (value + mask_weight(avail) <= best) return;
    // Find the available node of highest residual degree; if everything has
    // degree <= 1 the rest decomposes into isolated nodes and disjoint edges,
    // which we settle directly.
    std::size_t pivot = 0;
    int pivot_deg = -1;
    std::uint64_t scan = avail;
    while (scan) {
      int b = std::countr_zero(scan);
      scan &= scan - 1;
      int d = std::popcount(adj[b] & avail);
      if (d > pivot_deg) {
        pivot_deg = d;
        pivot = static_cast<std::size_t>(b);
      }
    }
    if (pivot_deg <= 1) {
      std::uint64_t take = 0, rest = avail;
      while (rest) {
        int b = std::countr_zero(rest);
        rest &= rest - 1;
        std::uint64_t nb = adj[b] & avail;
        if (nb == 0) {
          take |= std::uint64_t{1} << b;
        } else {
          int o = std::countr_zero(nb);
          rest &= ~nb;
          take |= std::uint64_t{1} << (w[b] >= w[o] ? b : o);
        }
      }
      record(chosen | take, value + mask_weight(take));
      return;
    }
    std::uint64_t pbit = std::uint64_t{1} << pivot;
    search(avail & ~(adj[pivot] | pbit), chosen | pbit, value + w[pivot]);
    search(avail & ~pbit, chosen, value);
  }
};

}  // namespace

IndependentSet enumerate_mwis(const WeightedGraph& g) { return enumerate_mwis(g, g.weights()); }

IndependentSet enumerate_mwis(const WeightedGraph& g, std::span<const double> w) {
  const std::size_t n = g.n();
  require(n <= 20, "enumerate_mwis is limited to n <= 20");
  require(w.size() == n, "weight vector size must match n");
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& [i, j] : g.edges()) {
    adj[i] |= std::uint32_t{1} << j;
    adj[j] |= std::uint32_t{1} << i;
  }
  const std::uint32_t top = n == 0 ? 1 : (std::uint32_t{1} << n);
  std::vector<char> ok(top, 0);
  ok[0] = 1;
  double best = 0.0;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < top; ++mask) {
    int b = std::countr_zero(mask);
    std::uint32_t rest = mask & (mask - 1);
    ok[mask] = ok[rest] && (adj[b] & rest) == 0;
    if (!ok[mask]) continue;
    double s = 0.0;
    for (std::uint32_t t = mask; t; t &= t - 1) s += w[std::countr_zero(t)];
    if (s > best) {
      best = s;
      best_mask = mask;
    }
  }
  return make_independent_set(g, w, mask_to_members(g, best_mask), false);
}

IndependentSet brute_force_mwis(const WeightedGraph& g) {
  return brute_force_mwis(g, g.weights(), true);
}

IndependentSet brute_force_mwis(const WeightedGraph& g, std::span<const double> w,
                                bool cross_check) {
  require(g.n() <= 30, "brute_force_mwis is limited to n <= 30");
  require(w.size() == g.n(), "weight vector size must match n");
  BranchAndBound bb(g, w);
  bb.search((std::uint64_t{1} << g.n()) - 1, 0, 0.0);
  IndependentSet result = make_independent_set(g, w, mask_to_members(g, bb.best_mask), true);
  if (cross_check && g.n() <= 20) {
    IndependentSet check = enumerate_mwis(g, w);
    ensure(eq_rel(result.weight, check.weight),
           "exact search and exhaustive enumeration disagree");
  }
  return result;
}

}  // namespace mwis
