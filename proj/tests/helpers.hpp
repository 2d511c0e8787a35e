#pragma once

#include <random>
#include <utility>
#include <vector>

#include "mwis/graph.hpp"

// Small instance builders for tests. Deliberately independent of the library's
// generator module so the two can check each other.
namespace testing_support {

inline std::vector<double> random_weights(std::size_t n, std::uint64_t seed, double lo = 0.0,
                                          double hi = 10.0) {
  std::mt19937_64 rng(seed);
  std::vector<double> w(n);
  for (double& x : w)
    x = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  return w;
}

// Random attachment tree: node i > 0 picks a uniform parent among 0..i-1.
inline mwis::WeightedGraph random_tree(std::size_t n, std::uint64_t seed, bool unit_weights = false) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<mwis::NodeId, mwis::NodeId>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t p = rng() % i;
    edges.emplace_back(static_cast<mwis::NodeId>(p), static_cast<mwis::NodeId>(i));
  }
  std::vector<double> w;
  if (!unit_weights) w = random_weights(n, seed ^ 0x9e3779b97f4a7c15ULL);
  return mwis::WeightedGraph(n, edges, std::move(w));
}

// Erdos-Renyi style graph with inclusion probability p.
inline mwis::WeightedGraph random_graph(std::size_t n, double p, std::uint64_t seed,
                                        bool unit_weights = false) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<mwis::NodeId, mwis::NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < p)
        edges.emplace_back(static_cast<mwis::NodeId>(i), static_cast<mwis::NodeId>(j));
  std::vector<double> w;
  if (!unit_weights) w = random_weights(n, seed ^ 0xda942042e4dd58b5ULL);
  return mwis::WeightedGraph(n, edges, std::move(w));
}

inline mwis::WeightedGraph path_graph(std::size_t n, std::vector<double> weights = {}) {
  std::vector<std::pair<mwis::NodeId, mwis::NodeId>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.emplace_back(static_cast<mwis::NodeId>(i), static_cast<mwis::NodeId>(i + 1));
  return mwis::WeightedGraph(n, edges, std::move(weights));
}

inline mwis::WeightedGraph star_graph(std::size_t leaves, std::vector<double> weights = {}) {
  std::vector<std::pair<mwis::NodeId, mwis::NodeId>> edges;
  for (std::size_t i = 1; i <= leaves; ++i)
    edges.emplace_back(0, static_cast<mwis::NodeId>(i));
  return mwis::WeightedGraph(leaves + 1, edges, std::move(weights));
}

inline mwis::WeightedGraph clique_graph(std::size_t n, std::vector<double> weights = {}) {
  std::vector<std::pair<mwis::NodeId, mwis::NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.emplace_back(static_cast<mwis::NodeId>(i), static_cast<mwis::NodeId>(j));
  return mwis::WeightedGraph(n, edges, std::move(weights));
}

}  // namespace testing_support
