#pragma once

#include <utility>
#include <vector>

#include "mwis/clustering.hpp"
#include "mwis/graph.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// Rooted dynamic-programming tables for maximum-weight independent sets on a
// forest. opt_in[i] is the best weight of an independent set in the subtree
// of node i that contains i; opt_out[i] the best that excludes i.
struct TreeDpTables {
  std::vector<double> opt_in;
  std::vector<double> opt_out;
  std::vector<NodeId> root_of;    // component root (minimum id), by index
  std::vector<std::int64_t> parent_port;  // port towards the root, -1 at roots

  double opt(std::size_t i) const { return opt_in[i] > opt_out[i] ? opt_in[i] : opt_out[i]; }
};

// Exact tables for a forest, each component rooted at its minimum id. Children
// are folded in ascending port order so results are bit-reproducible.
TreeDpTables tree_dp_tables(const WeightedGraph& t);

// Exact maximum-weight independent set on a forest via a distributed two-pass
// dynamic program (leaf-to-root tables, root-to-leaf selection). Ties keep the
// node in the set. Throws std::invalid_argument if t contains a cycle.
std::pair<IndependentSet, RoundTrace> tree_mwis_exact(const WeightedGraph& t);

// Unions per-cluster independent sets (indexed like c.cluster_ids) and, on
// every cut edge with both endpoints selected, drops the lighter endpoint
// (ties drop the larger id). The result loses at most the cut weight:
// w(result) >= sum of cluster set weights - c.intercluster_weight.
IndependentSet combine_cluster_solutions(const WeightedGraph& t, const Clustering& c,
                                         const std::vector<std::vector<NodeId>>& per_cluster);

// (1 - eps)-approximate maximum-weight independent set on a tree: builds a
// low-cut-weight clustering, solves each cluster exactly, and combines.
std::pair<IndependentSet, RoundTrace> tree_approx_mwis(const WeightedGraph& t, double eps);

}  // namespace mwis
