#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// Partition of a forest into connected clusters. All derived quantities are
// recomputed from cluster_of on construction and never trusted from callers;
// cluster identifiers are normalized to the minimum member id.
struct Clustering {
  std::vector<NodeId> cluster_of;  // by graph index
  std::vector<NodeId> cluster_ids;  // sorted, unique
  std::vector<std::pair<std::size_t, std::size_t>> intercluster;  // index pairs, i < j
  std::int64_t max_diameter = 0;      // hop diameter of the largest cluster
  double intercluster_weight = 0.0;   // sum of min-endpoint weights over cut edges
  double edge_weight_total = 0.0;     // same sum over all edges of the forest

  double lambda() const {
    return edge_weight_total > 0.0 ? intercluster_weight / edge_weight_total : 0.0;
  }
};

// Validates connectivity of every cluster and measures diameters and cut
// weight. Throws std::invalid_argument if t has a cycle or a cluster is not
// connected.
Clustering make_clustering(const WeightedGraph& t, std::vector<NodeId> cluster_of);

// One cluster per node.
Clustering singleton_clustering(const WeightedGraph& t);

// Grows clusters along locally heaviest cut edges: every cluster marks its
// heaviest incident cut edge, the marked edges are oriented and 3-colored,
// a color-guided pruning keeps at least a quarter of the cut weight, and the
// kept edges merge their endpoint clusters. Guarantees, checked on exit:
// max diameter <= 9 * d_in + 8 and cut weight <= 3/4 of the input cut weight.
std::pair<Clustering, RoundTrace> cluster_merge(const WeightedGraph& t, const Clustering& c);

// Chops every cluster of diameter above 2*floor(1/delta) into depth bands by
// removing one residue class of its layered edges, the class of least weight.
// Guarantees, checked on exit: max diameter <= floor(2/delta) and cut weight
// grows by at most delta * (total edge weight).
std::pair<Clustering, RoundTrace> cluster_split(const WeightedGraph& t, const Clustering& c,
                                                double delta);

// Alternates batches of five merges with one split per halving phase until
// the cut weight is at most (eps/2) * (total edge weight) while the max
// diameter stays at most 16/eps. Both bounds are checked on exit.
std::pair<Clustering, RoundTrace> tree_clustering(const WeightedGraph& t, double eps);

}  // namespace mwis
