#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mwis/congest.hpp"
#include "mwis/graph.hpp"
#include "mwis/trace.hpp"

namespace mwis {

struct Coloring {
  std::vector<std::int64_t> color;  // by graph index
  std::int64_t palette = 0;         // colors live in [0, palette)
};

// No edge may join two equal colors, and all colors must be in range.
bool is_proper(const WeightedGraph& g, const Coloring& c);

// Fast palette reduction from identifiers to O(max_degree^2) colors, one round
// per reduction step. Every node recolors itself via a low-degree polynomial
// over a prime field whose evaluations disagree with every neighbor somewhere.
// The final palette is at most 36 * max(max_degree, 1)^2; an edgeless graph
// finishes with palette 1 in zero rounds.
std::pair<Coloring, RoundTrace> linial_coloring(const WeightedGraph& g);

// 3-coloring of a rooted forest. `parent` maps each index to the identifier of
// its parent, or -1 at roots; every forest edge must be oriented by it.
// Iterated bit tricks shrink identifier-colors to palette 6, then three
// shift-and-eliminate pairs finish at palette 3. Only parents talk to
// children, one word per edge per round, and the round count is bounded by
// 8 + 2 * log*(identifier bound).
std::pair<Coloring, RoundTrace> cole_vishkin_3color(const WeightedGraph& forest,
                                                    std::span<const NodeId> parent);

// Proper recoloring into palette q' >= max_degree + 1, retiring one color per
// round from the top. Rounds = max(palette - q', 0).
std::pair<Coloring, RoundTrace> reduce_colors(const WeightedGraph& g, const Coloring& c,
                                              std::int64_t target_palette);

// Iterations of log2 until the value drops to 1 or below.
int log_star(double x);

// --- building blocks shared with the cluster-level recoloring in the tree
// pipeline and with centralized reference implementations ---

// Tick schedule for the rooted-tree 3-coloring: `iters` identifier-shrinking
// ticks followed by exactly six shift/eliminate ticks.
struct CvSchedule {
  std::int64_t iters = 0;
  std::int64_t total = 0;  // iters + 6
};
CvSchedule cv_schedule(std::int64_t id_bound);

// Value after tick t (1-based). own_prev is the node's value after tick t-1,
// own_prev2 after t-2 (== the value all its children hold during an eliminate
// tick), parent_prev the parent's value after t-1 (ignored at roots).
std::int64_t cv_tick(const CvSchedule& s, std::int64_t t, std::int64_t own_prev,
                     std::int64_t own_prev2, std::int64_t parent_prev, bool is_root);

}  // namespace mwis
