#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/rounding.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// Identifiers of the nodes with degree at most cap.
std::vector<NodeId> low_degree_set(const WeightedGraph& g, std::int64_t cap);

// Independent set of weight >= (1-eps') * w(V)/(A+1) >= (1-2*eps') *
// w(V)/(2*beta+1) with A = floor((2+eps')*beta), on graphs whose edges split
// into beta forests. Iteratively peels the degree-<=A set, solves it under
// degree-scaled weights, discounts the rest by local-ratio residuals, and
// folds the per-level sets back to front. Every level must shed at least an
// eps'/(2+eps') fraction of the remaining nodes; a beta below the true
// arboricity trips that check.
std::pair<IndependentSet, RoundTrace> approx_mwis_arboricity(
    const WeightedGraph& g, std::span<const double> w, std::int64_t beta, double eps_prime,
    SubroutineMode mode = SubroutineMode::greedy);

}  // namespace mwis
