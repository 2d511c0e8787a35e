#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/rounding.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// Degree thresholds 0 = d_0 < d_1 = min(max_degree, 1) < ... < d_T =
// max_degree, growing greedily with every ratio d_i / (d_{i-1}+1) at most
// 1/(1 - eps_prime). Nodes of degree in (d_{i-1}, d_i] form band i.
std::vector<std::int64_t> build_degree_classes(std::int64_t max_degree, double eps_prime);

// Independent set of weight >= (1-eps) * sum_v w(v)/(deg(v)+1). Degree-0
// nodes join outright; each degree band then runs the (max_degree+1)
// subroutine on the positive-residual part of the degree-capped subgraph,
// with local-ratio weight updates in between and a final back-to-front fold.
std::pair<IndependentSet, RoundTrace> weighted_caro_wei(
    const WeightedGraph& g, std::span<const double> w, double eps,
    SubroutineMode mode = SubroutineMode::greedy);

}  // namespace mwis
