#pragma once

#include <span>

#include "mwis/graph.hpp"

namespace mwis {

// Exact maximum-weight independent set by branch and bound (highest-degree
// branching, weight-sum bound). Hard-limited to n <= 30. When cross_check is
// on (the default) and n <= 20, the result is verified against the exhaustive
// enumeration below; a mismatch throws invariant_violation.
IndependentSet brute_force_mwis(const WeightedGraph& g);
IndependentSet brute_force_mwis(const WeightedGraph& g, std::span<const double> w,
                                bool cross_check = true);

// Exact maximum-weight independent set by checking every vertex subset.
// Hard-limited to n <= 20. Independent development from the search above so
// the two can vouch for each other.
IndependentSet enumerate_mwis(const WeightedGraph& g);
IndependentSet enumerate_mwis(const WeightedGraph& g, std::span<const double> w);

}  // namespace mwis
