#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// Residual weight function after committing to the independent set i0:
// w'(v) = max(0, w(v) - sum of w over i0 members in v's closed neighborhood).
std::vector<double> residual_weights(const WeightedGraph& g, std::span<const double> w,
                                     std::span<const NodeId> i0);

// Combines a base set i0 with a set i1 picked under the residual weights:
// result = i1 plus every i0 member with no closed-neighborhood contact to i1.
// Every i1 member must have strictly positive residual weight. The result is
// independent and satisfies w(result) >= w(i0) + w'(i1); both are checked.
IndependentSet compose(const WeightedGraph& g, std::span<const double> w,
                       std::span<const NodeId> i0, std::span<const NodeId> i1);

// Folds a whole sequence I_0..I_T of layer solutions from the back in T
// rounds: members of later layers win, earlier members survive only without
// closed-neighborhood contact to the survivors. Layer i >= 1 may only contain
// nodes whose i-th residual weight is positive (checked, with the offending
// layer index reported). The returned weight is scored under w and is at
// least the sum over layers of the layer's own residual value of I_i.
std::pair<IndependentSet, RoundTrace> compose_sequence(const WeightedGraph& g,
                                                       std::span<const double> w,
                                                       const std::vector<std::vector<NodeId>>& sets);

}  // namespace mwis
