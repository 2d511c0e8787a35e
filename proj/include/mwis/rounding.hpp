#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mwis/coloring.hpp"
#include "mwis/graph.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// Fractional independent-set assignment: x_v in [0,1], and every nonzero
// entry at least 1/granularity.
struct FractionalAssignment {
  std::vector<double> x;     // by graph index
  double granularity = 1.0;  // the K with x_v = 0 or x_v >= 1/K
};

FractionalAssignment uniform_assignment(const WeightedGraph& g, double value);
void validate_assignment(const WeightedGraph& g, const FractionalAssignment& a);

// u(x) = sum_v x_v w(v) and c(x) = sum_{uv in E} x_u x_v min(w(u), w(v)).
double utility(const WeightedGraph& g, std::span<const double> w, std::span<const double> x);
double cost(const WeightedGraph& g, std::span<const double> w, std::span<const double> x);

// Deterministic rounding of x into an independent set, one color class per
// round. Each node commits to 1 exactly when it carries fractional mass and
// committing does not decrease the conditional objective u-c (committed
// neighbors counted at their 0/1 value, uncommitted ones fractionally); a
// final local test drops the lighter endpoint of any conflicting edge, ties
// dropping the larger identifier. The result satisfies w(I) >= u(x) - c(x)
// with no epsilon loss; rounds = palette + 1.
std::pair<IndependentSet, RoundTrace> round_by_colors(const WeightedGraph& g,
                                                      std::span<const double> w,
                                                      const FractionalAssignment& x,
                                                      const Coloring& coloring);

// Uniform assignment x = 1/(2*beta) plus rounding. On any graph whose edges
// split into beta forests this returns weight >= (1-eps)*w(V)/(4*beta); the
// analytic premise cost(x) <= w(V)/(4*beta) is checked at runtime, so an
// invalid arboricity certificate fails loudly instead of silently degrading.
std::pair<IndependentSet, RoundTrace> mwis_4beta(const WeightedGraph& g,
                                                 std::span<const double> w, std::int64_t beta,
                                                 double eps);

// One round-robin of undecided (weight, id)-lexicographic local maxima joining
// the set; their neighbors drop out and announce it. Maximal independent set
// with (max_degree + 1) * w(I) >= w(V), checked exactly.
std::pair<IndependentSet, RoundTrace> greedy_local_max(const WeightedGraph& g,
                                                       std::span<const double> w);

enum class SubroutineMode { greedy, rounded_boosted };

// Independent set of weight >= (1-eps) * w(V)/(max_degree+1). Greedy mode
// reaches the bound with eps = 0 in one shot. Boosted mode iterates uniform
// rounding at x = 1/(2(max_degree+1)) with local-ratio residual updates until
// the accumulated guarantee is met (each iteration closes at least a quarter
// of the remaining gap), capped at ceil(8*(ln(1/eps)+1)) iterations with a
// greedy pass on the residual support as unconditional backstop.
std::pair<IndependentSet, RoundTrace> delta_plus_one_is(const WeightedGraph& g,
                                                        std::span<const double> w, double eps,
                                                        SubroutineMode mode);

}  // namespace mwis
