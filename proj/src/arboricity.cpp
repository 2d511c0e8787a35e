#include "mwis/arboricity.hpp"

#include <cmath>

#include "mwis/caro_wei.hpp"
#include "mwis/local_ratio.hpp"
#include "mwis/util.hpp"

namespace mwis {

std::vector<NodeId> low_degree_set(const WeightedGraph& g, std::int64_t cap) {
  require(cap >= 0, "degree cap must be nonnegative");
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (static_cast<std::int64_t>(g.degree(i)) <= cap) out.push_back(g.id(i));
  return out;
}

std::pair<IndependentSet, RoundTrace> approx_mwis_arboricity(const WeightedGraph& g,
                                                             std::span<const double> w,
                                                             std::int64_t beta,
                                                             double eps_prime,
                                                             SubroutineMode mode) {
  require(w.size() == g.n(), "weight vector size must match n");
  for (double v : w) require(v >= 0.0, "weights must be nonnegative");
  require(beta >= 1, "beta must be at least 1");
  require(eps_prime > 0.0 && eps_prime < 1.0, "eps' must lie in (0,1)");
  if (g.n() == 0) return {IndependentSet{}, RoundTrace{}};

  const std::int64_t low_cap = static_cast<std::int64_t>(
      std::floor((2.0 + eps_prime) * static_cast<double>(beta)));
  const std::int64_t depth_cap =
      static_cast<std::int64_t>(std::ceil(std::log(static_cast<double>(g.n())) /
                                          std::log((2.0 + eps_prime) / 2.0))) +
      1;

  std::vector<std::vector<NodeId>> layers;
  RoundTrace trace;
  std::vector<double> residual(w.begin(), w.end());
  std::vector<NodeId> remaining(g.ids().begin(), g.ids().end());
  std::int64_t depth = 0;

  while (!remaining.empty()) {
    ++depth;
    ensure(depth <= depth_cap,
           "peeling depth exceeded the bound implied by arboricity beta");
    const WeightedGraph level = induced_subgraph(g, remaining);
    const std::vector<NodeId> peeled = low_degree_set(level, low_cap);
    ensure(static_cast<double>(remaining.size() - peeled.size()) * (2.0 + eps_prime) <=
               2.0 * static_cast<double>(remaining.size()) + 1e-9,
           "low-degree set too small; beta is below the true arboricity");

    const WeightedGraph core = induced_subgraph(g, peeled);
    double level_value = 0.0;  // current weight of the peeled set
    std::vector<double> scaled(core.n());
    for (std::size_t j = 0; j < core.n(); ++j) {
      const double base = residual[g.index_of(core.id(j))];
      level_value += base;
      scaled[j] = base * (static_cast<double>(core.degree(j)) + 1.0);
    }

    auto [level_set, level_trace] = weighted_caro_wei(core, scaled, eps_prime, mode);
    ensure(geq_rel(level_set.weight, (1.0 - eps_prime) * level_value),
           "peeled level fell short of (1-eps') times its weight under scaling");
    trace += level_trace;

    // Keep only positive-weight picks (the degree-0 rule may admit others);
    // the back-to-front fold requires exactly this support condition.
    std::vector<NodeId> layer;
    for (NodeId v : level_set.members)
      if (layers.empty() || residual[g.index_of(v)] > 0.0) layer.push_back(v);
    if (!layer.empty()) {
      layers.push_back(layer);
      residual = residual_weights(g, residual, layer);
    }

    std::vector<NodeId> next;
    std::vector<char> gone(g.n(), 0);
    for (NodeId v : peeled) gone[g.index_of(v)] = 1;
    for (NodeId v : remaining)
      if (!gone[g.index_of(v)]) next.push_back(v);
    remaining = std::move(next);
  }

  auto [set, fold_trace] = compose_sequence(g, w, layers);
  trace += fold_trace;
  const double total = [&] {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
  }();
  ensure(geq_rel(set.weight,
                 (1.0 - eps_prime) * total / (static_cast<double>(low_cap) + 1.0)),
         "result fell short of (1-eps') * w(V) / (A+1)");
  ensure(geq_rel(set.weight, (1.0 - 2.0 * eps_prime) * total /
                                 (2.0 * static_cast<double>(beta) + 1.0)),
         "result fell short of (1-2*eps') * w(V) / (2*beta+1)");
  return {std::move(set), trace};
}

}  // namespace mwis
