#include "mwis/caro_wei.hpp"

#include <cmath>
#include <numeric>

#include "mwis/local_ratio.hpp"
#include "mwis/util.hpp"

namespace mwis {

std::vector<std::int64_t> build_degree_classes(std::int64_t max_degree, double eps_prime) {
  require(max_degree >= 0, "max degree must be nonnegative");
  require(eps_prime > 0.0 && eps_prime < 1.0, "eps' must lie in (0,1)");
  std::vector<std::int64_t> d{0};
  if (max_degree >= 1) d.push_back(1);
  while (d.back() < max_degree) {
    const double grown =
        std::floor((static_cast<double>(d.back()) + 1.0) / (1.0 - eps_prime));
    const std::int64_t next = std::min(max_degree, static_cast<std::int64_t>(grown));
    ensure(next > d.back(), "degree thresholds must strictly increase");
    d.push_back(next);
  }
  return d;
}

std::pair<IndependentSet, RoundTrace> weighted_caro_wei(const WeightedGraph& g,
                                                        std::span<const double> w, double eps,
                                                        SubroutineMode mode) {
  require(w.size() == g.n(), "weight vector size must match n");
  for (double v : w) require(v >= 0.0, "weights must be nonnegative");
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  if (g.n() == 0) return {IndependentSet{}, RoundTrace{}};

  const double eps_prime = eps / 2.0;
  const std::vector<std::int64_t> thresholds =
      build_degree_classes(static_cast<std::int64_t>(g.max_degree()), eps_prime);

  std::vector<std::vector<NodeId>> layers;
  RoundTrace trace;
  std::vector<double> residual(w.begin(), w.end());

  std::vector<NodeId> isolated;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (g.degree(i) == 0) isolated.push_back(g.id(i));
  if (!isolated.empty()) {
    layers.push_back(isolated);
    residual = residual_weights(g, residual, isolated);
  }

  for (std::size_t band = 1; band < thresholds.size(); ++band) {
    const std::int64_t cap = thresholds[band];
    double band_total = 0.0;  // current weight of every node with degree <= cap
    std::vector<NodeId> support;
    for (std::size_t i = 0; i < g.n(); ++i)
      if (static_cast<std::int64_t>(g.degree(i)) <= cap) {
        band_total += residual[i];
        if (residual[i] > 0.0) support.push_back(g.id(i));
      }
    if (support.empty()) continue;

    const WeightedGraph h = induced_subgraph(g, support);
    ensure(static_cast<std::int64_t>(h.max_degree()) <= cap,
           "band subgraph exceeds its degree threshold");
    std::vector<double> wh(h.n());
    for (std::size_t j = 0; j < h.n(); ++j) wh[j] = residual[g.index_of(h.id(j))];

    auto [layer, sub_trace] = delta_plus_one_is(h, wh, eps_prime, mode);
    ensure(geq_rel(layer.weight,
                   (1.0 - eps_prime) * band_total / (static_cast<double>(cap) + 1.0)),
           "degree band fell short of (1-eps') * band weight / (d_i+1)");
    layers.push_back(layer.members);
    trace += sub_trace;
    residual = residual_weights(g, residual, layer.members);
  }

  auto [set, fold_trace] = compose_sequence(g, w, layers);
  trace += fold_trace;
  ensure(geq_rel(set.weight, (1.0 - eps) * caro_wei_bound(g, w)),
         "result fell short of (1-eps) times the degree-weighted bound");
  return {std::move(set), trace};
}

}  // namespace mwis
