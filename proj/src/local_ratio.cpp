#include "mwis/local_ratio.hpp"

#include <algorithm>

#include "mwis/congest.hpp"

namespace mwis {

std::vector<double> residual_weights(const WeightedGraph& g, std::span<const double> w,
                                     std::span<const NodeId> i0) {
  require(w.size() == g.n(), "weight vector size must match n");
  require(is_independent(g, i0), "base set must be independent");
  std::vector<double> out(w.begin(), w.end());
  for (NodeId v : i0) {
    std::size_t i = g.index_of(v);
    out[i] -= w[i];
    for (std::size_t u : g.neighbors(i)) out[u] -= w[i];
  }
  for (double& x : out) x = std::max(0.0, x);
  return out;
}

IndependentSet compose(const WeightedGraph& g, std::span<const double> w,
                       std::span<const NodeId> i0, std::span<const NodeId> i1) {
  std::vector<double> res = residual_weights(g, w, i0);  // validates i0
  require(is_independent(g, i1), "second set must be independent");
  for (NodeId v : i1)
    require(res[g.index_of(v)] > 0.0,
            "second set may only contain nodes with positive residual weight");

  std::vector<char> blocked(g.n(), 0);  // closed neighborhood of i1
  for (NodeId v : i1) {
    std::size_t i = g.index_of(v);
    blocked[i] = 1;
    for (std::size_t u : g.neighbors(i)) blocked[u] = 1;
  }
  std::vector<NodeId> members(i1.begin(), i1.end());
  for (NodeId v : i0)
    if (!blocked[g.index_of(v)]) members.push_back(v);

  IndependentSet out = make_independent_set(g, w, std::move(members));
  double residual_gain = 0.0;
  for (NodeId v : i1) residual_gain += res[g.index_of(v)];
  ensure(geq_rel(out.weight, set_weight(g, w, i0) + residual_gain),
         "composition lost weight against the base + residual guarantee");
  return out;
}

namespace {

// Backward fold over layers: layer T commits in round 0, layer T-r commits in
// round r. A node joining announces itself once; hearing an announcement
// permanently blocks a node that has not joined yet.
struct FoldProgram {
  std::vector<std::int64_t> phases;  // rounds at which this node's layers come up
  std::int64_t last_round = 0;       // == T
  bool selected = false;
  bool blocked = false;

  bool member_of_phase(std::int64_t r) const {
    return std::binary_search(phases.begin(), phases.end(), r);
  }

  void act(NodeApi& api, std::int64_t r) {
    if (!selected && !blocked && member_of_phase(r)) {
      selected = true;
      api.broadcast({Word::id(1)});
    }
    if (r >= last_round) api.halt();
  }

  void initialize(NodeApi& api) {
    if (phases.empty() && last_round == 0) {
      api.halt();
      return;
    }
    act(api, 0);
  }

  void step(NodeApi& api) {
    if (!api.inbox().empty() && !selected) blocked = true;
    act(api, api.round());
  }
};

}  // namespace

std::pair<IndependentSet, RoundTrace> compose_sequence(
    const WeightedGraph& g, std::span<const double> w,
    const std::vector<std::vector<NodeId>>& sets) {
  require(w.size() == g.n(), "weight vector size must match n");
  if (sets.empty()) return {IndependentSet{}, RoundTrace{}};
  const std::int64_t T = static_cast<std::int64_t>(sets.size()) - 1;

  // Validate the layer conditions and collect the guaranteed value.
  std::vector<double> layer_w(w.begin(), w.end());
  double guaranteed = 0.0;
  for (std::size_t t = 0; t < sets.size(); ++t) {
    require(is_independent(g, sets[t]),
            "layer " + std::to_string(t) + " is not independent");
    for (NodeId v : sets[t]) {
      require(t == 0 || layer_w[g.index_of(v)] > 0.0,
              "layer " + std::to_string(t) +
                  " contains a node with zero residual weight");
      guaranteed += layer_w[g.index_of(v)];
    }
    if (t + 1 < sets.size()) layer_w = residual_weights(g, layer_w, sets[t]);
  }

  // phases[i] = rounds T - t at which node i's layers commit.
  std::vector<std::vector<std::int64_t>> phases(g.n());
  for (std::size_t t = 0; t < sets.size(); ++t)
    for (NodeId v : sets[t]) phases[g.index_of(v)].push_back(T - static_cast<std::int64_t>(t));
  for (auto& ph : phases) std::sort(ph.begin(), ph.end());

  auto result = run_programs<FoldProgram>(g, [&](std::size_t i) {
    FoldProgram p;
    p.phases = phases[i];
    p.last_round = phases[i].empty() ? 0 : T;
    return p;
  });

  std::vector<NodeId> members;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (result.programs[i].selected) members.push_back(g.id(i));
  IndependentSet out = make_independent_set(g, w, std::move(members));
  ensure(geq_rel(out.weight, guaranteed),
         "fold lost weight against the sum of layer residual values");
  ensure(result.trace.rounds <= T, "fold used more rounds than layers");
  ensure(result.trace.max_words <= 1, "fold messages must be one word");
  return {std::move(out), result.trace};
}

}  // namespace mwis
