#include "mwis/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mwis/congest.hpp"
#include "mwis/local_ratio.hpp"
#include "mwis/util.hpp"

namespace mwis {

namespace {

void check_weights(const WeightedGraph& g, std::span<const double> w) {
  require(w.size() == g.n(), "weight vector size must match n");
  for (double v : w) require(v >= 0.0, "weights must be nonnegative");
}

double weight_sum(std::span<const double> w) {
  return std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

FractionalAssignment uniform_assignment(const WeightedGraph& g, double value) {
  require(value >= 0.0 && value <= 1.0, "assignment value must lie in [0,1]");
  FractionalAssignment a;
  a.x.assign(g.n(), value);
  a.granularity = value > 0.0 ? 1.0 / value : 1.0;
  return a;
}

void validate_assignment(const WeightedGraph& g, const FractionalAssignment& a) {
  require(a.x.size() == g.n(), "assignment size must match n");
  require(a.granularity >= 1.0, "granularity must be at least 1");
  for (double v : a.x) {
    require(v >= 0.0 && v <= 1.0, "assignment values must lie in [0,1]");
    require(v == 0.0 || v >= 1.0 / a.granularity - 1e-12,
            "nonzero assignment values must be at least 1/granularity");
  }
}

double utility(const WeightedGraph& g, std::span<const double> w, std::span<const double> x) {
  require(x.size() == g.n(), "assignment size must match n");
  check_weights(g, w);
  double s = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) s += x[i] * w[i];
  return s;
}

double cost(const WeightedGraph& g, std::span<const double> w, std::span<const double> x) {
  require(x.size() == g.n(), "assignment size must match n");
  check_weights(g, w);
  double s = 0.0;
  for (const auto& [i, j] : g.edges()) s += x[i] * x[j] * std::min(w[i], w[j]);
  return s;
}

namespace {

// The commit rule shared by the distributed program and its central replica:
// keep fractional mass only where the conditional gain is nonnegative.
bool commit_choice(double x_v, double gain) { return x_v > 0.0 && gain >= 0.0; }

// Rounding node. Every node announces (x_v, w_v) in round 0, commits at round
// color+1 (sending its bit unless it was massless anyway), and nodes that
// committed to 1 settle conflicts locally at round palette+1 from the commit
// bits that have all arrived by then. No messages exceed two words.
struct RoundingProgram {
  double x_v = 0.0;
  double w_v = 0.0;
  std::int64_t color = 0;
  std::int64_t palette = 1;

  bool committed_one = false;
  bool value = false;

  std::vector<double> nb_x;     // committed neighbors at their 0/1 value
  std::vector<double> nb_w;     // neighbor weights, from the round-0 exchange
  std::vector<char> nb_one;     // neighbor committed to 1

  void absorb(const NodeApi& api) {
    for (const Arrival& a : api.inbox()) {
      if (a.payload.size() == 2) {
        nb_x[a.port] = a.payload[0].as_wt();
        nb_w[a.port] = a.payload[1].as_wt();
      } else {
        const bool one = a.payload[0].as_id() == 1;
        nb_x[a.port] = one ? 1.0 : 0.0;
        nb_one[a.port] = one;
      }
    }
  }

  void initialize(NodeApi& api) {
    nb_x.assign(api.degree(), 0.0);
    nb_w.assign(api.degree(), 0.0);
    nb_one.assign(api.degree(), 0);
    api.broadcast({Word::wt(x_v), Word::wt(w_v)});
    api.wake_at(color + 1);
  }

  void step(NodeApi& api) {
    absorb(api);
    const std::int64_t r = api.round();
    if (r < color + 1) {
      api.wake_at(color + 1);
      return;
    }
    if (r == color + 1) {
      double gain = w_v;
      for (std::size_t p = 0; p < nb_x.size(); ++p) gain -= nb_x[p] * std::min(nb_w[p], w_v);
      committed_one = commit_choice(x_v, gain);
      value = committed_one;
      if (committed_one || x_v > 0.0) api.broadcast({Word::id(committed_one ? 1 : 0)});
      if (!committed_one || api.degree() == 0) {
        api.halt();
        return;
      }
      api.wake_at(palette + 1);
      return;
    }
    if (r < palette + 1) {
      api.wake_at(palette + 1);
      return;
    }
    // All commit bits are in; drop if any committed neighbor beats this node.
    for (std::size_t p = 0; p < nb_one.size(); ++p)
      if (nb_one[p] &&
          conflict_loser(w_v, api.id(), nb_w[p], api.neighbor(p)) == api.id()) {
        value = false;
        break;
      }
    api.halt();
  }
};

struct CentralRounding {
  std::vector<char> committed;  // 0/1 vector after all classes
  std::vector<char> member;     // after the conflict drop
};

// Sequential replica of the distributed schedule: classes commit in color
// order, each class all at once, gains folded in ascending neighbor order so
// the floating-point result matches the port-order fold bit for bit.
CentralRounding central_round(const WeightedGraph& g, std::span<const double> w,
                              const FractionalAssignment& a, const Coloring& c) {
  const std::size_t n = g.n();
  std::vector<std::vector<std::size_t>> classes(c.palette);
  for (std::size_t i = 0; i < n; ++i) classes[c.color[i]].push_back(i);

  std::vector<double> xt(a.x.begin(), a.x.end());
  CentralRounding out;
  out.committed.assign(n, 0);
  out.member.assign(n, 0);

  double phi = utility(g, w, xt) - cost(g, w, xt);
  for (const auto& cls : classes) {
    std::vector<std::pair<std::size_t, bool>> decisions;
    decisions.reserve(cls.size());
    for (std::size_t i : cls) {
      double gain = w[i];
      for (std::size_t j : g.neighbors(i)) gain -= xt[j] * std::min(w[j], w[i]);
      decisions.emplace_back(i, commit_choice(a.x[i], gain));
    }
    for (const auto& [i, one] : decisions) {
      out.committed[i] = one;
      xt[i] = one ? 1.0 : 0.0;
    }
    const double phi_next = utility(g, w, xt) - cost(g, w, xt);
    ensure(geq_rel(phi_next, phi),
           "a color-class commit decreased the conditional objective");
    phi = phi_next;
  }

  for (std::size_t i = 0; i < n; ++i) out.member[i] = out.committed[i];
  for (const auto& [i, j] : g.edges())
    if (out.committed[i] && out.committed[j]) {
      const NodeId loser = conflict_loser(w[i], g.id(i), w[j], g.id(j));
      out.member[loser == g.id(i) ? i : j] = 0;
    }
  return out;
}

}  // namespace

std::pair<IndependentSet, RoundTrace> round_by_colors(const WeightedGraph& g,
                                                      std::span<const double> w,
                                                      const FractionalAssignment& x,
                                                      const Coloring& coloring) {
  check_weights(g, w);
  validate_assignment(g, x);
  require(coloring.color.size() == g.n(), "coloring size must match n");
  require(is_proper(g, coloring), "coloring must be proper");
  require(geq_rel(utility(g, w, x.x) - cost(g, w, x.x), 0.0),
          "assignment must have nonnegative utility minus cost");
  if (g.n() == 0) return {IndependentSet{}, RoundTrace{}};

  auto run = run_programs<RoundingProgram>(g, [&](std::size_t i) {
    RoundingProgram p;
    p.x_v = x.x[i];
    p.w_v = w[i];
    p.color = coloring.color[i];
    p.palette = coloring.palette;
    return p;
  });

  const CentralRounding central = central_round(g, w, x, coloring);
  std::vector<double> xhat(g.n(), 0.0);
  std::vector<NodeId> members;
  for (std::size_t i = 0; i < g.n(); ++i) {
    ensure(run.programs[i].committed_one == static_cast<bool>(central.committed[i]),
           "distributed commit bits diverged from the sequential replica");
    ensure(run.programs[i].value == static_cast<bool>(central.member[i]),
           "distributed membership diverged from the sequential replica");
    xhat[i] = central.committed[i] ? 1.0 : 0.0;
    if (central.member[i]) members.push_back(g.id(i));
  }

  IndependentSet set = make_independent_set(g, w, std::move(members));
  const double committed_value = utility(g, w, xhat) - cost(g, w, xhat);
  ensure(geq_rel(set.weight, committed_value),
         "conflict drop lost more weight than the conflicting edges");
  ensure(geq_rel(committed_value, utility(g, w, x.x) - cost(g, w, x.x)),
         "rounding decreased utility minus cost");
  ensure(run.trace.rounds <= coloring.palette + 1, "rounding exceeded palette+1 rounds");
  ensure(run.trace.max_words <= 2, "rounding message exceeded two words");
  return {std::move(set), run.trace};
}

std::pair<IndependentSet, RoundTrace> mwis_4beta(const WeightedGraph& g,
                                                 std::span<const double> w, std::int64_t beta,
                                                 double eps) {
  check_weights(g, w);
  require(beta >= 1, "beta must be at least 1");
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  if (g.n() == 0) return {IndependentSet{}, RoundTrace{}};

  const double total = weight_sum(w);
  const FractionalAssignment x = uniform_assignment(g, 1.0 / (2.0 * static_cast<double>(beta)));
  ensure(geq_rel(total / (4.0 * static_cast<double>(beta)), cost(g, w, x.x)),
         "edge mass exceeds the premise for this beta; not a union of beta forests");

  auto [coloring, color_trace] = linial_coloring(g);
  auto [set, round_trace] = round_by_colors(g, w, x, coloring);
  RoundTrace trace = color_trace + round_trace;
  ensure(geq_rel(set.weight, (1.0 - eps) * total / (4.0 * static_cast<double>(beta))),
         "result fell short of (1-eps) * w(V) / (4*beta)");
  return {std::move(set), trace};
}

namespace {

// Greedy join protocol. Tag 0 carries the weight exchange, tag 1 announces
// joining the set, tag 2 announces dropping out. Undecided nodes that beat
// every undecided neighbor in (weight, id) order join; their neighbors leave
// and tell the rest, which re-examine their situation on arrival.
struct GreedyProgram {
  double w_v = 0.0;
  bool value = false;

  std::vector<double> nb_w;
  std::vector<char> undecided;

  void initialize(NodeApi& api) {
    if (api.degree() == 0) {
      value = true;
      api.halt();
      return;
    }
    nb_w.assign(api.degree(), 0.0);
    undecided.assign(api.degree(), 1);
    api.broadcast({Word::id(0), Word::wt(w_v)});
  }

  void step(NodeApi& api) {
    bool member_neighbor = false;
    for (const Arrival& a : api.inbox()) {
      const std::int64_t tag = a.payload[0].as_id();
      if (tag == 0)
        nb_w[a.port] = a.payload[1].as_wt();
      else if (tag == 1)
        member_neighbor = true;
      else
        undecided[a.port] = 0;
    }
    if (member_neighbor) {
      api.broadcast({Word::id(2)});
      api.halt();
      return;
    }
    for (std::size_t p = 0; p < undecided.size(); ++p)
      if (undecided[p] && !weight_id_less(nb_w[p], api.neighbor(p), w_v, api.id())) {
        api.idle_until_message();
        return;
      }
    value = true;
    api.broadcast({Word::id(1)});
    api.halt();
  }

  std::int64_t output() const { return value ? 1 : 0; }
};

}  // namespace

std::pair<IndependentSet, RoundTrace> greedy_local_max(const WeightedGraph& g,
                                                       std::span<const double> w) {
  check_weights(g, w);
  if (g.n() == 0) return {IndependentSet{}, RoundTrace{}};

  auto [bits, trace] = run_outputs<GreedyProgram>(g, [&](std::size_t i) {
    GreedyProgram p;
    p.w_v = w[i];
    return p;
  });

  std::vector<NodeId> members;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (bits[i]) members.push_back(g.id(i));
  IndependentSet set = make_independent_set(g, w, std::move(members));

  for (std::size_t i = 0; i < g.n(); ++i) {
    if (bits[i]) continue;
    bool covered = false;
    for (std::size_t j : g.neighbors(i)) covered = covered || bits[j];
    ensure(covered, "dropped node has no member in its neighborhood");
  }
  ensure(geq_rel(static_cast<double>(g.max_degree() + 1) * set.weight, weight_sum(w)),
         "greedy charging bound (max_degree+1) * w(I) >= w(V) failed");
  ensure(trace.max_words <= 2, "greedy message exceeded two words");
  return {std::move(set), trace};
}

std::pair<IndependentSet, RoundTrace> delta_plus_one_is(const WeightedGraph& g,
                                                        std::span<const double> w, double eps,
                                                        SubroutineMode mode) {
  check_weights(g, w);
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  if (g.n() == 0) return {IndependentSet{}, RoundTrace{}};

  const double total = weight_sum(w);
  const double denom = static_cast<double>(g.max_degree()) + 1.0;
  const double target = (1.0 - eps) * total / denom;

  if (mode == SubroutineMode::greedy) {
    auto [set, trace] = greedy_local_max(g, w);
    ensure(geq_rel(set.weight, target), "greedy fell short of (1-eps) * w(V) / (max_degree+1)");
    return {std::move(set), trace};
  }

  const auto support_of = [&](std::span<const double> wt) {
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < g.n(); ++i)
      if (wt[i] > 0.0) ids.push_back(g.id(i));
    return ids;
  };
  const auto restrict_to = [&](const WeightedGraph& h, std::span<const double> wt) {
    std::vector<double> wh(h.n());
    for (std::size_t j = 0; j < h.n(); ++j) wh[j] = wt[g.index_of(h.id(j))];
    return wh;
  };

  // Each pass banks at least a quarter of the still-missing value, so the cap
  // leaves a comfortable margin over the log_{4/3}(1/eps) passes needed; a
  // greedy pass on what is left makes the bound unconditional anyway.
  const int cap = static_cast<int>(std::ceil(8.0 * (std::log(1.0 / eps) + 1.0)));
  std::vector<double> residual(w.begin(), w.end());
  std::vector<std::vector<NodeId>> layers;
  RoundTrace trace;
  double banked = 0.0;

  for (int t = 0; t < cap && banked < target; ++t) {
    const double remaining = weight_sum(residual);
    if (remaining <= 0.0) break;
    const std::vector<NodeId> support = support_of(residual);
    const WeightedGraph h = induced_subgraph(g, support);
    const std::vector<double> wh = restrict_to(h, residual);

    const FractionalAssignment x = uniform_assignment(h, 1.0 / (2.0 * denom));
    auto [coloring, color_trace] = linial_coloring(h);
    auto [layer, layer_trace] = round_by_colors(h, wh, x, coloring);
    ensure(geq_rel(layer.weight, remaining / (4.0 * denom)),
           "rounding pass fell short of a quarter of the residual bound");

    banked += layer.weight;
    trace += color_trace;
    trace += layer_trace;
    layers.push_back(layer.members);
    residual = residual_weights(g, residual, layer.members);
  }

  if (banked < target) {
    const std::vector<NodeId> support = support_of(residual);
    if (!support.empty()) {
      const WeightedGraph h = induced_subgraph(g, support);
      const std::vector<double> wh = restrict_to(h, residual);
      auto [layer, layer_trace] = greedy_local_max(h, wh);
      banked += layer.weight;
      trace += layer_trace;
      layers.push_back(layer.members);
    }
  }

  auto [set, fold_trace] = compose_sequence(g, w, layers);
  trace += fold_trace;
  ensure(geq_rel(set.weight, target),
         "boosted subroutine fell short of (1-eps) * w(V) / (max_degree+1)");
  return {std::move(set), trace};
}

}  // namespace mwis
