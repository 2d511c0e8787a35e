#include "mwis/tree_mwis.hpp"

#include <algorithm>
#include <cmath>

#include "mwis/congest.hpp"
#include "tree_support.hpp"

namespace mwis {

using detail::EchoState;
using detail::NO_PORT;
using detail::PortQueues;
using detail::RootedClusters;

namespace {

double max_val(double a, double b) { return a > b ? a : b; }

constexpr std::int64_t D_HELLO = 0, D_ECHO_UP = 1, D_ECHO_DOWN = 2, D_ORIENT = 3,
                       D_UP = 4, D_SEL = 5, D_XC = 6;

// Dynamic program over a rooted tree (or every tree of a cluster forest). In
// standalone mode (cid < 0) the component first elects its minimum identifier
// by echo, orients itself towards it, then folds the classic in/out tables
// upward and unrolls the selection downward. In confined mode (cid >= 0) the
// component is the node's cluster, the leader is known in advance, and after
// selection the endpoints of every cut edge exchange their choice so that the
// lighter selected endpoint withdraws.
struct DpProgram {
  NodeId cid = -1;

  std::size_t deg = 0;
  NodeId self = -1;
  double w_self = 0.0;
  bool confined = false;

  std::vector<NodeId> nb_cid;
  std::vector<double> nb_w;
  std::vector<NodeId> nb_id;
  std::size_t hello_got = 0;
  bool hello_done = false;

  std::vector<char> comp;  // ports inside the own component
  std::size_t n_comp = 0;

  bool oriented = false;
  std::size_t parent_port = NO_PORT;

  std::vector<char> have_dp;
  std::vector<double> dp_in, dp_out;
  std::size_t dp_got = 0;
  bool dp_sent = false;
  double in_val = 0.0, out_val = 0.0;

  int in_set = -1;  // -1 undecided
  bool decided = false;

  std::size_t n_cut = 0;
  std::vector<signed char> xc_flag;
  std::vector<double> xc_w;
  std::size_t xc_got = 0;

  int member = -1;  // selection after cross-edge conflicts

  EchoState echo;
  PortQueues out;
  bool echo_armed = false;
  bool orient_sent = false;

  std::int64_t output() const { return member; }

  void initialize(NodeApi& api) {
    deg = api.degree();
    self = api.id();
    w_self = api.weight();
    confined = cid >= 0;
    nb_cid.assign(deg, -1);
    nb_w.assign(deg, 0.0);
    nb_id.resize(deg);
    for (std::size_t p = 0; p < deg; ++p) nb_id[p] = api.neighbor(p);
    comp.assign(deg, 0);
    have_dp.assign(deg, 0);
    dp_in.assign(deg, 0.0);
    dp_out.assign(deg, 0.0);
    xc_flag.assign(deg, -1);
    xc_w.assign(deg, 0.0);
    echo.reserve(deg);
    out.arm(deg);
    for (std::size_t p = 0; p < deg; ++p)
      out.push(p, {Word::id(D_HELLO), Word::id(cid), Word::wt(w_self)});
    progress();
    finish(api);
  }

  void step(NodeApi& api) {
    for (const Arrival& a : api.inbox()) on_msg(a.port, a.payload);
    progress();
    finish(api);
  }

 private:
  void finish(NodeApi& api) {
    bool all_done = member >= 0 && (!echo_armed || echo.done());
    out.flush(api);
    if (all_done && out.empty()) {
      api.halt();
      return;
    }
    if (out.empty()) api.idle_until_message();
  }

  void on_msg(std::size_t port, const Message& m) {
    switch (m.at(0).as_id()) {
      case D_HELLO:
        nb_cid[port] = m.at(1).as_id();
        nb_w[port] = m.at(2).as_wt();
        ++hello_got;
        break;
      case D_ECHO_UP:
        echo.on_up(port, m.at(1).as_id());
        break;
      case D_ECHO_DOWN:
        echo.on_down(port, m.at(1).as_id());
        break;
      case D_ORIENT:
        ensure(!oriented, "duplicate orientation wave");
        oriented = true;
        parent_port = port;
        for (std::size_t p = 0; p < deg; ++p)
          if (comp[p] && p != port) out.push(p, {Word::id(D_ORIENT)});
        break;
      case D_UP:
        ensure(!have_dp[port], "duplicate table report");
        have_dp[port] = 1;
        dp_in[port] = m.at(1).as_wt();
        dp_out[port] = m.at(2).as_wt();
        ++dp_got;
        break;
      case D_SEL:
        ensure(in_set < 0, "duplicate selection notice");
        ensure(dp_sent && port == parent_port, "selection notice out of order");
        in_set = (m.at(1).as_id() == 0 && in_val >= out_val) ? 1 : 0;
        break;
      case D_XC:
        ensure(xc_flag[port] < 0, "duplicate cross-edge notice");
        xc_flag[port] = static_cast<signed char>(m.at(1).as_id());
        xc_w[port] = m.at(2).as_wt();
        ++xc_got;
        break;
      default:
        ensure(false, "unknown table message tag");
    }
  }

  void progress() {
    bool again = true;
    while (again) {
      again = false;
      if (!hello_done && hello_got == deg) {
        hello_done = true;
        for (std::size_t p = 0; p < deg; ++p) {
          comp[p] = confined ? (nb_cid[p] == cid) : 1;
          if (comp[p])
            ++n_comp;
          else
            ++n_cut;
        }
        if (!confined) {
          std::vector<char> active(comp.begin(), comp.end());
          echo.arm(active);
          echo_armed = true;
        } else if (cid == self) {
          start_orient();
        }
        again = true;
      }
      if (echo_armed)
        echo.advance(self, [&](std::size_t p, bool up, NodeId v) {
          out.push(p, {Word::id(up ? D_ECHO_UP : D_ECHO_DOWN), Word::id(v)});
          again = true;
        });
      if (echo_armed && echo.have_final && !orient_sent && echo.final_val == self) {
        start_orient();
        again = true;
      }
      if (oriented && !dp_sent &&
          dp_got == n_comp - (parent_port != NO_PORT ? 1 : 0)) {
        in_val = w_self;
        out_val = 0.0;
        for (std::size_t p = 0; p < deg; ++p) {
          if (!comp[p] || p == parent_port) continue;
          in_val += dp_out[p];
          out_val += max_val(dp_in[p], dp_out[p]);
        }
        dp_sent = true;
        if (parent_port != NO_PORT)
          out.push(parent_port,
                   {Word::id(D_UP), Word::wt(in_val), Word::wt(out_val)});
        else
          in_set = in_val >= out_val ? 1 : 0;
        again = true;
      }
      if (in_set >= 0 && !decided) {
        decided = true;
        for (std::size_t p = 0; p < deg; ++p) {
          if (comp[p] && p != parent_port)
            out.push(p, {Word::id(D_SEL), Word::id(in_set)});
          if (!comp[p])
            out.push(p, {Word::id(D_XC), Word::id(in_set), Word::wt(w_self)});
        }
        again = true;
      }
      if (decided && member < 0 && xc_got == n_cut) {
        bool keep = in_set == 1;
        if (keep)
          for (std::size_t p = 0; p < deg; ++p)
            if (!comp[p] && xc_flag[p] == 1 &&
                conflict_loser(w_self, self, xc_w[p], nb_id[p]) == self)
              keep = false;
        member = keep ? 1 : 0;
        again = true;
      }
    }
  }

  void start_orient() {
    orient_sent = true;
    oriented = true;
    parent_port = NO_PORT;
    for (std::size_t p = 0; p < deg; ++p)
      if (comp[p]) out.push(p, {Word::id(D_ORIENT)});
  }

 public:
  double seen_in() const { return in_val; }
  double seen_out() const { return out_val; }
  std::int64_t seen_parent_port() const {
    return parent_port == NO_PORT ? -1 : static_cast<std::int64_t>(parent_port);
  }
};

// Central selection for rooted components: the root joins iff joining is at
// least as good, everyone else joins iff the parent stayed out and joining is
// at least as good locally.
std::vector<char> central_selection(const TreeDpTables& tb, const RootedClusters& rooted) {
  std::vector<char> sel(tb.opt_in.size(), 0);
  for (std::size_t v : rooted.bfs_order) {
    bool can = rooted.parent_node[v] == static_cast<std::size_t>(-1) ||
               !sel[rooted.parent_node[v]];
    sel[v] = can && tb.opt_in[v] >= tb.opt_out[v];
  }
  return sel;
}

std::vector<NodeId> all_component_labels(const WeightedGraph& t) {
  return detail::component_min_labels(t, [](std::size_t, std::size_t) { return true; });
}

}  // namespace

TreeDpTables tree_dp_tables(const WeightedGraph& t) {
  require(is_forest(t), "input contains a cycle");
  const std::size_t n = t.n();
  TreeDpTables tb;
  tb.opt_in.assign(n, 0.0);
  tb.opt_out.assign(n, 0.0);
  tb.root_of = all_component_labels(t);
  tb.parent_port.assign(n, -1);
  RootedClusters rooted = detail::root_clusters(t, tb.root_of);
  for (std::size_t i = 0; i < n; ++i)
    if (rooted.parent_port[i] != NO_PORT)
      tb.parent_port[i] = static_cast<std::int64_t>(rooted.parent_port[i]);
  for (std::size_t q = rooted.bfs_order.size(); q-- > 0;) {
    std::size_t v = rooted.bfs_order[q];
    double in = t.weight(v), out = 0.0;
    for (std::size_t u : t.neighbors(v)) {
      if (rooted.parent_node[u] != v) continue;
      in += tb.opt_out[u];
      out += max_val(tb.opt_in[u], tb.opt_out[u]);
    }
    tb.opt_in[v] = in;
    tb.opt_out[v] = out;
  }
  return tb;
}

std::pair<IndependentSet, RoundTrace> tree_mwis_exact(const WeightedGraph& t) {
  require(is_forest(t), "input contains a cycle");
  if (t.n() == 0) return {IndependentSet{}, RoundTrace{}};

  auto result = run_programs<DpProgram>(t, [&](std::size_t) {
    return DpProgram{};  // standalone mode
  });

  TreeDpTables tb = tree_dp_tables(t);
  RootedClusters rooted = detail::root_clusters(t, tb.root_of);
  std::vector<char> sel = central_selection(tb, rooted);

  std::vector<NodeId> members;
  double opt_total = 0.0;
  for (std::size_t i = 0; i < t.n(); ++i) {
    const DpProgram& p = result.programs[i];
    ensure(p.seen_in() == tb.opt_in[i] && p.seen_out() == tb.opt_out[i],
           "distributed and central tables disagree");
    ensure(p.seen_parent_port() == tb.parent_port[i],
           "distributed and central orientations disagree");
    ensure(p.output() == (sel[i] ? 1 : 0),
           "distributed and central selections disagree");
    if (sel[i]) members.push_back(t.id(i));
    if (tb.root_of[i] == t.id(i)) opt_total += tb.opt(i);
  }
  IndependentSet set = make_independent_set(t, t.weights(), std::move(members));
  ensure(eq_rel(set.weight, opt_total), "selected weight differs from the table optimum");

  auto diam = [&] {
    std::int64_t d = 0;
    std::vector<std::int64_t> height(t.n(), 0), dm(t.n(), 0);
    for (std::size_t q = rooted.bfs_order.size(); q-- > 0;) {
      std::size_t v = rooted.bfs_order[q];
      std::int64_t top1 = -1, top2 = -1, best = 0;
      for (std::size_t u : t.neighbors(v))
        if (rooted.parent_node[u] == v) {
          best = std::max(best, dm[u]);
          if (height[u] > top1) {
            top2 = top1;
            top1 = height[u];
          } else if (height[u] > top2) {
            top2 = height[u];
          }
        }
      height[v] = top1 >= 0 ? top1 + 1 : 0;
      dm[v] = std::max(best, (top1 >= 0 ? top1 + 1 : 0) + (top2 >= 0 ? top2 + 1 : 0));
      if (rooted.parent_node[v] == static_cast<std::size_t>(-1)) d = std::max(d, dm[v]);
    }
    return d;
  }();
  ensure(result.trace.rounds <= 12 * diam + 30, "table passes took too many rounds");
  ensure(result.trace.max_words <= 3, "table messages exceeded 3 words");
  return {std::move(set), result.trace};
}

IndependentSet combine_cluster_solutions(const WeightedGraph& t, const Clustering& c,
                                         const std::vector<std::vector<NodeId>>& per_cluster) {
  const std::size_t n = t.n();
  require(c.cluster_of.size() == n, "clustering does not match the graph");
  require(per_cluster.size() == c.cluster_ids.size(), "one node set per cluster required");

  std::vector<char> chosen(n, 0);
  double sum = 0.0;
  for (std::size_t k = 0; k < per_cluster.size(); ++k)
    for (NodeId v : per_cluster[k]) {
      require(t.has_node(v), "per-cluster set names an unknown node");
      std::size_t i = t.index_of(v);
      require(c.cluster_of[i] == c.cluster_ids[k], "node listed under the wrong cluster");
      require(!chosen[i], "node listed twice");
      chosen[i] = 1;
      sum += t.weight(i);
    }

  std::vector<char> drop(n, 0);
  for (const auto& [i, j] : t.edges()) {
    if (!chosen[i] || !chosen[j]) continue;
    require(c.cluster_of[i] != c.cluster_of[j],
            "a per-cluster set is not independent inside its cluster");
    NodeId loser = conflict_loser(t.weight(i), t.id(i), t.weight(j), t.id(j));
    drop[loser == t.id(i) ? i : j] = 1;
  }

  std::vector<NodeId> members;
  for (std::size_t i = 0; i < n; ++i)
    if (chosen[i] && !drop[i]) members.push_back(t.id(i));
  IndependentSet set = make_independent_set(t, t.weights(), std::move(members));
  ensure(geq_rel(set.weight, sum - c.intercluster_weight),
         "combination lost more than the cut weight");
  return set;
}

std::pair<IndependentSet, RoundTrace> tree_approx_mwis(const WeightedGraph& t, double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must be in (0, 1]");
  if (t.n() == 0) return {IndependentSet{}, RoundTrace{}};
  require(is_tree(t), "input must be a single tree");

  auto [c, trace] = tree_clustering(t, eps);

  auto result = run_programs<DpProgram>(t, [&](std::size_t i) {
    DpProgram p;
    p.cid = c.cluster_of[i];
    return p;
  });
  ensure(result.trace.max_words <= 3, "table messages exceeded 3 words");

  // Mirror: the same tables on the forest without the cut edges, the same
  // selection, and the same conflict rule applied by the combination step.
  std::vector<std::pair<NodeId, NodeId>> inner;
  for (const auto& [i, j] : t.edges())
    if (c.cluster_of[i] == c.cluster_of[j]) inner.emplace_back(t.id(i), t.id(j));
  std::vector<NodeId> ids(t.ids().begin(), t.ids().end());
  WeightedGraph forest(ids, inner, t.weights());

  TreeDpTables tb = tree_dp_tables(forest);
  RootedClusters rooted = detail::root_clusters(forest, tb.root_of);
  std::vector<char> sel = central_selection(tb, rooted);

  std::vector<std::vector<NodeId>> per_cluster(c.cluster_ids.size());
  auto cluster_index = [&](NodeId cid) {
    return static_cast<std::size_t>(
        std::lower_bound(c.cluster_ids.begin(), c.cluster_ids.end(), cid) -
        c.cluster_ids.begin());
  };
  for (std::size_t i = 0; i < t.n(); ++i) {
    const DpProgram& p = result.programs[i];
    ensure(tb.root_of[i] == c.cluster_of[i],
           "cluster components do not match the clustering");
    ensure(p.seen_in() == tb.opt_in[i] && p.seen_out() == tb.opt_out[i],
           "distributed and central tables disagree");
    if (sel[i]) per_cluster[cluster_index(c.cluster_of[i])].push_back(t.id(i));
  }

  IndependentSet set = combine_cluster_solutions(t, c, per_cluster);
  {
    std::vector<NodeId> distributed;
    for (std::size_t i = 0; i < t.n(); ++i)
      if (result.programs[i].output() == 1) distributed.push_back(t.id(i));
    ensure(distributed == set.members,
           "distributed and central combined selections disagree");
  }

  TreeDpTables full = tree_dp_tables(t);
  double opt = 0.0;
  for (std::size_t i = 0; i < t.n(); ++i)
    if (full.root_of[i] == t.id(i)) opt += full.opt(i);
  ensure(geq_rel(set.weight, (1.0 - eps) * opt),
         "approximation fell below its guarantee");

  trace += result.trace;
  return {std::move(set), trace};
}

}  // namespace mwis
