#include "mwis/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "mwis/coloring.hpp"
#include "mwis/congest.hpp"
#include "tree_support.hpp"

namespace mwis {

using detail::EchoState;
using detail::NO_PORT;
using detail::PortQueues;
using detail::RootedClusters;

namespace {

// Lexicographic key of a cut edge: weight, then the smaller endpoint id, then
// the larger one. Used to pick each cluster's locally heaviest cut edge with a
// total order, so the maximum is independent of fold order.
struct Cand {
  double w = -1.0;  // negative means "no candidate"
  NodeId s = -1;
  NodeId l = -1;
};

bool cand_less(const Cand& a, const Cand& b) {
  if (a.w != b.w) return a.w < b.w;
  if (a.s != b.s) return a.s < b.s;
  return a.l < b.l;
}

double min_weight(double a, double b) { return a < b ? a : b; }

// Per-cluster hop diameters, replicated by the same height/diameter fold the
// distributed programs use (children in ascending port order; integers, so the
// fold order only matters for symmetry with the protocol).
std::vector<std::int64_t> cluster_diameters(const WeightedGraph& t,
                                            std::span<const NodeId> label,
                                            const RootedClusters& rooted) {
  const std::size_t n = t.n();
  std::vector<std::int64_t> height(n, 0), diam(n, 0);
  for (std::size_t k = rooted.bfs_order.size(); k-- > 0;) {
    std::size_t v = rooted.bfs_order[k];
    std::int64_t top1 = -1, top2 = -1, best = 0;
    auto nb = t.neighbors(v);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      std::size_t u = nb[p];
      if (label[u] != label[v] || rooted.parent_node[u] != v) continue;
      best = std::max(best, diam[u]);
      if (height[u] > top1) {
        top2 = top1;
        top1 = height[u];
      } else if (height[u] > top2) {
        top2 = height[u];
      }
    }
    height[v] = top1 >= 0 ? top1 + 1 : 0;
    std::int64_t through = (top1 >= 0 ? top1 + 1 : 0) + (top2 >= 0 ? top2 + 1 : 0);
    diam[v] = std::max(best, through);
  }
  return diam;  // meaningful at cluster roots
}

}  // namespace

Clustering make_clustering(const WeightedGraph& t, std::vector<NodeId> cluster_of) {
  require(cluster_of.size() == t.n(), "cluster_of size must match the number of nodes");
  require(is_forest(t), "input contains a cycle");
  const std::size_t n = t.n();

  Clustering c;
  c.cluster_of.resize(n);
  {  // normalize labels to the minimum member identifier
    std::unordered_map<NodeId, NodeId> min_id;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, fresh] = min_id.try_emplace(cluster_of[i], t.id(i));
      if (!fresh) it->second = std::min(it->second, t.id(i));
    }
    for (std::size_t i = 0; i < n; ++i) c.cluster_of[i] = min_id[cluster_of[i]];
  }

  // Every cluster must be connected: flood from the minimum member over
  // same-cluster edges and demand full coverage.
  {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
      if (t.id(i) != c.cluster_of[i]) continue;
      seen[i] = 1;
      queue.push_back(i);
      while (!queue.empty()) {
        std::size_t v = queue.back();
        queue.pop_back();
        for (std::size_t u : t.neighbors(v))
          if (c.cluster_of[u] == c.cluster_of[v] && !seen[u]) {
            seen[u] = 1;
            queue.push_back(u);
          }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      require(seen[i], "cluster is not connected");
  }

  for (std::size_t i = 0; i < n; ++i) c.cluster_ids.push_back(c.cluster_of[i]);
  std::sort(c.cluster_ids.begin(), c.cluster_ids.end());
  c.cluster_ids.erase(std::unique(c.cluster_ids.begin(), c.cluster_ids.end()),
                      c.cluster_ids.end());

  for (const auto& [i, j] : t.edges()) {
    double w = min_weight(t.weight(i), t.weight(j));
    c.edge_weight_total += w;
    if (c.cluster_of[i] != c.cluster_of[j]) {
      c.intercluster.emplace_back(i, j);
      c.intercluster_weight += w;
    }
  }

  RootedClusters rooted = detail::root_clusters(t, c.cluster_of);
  auto diam = cluster_diameters(t, c.cluster_of, rooted);
  for (std::size_t i = 0; i < n; ++i)
    if (t.id(i) == c.cluster_of[i]) c.max_diameter = std::max(c.max_diameter, diam[i]);
  return c;
}

Clustering singleton_clustering(const WeightedGraph& t) {
  std::vector<NodeId> own(t.n());
  for (std::size_t i = 0; i < t.n(); ++i) own[i] = t.id(i);
  return make_clustering(t, std::move(own));
}

// ---------------------------------------------------------------------------
// Merge: every cluster marks its heaviest incident cut edge, marked edges are
// oriented into a rooted forest at cluster level (single marker = child;
// double mark = smaller cluster id is the child), the forest is 3-colored by
// the shared recoloring ticks, colors drive a pruning that keeps at least a
// quarter of the cut weight, and kept edges merge their endpoint clusters.
// ---------------------------------------------------------------------------

namespace {

constexpr std::int64_t M_HELLO = 0, M_CLAIM = 1, M_READY = 2, M_ANN = 3, M_MARKX = 4,
                       M_AGG = 5, M_CVX = 6, M_CVUP = 7, M_CVDOWN = 8, M_COLORX = 9,
                       M_PRUNEUP = 10, M_PRUNEDOWN = 11, M_VERDICT = 12, M_ECHO_UP = 13,
                       M_ECHO_DOWN = 14;

constexpr std::int64_t CODE_NONE = 0, CODE_CUT_PARENT = 1, CODE_CUT_CHILDREN = 2,
                       CODE_CUT_CHILDREN3 = 3;

// Port kinds once the mark exchange resolved an incident cut edge.
constexpr signed char K_UNKNOWN = -1;  // cut edge, marks not yet known
constexpr signed char K_PLAIN = 0;     // cut edge outside the marked forest
constexpr signed char K_PARENT = 1;    // marked, oriented towards the neighbor
constexpr signed char K_CHILD = 2;     // marked, oriented towards us
constexpr signed char K_MATE = 3;      // same-cluster edge

struct MergeProgram {
  // parameters
  NodeId cid = -1;
  CvSchedule sched;

  // identity
  std::size_t deg = 0;
  NodeId self = -1;
  double w_self = 0.0;
  bool leader = false;

  // neighborhood
  std::vector<NodeId> nb_cid;
  std::vector<double> nb_w;
  std::size_t hello_got = 0;
  bool hello_done = false;

  // cluster tree
  std::size_t parent_port = NO_PORT;
  bool claimed = false;
  std::vector<char> is_child;
  std::size_t n_children = 0;
  std::size_t cut_port_count = 0;

  // candidate convergecast
  std::vector<char> have_ready;
  std::vector<Cand> ready_val;
  std::size_t ready_got = 0;
  bool ready_sent = false;

  // announce and mark exchange
  Cand mark;
  bool have_mark = false;
  std::vector<char> own_mark;
  std::vector<signed char> peer_mark;  // -1 unknown
  std::vector<signed char> kind;
  std::size_t resolved = 0;
  bool ports_resolved = false;
  bool has_parent_me = false;  // one of my ports is the cluster's parent edge

  // root-flag convergecast
  std::vector<char> have_agg;
  std::vector<char> agg_val;
  std::size_t agg_got = 0;
  bool agg_sent = false;

  // recoloring (leader bookkeeping)
  bool cv_started = false;
  bool cv_root = false;
  bool cluster_has_parent = false;
  std::vector<std::int64_t> vals;
  std::vector<std::int64_t> pv;
  std::vector<char> pv_have;
  std::int64_t ticks_done = 0;

  // member-side value stream of the own cluster
  std::vector<std::int64_t> cval;
  std::vector<char> cval_have;
  std::int64_t final_color = -1;
  std::int64_t parent_final = -1;
  std::vector<std::int64_t> child_color;
  std::vector<char> colorx_sent;

  // pruning convergecast
  std::vector<char> have_prune;
  std::vector<double> pr_c, pr_c3;
  std::vector<std::int64_t> pr_pcol;
  std::size_t prune_got = 0;
  bool prune_sent = false;
  std::int64_t prune_code = -1;
  std::vector<signed char> verdict_own, verdict_peer;
  bool verdicts_sent = false;

  std::vector<NodeId> nb_id;  // neighbor identifiers, from the port map
  EchoState echo;
  PortQueues out;
  bool echo_armed = false;

  std::int64_t output() const { return echo.final_val; }

  void initialize(NodeApi& api) {
    deg = api.degree();
    self = api.id();
    w_self = api.weight();
    leader = (cid == self);
    nb_cid.assign(deg, -1);
    nb_w.assign(deg, 0.0);
    is_child.assign(deg, 0);
    have_ready.assign(deg, 0);
    ready_val.assign(deg, Cand{});
    own_mark.assign(deg, 0);
    peer_mark.assign(deg, -1);
    kind.assign(deg, K_UNKNOWN);
    have_agg.assign(deg, 0);
    agg_val.assign(deg, 0);
    child_color.assign(deg, -1);
    colorx_sent.assign(deg, 0);
    have_prune.assign(deg, 0);
    pr_c.assign(deg, 0.0);
    pr_c3.assign(deg, 0.0);
    pr_pcol.assign(deg, 0);
    verdict_own.assign(deg, -1);
    verdict_peer.assign(deg, -1);
    vals.assign(static_cast<std::size_t>(sched.total) + 1, -1);
    pv.assign(static_cast<std::size_t>(sched.total) + 1, -1);
    pv_have.assign(static_cast<std::size_t>(sched.total) + 1, 0);
    cval.assign(static_cast<std::size_t>(sched.total) + 1, -1);
    cval_have.assign(static_cast<std::size_t>(sched.total) + 1, 0);
    cval[0] = cid;
    cval_have[0] = 1;
    nb_id.resize(deg);
    for (std::size_t p = 0; p < deg; ++p) nb_id[p] = api.neighbor(p);
    echo.reserve(deg);
    out.arm(deg);
    for (std::size_t p = 0; p < deg; ++p)
      out.push(p, {Word::id(M_HELLO), Word::id(cid), Word::wt(w_self)});
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
    out.flush(api);
    if (echo.done() && out.empty()) {
      api.halt();
      return;
    }
    if (out.empty()) api.idle_until_message();
  }

  void on_msg(std::size_t port, const Message& m) {
    switch (m.at(0).as_id()) {
      case M_HELLO:
        nb_cid[port] = m.at(1).as_id();
        nb_w[port] = m.at(2).as_wt();
        ++hello_got;
        break;
      case M_CLAIM:
        ensure(!claimed, "duplicate cluster-tree claim");
        claimed = true;
        parent_port = port;
        for (std::size_t p = 0; p < deg; ++p)
          if (p != port && nb_cid[p] == cid) {
            is_child[p] = 1;
            ++n_children;
            out.push(p, {Word::id(M_CLAIM)});
          }
        break;
      case M_READY:
        ensure(!have_ready[port], "duplicate candidate report");
        have_ready[port] = 1;
        ready_val[port] = Cand{m.at(1).as_wt(), m.at(2).as_id(), m.at(3).as_id()};
        ++ready_got;
        break;
      case M_ANN:
        process_announce(Cand{m.at(1).as_wt(), m.at(2).as_id(), m.at(3).as_id()});
        break;
      case M_MARKX:
        peer_mark[port] = static_cast<signed char>(m.at(1).as_id());
        break;
      case M_CVX: {
        std::int64_t t = m.at(1).as_id(), v = m.at(2).as_id();
        if (t == sched.total) parent_final = v;
        if (leader)
          deliver_pv(t, v);
        else
          out.push(parent_port, {Word::id(M_CVUP), Word::id(t), Word::id(v)});
        break;
      }
      case M_CVUP: {
        std::int64_t t = m.at(1).as_id(), v = m.at(2).as_id();
        if (leader)
          deliver_pv(t, v);
        else
          out.push(parent_port, {Word::id(M_CVUP), Word::id(t), Word::id(v)});
        break;
      }
      case M_CVDOWN:
        on_cluster_val(m.at(1).as_id(), m.at(2).as_id());
        break;
      case M_COLORX:
        child_color[port] = m.at(1).as_id();
        break;
      case M_AGG:
        ensure(!have_agg[port], "duplicate root-flag report");
        have_agg[port] = 1;
        agg_val[port] = static_cast<char>(m.at(1).as_id());
        ++agg_got;
        break;
      case M_PRUNEUP:
        ensure(!have_prune[port], "duplicate pruning report");
        have_prune[port] = 1;
        pr_c[port] = m.at(1).as_wt();
        pr_c3[port] = m.at(2).as_wt();
        pr_pcol[port] = m.at(3).as_id();
        ++prune_got;
        break;
      case M_PRUNEDOWN:
        on_prune_code(m.at(1).as_id());
        break;
      case M_VERDICT:
        verdict_peer[port] = static_cast<signed char>(m.at(1).as_id());
        break;
      case M_ECHO_UP:
        echo.on_up(port, m.at(1).as_id());
        break;
      case M_ECHO_DOWN:
        echo.on_down(port, m.at(1).as_id());
        break;
      default:
        ensure(false, "unknown merge message tag");
    }
  }

  void progress() {
    bool again = true;
    while (again) {
      again = false;
      if (!hello_done && hello_got == deg) {
        hello_done = true;
        for (std::size_t p = 0; p < deg; ++p) {
          if (nb_cid[p] == cid)
            kind[p] = K_MATE;
          else
            ++cut_port_count;
        }
        if (leader) {
          claimed = true;
          for (std::size_t p = 0; p < deg; ++p)
            if (kind[p] == K_MATE) {
              is_child[p] = 1;
              ++n_children;
              out.push(p, {Word::id(M_CLAIM)});
            }
        }
        again = true;
      }
      if (hello_done && claimed && !ready_sent && ready_got == n_children) {
        Cand c;
        for (std::size_t p = 0; p < deg; ++p) {
          if (nb_cid[p] == cid) continue;
          Cand mine{min_weight(w_self, nb_w[p]), std::min(self, nb_id[p]),
                    std::max(self, nb_id[p])};
          if (cand_less(c, mine)) c = mine;
        }
        for (std::size_t p = 0; p < deg; ++p)
          if (have_ready[p] && cand_less(c, ready_val[p])) c = ready_val[p];
        ready_sent = true;
        if (leader)
          process_announce(c);
        else
          out.push(parent_port,
                   {Word::id(M_READY), Word::wt(c.w), Word::id(c.s), Word::id(c.l)});
        again = true;
      }
      if (have_mark && !ports_resolved) {
        for (std::size_t p = 0; p < deg; ++p) {
          if (kind[p] != K_UNKNOWN || peer_mark[p] < 0) continue;
          bool marked = own_mark[p] || peer_mark[p];
          if (!marked) {
            kind[p] = K_PLAIN;
          } else {
            NodeId child_cid;
            if (own_mark[p] && peer_mark[p])
              child_cid = std::min(cid, nb_cid[p]);
            else
              child_cid = own_mark[p] ? cid : nb_cid[p];
            if (child_cid == cid) {
              kind[p] = K_PARENT;
              has_parent_me = true;
              // tick 0 of the parent cluster is its identifier, known locally
              if (leader)
                deliver_pv(0, nb_cid[p]);
              else
                out.push(parent_port,
                         {Word::id(M_CVUP), Word::id(0), Word::id(nb_cid[p])});
            } else {
              kind[p] = K_CHILD;
              for (std::int64_t t = 1; t <= sched.total; ++t) {
                if (!cval_have[static_cast<std::size_t>(t)]) break;
                out.push(p, {Word::id(M_CVX), Word::id(t),
                             Word::id(cval[static_cast<std::size_t>(t)])});
              }
            }
          }
          ++resolved;
          again = true;
        }
        if (resolved == cut_port_count) {
          ports_resolved = true;
          again = true;
        }
      }
      if (ports_resolved && claimed && have_mark && mark.w >= 0.0 && !agg_sent &&
          agg_got == n_children) {
        bool has = has_parent_me;
        for (std::size_t p = 0; p < deg; ++p)
          if (have_agg[p] && agg_val[p]) has = true;
        agg_sent = true;
        if (leader) {
          cluster_has_parent = has;
          cv_root = !has;
          start_cv();
        } else {
          out.push(parent_port, {Word::id(M_AGG), Word::id(has ? 1 : 0)});
        }
        again = true;
      }
      if (cv_started && !cv_root && try_ticks()) again = true;
      if (final_color >= 0) {
        for (std::size_t p = 0; p < deg; ++p)
          if (kind[p] == K_PARENT && !colorx_sent[p]) {
            colorx_sent[p] = 1;
            out.push(p, {Word::id(M_COLORX), Word::id(final_color)});
            again = true;
          }
      }
      if (!prune_sent && can_prune()) {
        do_prune();
        again = true;
      }
      if (have_mark && mark.w < 0.0 && prune_code < 0) {
        prune_code = CODE_NONE;  // cluster has no cut edge at all
        again = true;
      }
      if (prune_code >= 0 && ports_resolved && !verdicts_sent) {
        for (std::size_t p = 0; p < deg; ++p) {
          if (kind[p] != K_PARENT && kind[p] != K_CHILD) continue;
          bool cut = (prune_code == CODE_CUT_PARENT && kind[p] == K_PARENT) ||
                     (prune_code == CODE_CUT_CHILDREN && kind[p] == K_CHILD) ||
                     (prune_code == CODE_CUT_CHILDREN3 && kind[p] == K_CHILD &&
                      child_color[p] == 2);
          verdict_own[p] = cut ? 1 : 0;
          out.push(p, {Word::id(M_VERDICT), Word::id(cut ? 1 : 0)});
        }
        verdicts_sent = true;
        again = true;
      }
      if (!echo_armed && verdicts_sent && prune_code >= 0) {
        bool all_peer = true;
        for (std::size_t p = 0; p < deg; ++p)
          if ((kind[p] == K_PARENT || kind[p] == K_CHILD) && verdict_peer[p] < 0)
            all_peer = false;
        if (all_peer) {
          std::vector<char> active(deg, 0);
          for (std::size_t p = 0; p < deg; ++p) {
            if (kind[p] == K_MATE) active[p] = 1;
            if ((kind[p] == K_PARENT || kind[p] == K_CHILD) && verdict_own[p] == 0 &&
                verdict_peer[p] == 0)
              active[p] = 1;
          }
          echo.arm(active);
          echo_armed = true;
          again = true;
        }
      }
      if (echo_armed)
        echo.advance(self, [&](std::size_t p, bool up, NodeId v) {
          out.push(p, {Word::id(up ? M_ECHO_UP : M_ECHO_DOWN), Word::id(v)});
          again = true;
        });
    }
  }

  void process_announce(const Cand& c) {
    ensure(!have_mark, "duplicate mark announcement");
    mark = c;
    have_mark = true;
    for (std::size_t p = 0; p < deg; ++p)
      if (is_child[p])
        out.push(p, {Word::id(M_ANN), Word::wt(c.w), Word::id(c.s), Word::id(c.l)});
    if (mark.w >= 0.0) {
      for (std::size_t p = 0; p < deg; ++p) {
        if (nb_cid[p] == cid) continue;
        NodeId s = std::min(self, nb_id[p]), l = std::max(self, nb_id[p]);
        own_mark[p] = (s == mark.s && l == mark.l) ? 1 : 0;
        out.push(p, {Word::id(M_MARKX), Word::id(own_mark[p] ? 1 : 0)});
      }
    }
  }

  void deliver_pv(std::int64_t t, std::int64_t v) {
    pv[static_cast<std::size_t>(t)] = v;
    pv_have[static_cast<std::size_t>(t)] = 1;
  }

  void start_cv() {
    cv_started = true;
    vals[0] = cid;
    if (cv_root) {
      for (std::int64_t t = 1; t <= sched.total; ++t) {
        auto ut = static_cast<std::size_t>(t);
        vals[ut] = cv_tick(sched, t, vals[ut - 1], t >= 2 ? vals[ut - 2] : -1, -1, true);
        on_cluster_val(t, vals[ut]);
      }
    } else {
      try_ticks();
    }
  }

  bool try_ticks() {
    bool prog = false;
    while (ticks_done < sched.total && pv_have[static_cast<std::size_t>(ticks_done)]) {
      std::int64_t t = ++ticks_done;
      auto ut = static_cast<std::size_t>(t);
      vals[ut] = cv_tick(sched, t, vals[ut - 1], t >= 2 ? vals[ut - 2] : -1,
                         pv[ut - 1], false);
      on_cluster_val(t, vals[ut]);
      prog = true;
    }
    return prog;
  }

  void on_cluster_val(std::int64_t t, std::int64_t v) {
    auto ut = static_cast<std::size_t>(t);
    ensure(!cval_have[ut], "duplicate cluster color value");
    cval[ut] = v;
    cval_have[ut] = 1;
    for (std::size_t p = 0; p < deg; ++p) {
      if (is_child[p]) out.push(p, {Word::id(M_CVDOWN), Word::id(t), Word::id(v)});
      if (kind[p] == K_CHILD) out.push(p, {Word::id(M_CVX), Word::id(t), Word::id(v)});
    }
    if (t == sched.total) final_color = v;
  }

  bool can_prune() const {
    if (!(have_mark && mark.w >= 0.0)) return false;
    if (final_color < 0 || !ports_resolved || !claimed) return false;
    if (prune_got != n_children) return false;
    for (std::size_t p = 0; p < deg; ++p)
      if (kind[p] == K_CHILD && child_color[p] < 0) return false;
    if (has_parent_me && parent_final < 0) return false;
    return true;
  }

  void do_prune() {
    double sum_c = 0.0, sum_c3 = 0.0;
    std::int64_t pcol = has_parent_me ? parent_final + 1 : 0;
    for (std::size_t p = 0; p < deg; ++p) {
      if (is_child[p]) {
        sum_c += pr_c[p];
        sum_c3 += pr_c3[p];
        pcol = std::max(pcol, pr_pcol[p]);
      } else if (kind[p] == K_CHILD) {
        double we = min_weight(w_self, nb_w[p]);
        sum_c += we;
        if (child_color[p] == 2) sum_c3 += we;
      }
    }
    prune_sent = true;
    if (!leader) {
      out.push(parent_port, {Word::id(M_PRUNEUP), Word::wt(sum_c), Word::wt(sum_c3),
                             Word::id(pcol)});
      return;
    }
    std::int64_t code = CODE_NONE;
    if (final_color == 0) {
      if (cluster_has_parent)
        code = mark.w > sum_c ? CODE_CUT_CHILDREN : CODE_CUT_PARENT;
    } else if (final_color == 1 && cluster_has_parent) {
      ensure(pcol >= 1, "parent color missing at pruning time");
      if (pcol - 1 == 2) code = mark.w > sum_c3 ? CODE_CUT_CHILDREN3 : CODE_CUT_PARENT;
    }
    on_prune_code(code);
  }

  void on_prune_code(std::int64_t code) {
    ensure(prune_code < 0, "duplicate pruning decision");
    prune_code = code;
    for (std::size_t p = 0; p < deg; ++p)
      if (is_child[p]) out.push(p, {Word::id(M_PRUNEDOWN), Word::id(code)});
  }

 public:
  // exposed for the differential check
  std::int64_t seen_final_color() const { return final_color; }
  std::int64_t seen_prune_code() const { return prune_code; }
};

// Centralized replica of the merge decisions, bit-identical by construction:
// the same candidate order, the same recoloring ticks, and the same
// ascending-port folds over the same cluster trees.
struct CentralMerge {
  std::vector<NodeId> label;            // new cluster label per node
  std::vector<std::int64_t> color;      // final color per cluster index (-1 outside forest)
  std::vector<std::int64_t> code;       // pruning decision per cluster index
};

CentralMerge central_merge(const WeightedGraph& t, const Clustering& c,
                           const CvSchedule& sched) {
  const std::size_t n = t.n();
  const std::size_t nc = c.cluster_ids.size();
  auto cluster_index = [&](NodeId cid) {
    return static_cast<std::size_t>(
        std::lower_bound(c.cluster_ids.begin(), c.cluster_ids.end(), cid) -
        c.cluster_ids.begin());
  };
  std::vector<std::size_t> cidx(n);
  for (std::size_t i = 0; i < n; ++i) cidx[i] = cluster_index(c.cluster_of[i]);

  // marks
  std::vector<Cand> mark(nc);
  for (const auto& [i, j] : t.edges()) {
    if (c.cluster_of[i] == c.cluster_of[j]) continue;
    Cand e{min_weight(t.weight(i), t.weight(j)), std::min(t.id(i), t.id(j)),
           std::max(t.id(i), t.id(j))};
    if (cand_less(mark[cidx[i]], e)) mark[cidx[i]] = e;
    if (cand_less(mark[cidx[j]], e)) mark[cidx[j]] = e;
  }

  // orientation of marked edges; parent pointer per cluster
  std::vector<char> has_parent(nc, 0);
  std::vector<std::size_t> parent(nc, static_cast<std::size_t>(-1));
  struct MEdge {
    std::size_t i, j;       // node indices
    std::size_t child_cl;   // cluster index of the child side
    std::size_t parent_cl;
  };
  std::vector<MEdge> marked;
  for (const auto& [i, j] : t.edges()) {
    if (c.cluster_of[i] == c.cluster_of[j]) continue;
    NodeId s = std::min(t.id(i), t.id(j)), l = std::max(t.id(i), t.id(j));
    std::size_t a = cidx[i], b = cidx[j];
    bool ma = mark[a].s == s && mark[a].l == l;
    bool mb = mark[b].s == s && mark[b].l == l;
    if (!ma && !mb) continue;
    NodeId child_cid = (ma && mb) ? std::min(c.cluster_of[i], c.cluster_of[j])
                                  : (ma ? c.cluster_of[i] : c.cluster_of[j]);
    std::size_t child_cl = child_cid == c.cluster_of[i] ? a : b;
    std::size_t parent_cl = child_cl == a ? b : a;
    ensure(!has_parent[child_cl], "a cluster acquired two parent edges");
    has_parent[child_cl] = 1;
    parent[child_cl] = parent_cl;
    marked.push_back(MEdge{i, j, child_cl, parent_cl});
  }

  // cluster-level recoloring
  const auto total = static_cast<std::size_t>(sched.total);
  std::vector<std::vector<std::int64_t>> hist(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    if (mark[k].w < 0.0) continue;
    hist[k].assign(total + 1, -1);
    hist[k][0] = c.cluster_ids[k];
  }
  for (std::int64_t tt = 1; tt <= sched.total; ++tt) {
    auto ut = static_cast<std::size_t>(tt);
    for (std::size_t k = 0; k < nc; ++k) {
      if (mark[k].w < 0.0) continue;
      std::int64_t pp = has_parent[k] ? hist[parent[k]][ut - 1] : -1;
      hist[k][ut] = cv_tick(sched, tt, hist[k][ut - 1], ut >= 2 ? hist[k][ut - 2] : -1,
                            pp, !has_parent[k]);
    }
  }
  std::vector<std::int64_t> color(nc, -1);
  for (std::size_t k = 0; k < nc; ++k)
    if (mark[k].w >= 0.0) color[k] = hist[k][total];

  // per-port kinds for the fold (child side of a marked edge sees K_PARENT)
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + t.degree(i);
  std::vector<signed char> kind_at(offsets[n], K_PLAIN);
  std::vector<std::size_t> peer_cluster(offsets[n], 0);
  auto port_of = [&](std::size_t at, std::size_t to) {
    auto nb = t.neighbors(at);
    return static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), to) -
                                    nb.begin());
  };
  for (const MEdge& e : marked) {
    std::size_t child_node = cidx[e.i] == e.child_cl ? e.i : e.j;
    std::size_t parent_node = child_node == e.i ? e.j : e.i;
    kind_at[offsets[child_node] + port_of(child_node, parent_node)] = K_PARENT;
    std::size_t at = offsets[parent_node] + port_of(parent_node, child_node);
    kind_at[at] = K_CHILD;
    peer_cluster[at] = e.child_cl;
  }

  // pruning sums, folded over each cluster tree exactly like the protocol
  RootedClusters rooted = detail::root_clusters(t, c.cluster_of);
  std::vector<double> sum_c(n, 0.0), sum_c3(n, 0.0);
  for (std::size_t q = rooted.bfs_order.size(); q-- > 0;) {
    std::size_t v = rooted.bfs_order[q];
    auto nb = t.neighbors(v);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      std::size_t u = nb[p];
      if (c.cluster_of[u] == c.cluster_of[v]) {
        if (rooted.parent_node[u] == v) {
          sum_c[v] += sum_c[u];
          sum_c3[v] += sum_c3[u];
        }
      } else if (kind_at[offsets[v] + p] == K_CHILD) {
        double we = min_weight(t.weight(v), t.weight(u));
        sum_c[v] += we;
        if (color[peer_cluster[offsets[v] + p]] == 2) sum_c3[v] += we;
      }
    }
  }

  // decisions
  std::vector<std::int64_t> code(nc, CODE_NONE);
  for (std::size_t k = 0; k < nc; ++k) {
    if (mark[k].w < 0.0) continue;
    std::size_t root = t.index_of(c.cluster_ids[k]);
    double sc = sum_c[root], sc3 = sum_c3[root];
    if (color[k] == 0) {
      if (has_parent[k]) code[k] = mark[k].w > sc ? CODE_CUT_CHILDREN : CODE_CUT_PARENT;
    } else if (color[k] == 1 && has_parent[k] && color[parent[k]] == 2) {
      code[k] = mark[k].w > sc3 ? CODE_CUT_CHILDREN3 : CODE_CUT_PARENT;
    }
  }

  // kept edges and the resulting components
  std::vector<char> kept_flag(t.m(), 0);
  {
    // map index pair -> edge position for the marked list
    std::unordered_map<std::uint64_t, std::size_t> pos;
    pos.reserve(t.m() * 2);
    std::size_t e = 0;
    for (const auto& [i, j] : t.edges())
      pos[(static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j)] = e++;
    for (const MEdge& me : marked) {
      bool cut = code[me.child_cl] == CODE_CUT_PARENT;
      if (code[me.parent_cl] == CODE_CUT_CHILDREN) cut = true;
      if (code[me.parent_cl] == CODE_CUT_CHILDREN3 && color[me.child_cl] == 2) cut = true;
      if (!cut)
        kept_flag[pos[(static_cast<std::uint64_t>(std::min(me.i, me.j)) << 32) |
                      static_cast<std::uint64_t>(std::max(me.i, me.j))]] = 1;
    }
  }
  std::vector<char> same(t.m(), 0);
  {
    std::size_t e = 0;
    for (const auto& [i, j] : t.edges()) {
      same[e] = c.cluster_of[i] == c.cluster_of[j];
      ++e;
    }
  }
  std::size_t e_at = 0;
  std::vector<NodeId> label =
      detail::component_min_labels(t, [&](std::size_t, std::size_t) {
        bool keep = same[e_at] || kept_flag[e_at];
        ++e_at;
        return keep;
      });
  return CentralMerge{std::move(label), std::move(color), std::move(code)};
}

}  // namespace

std::pair<Clustering, RoundTrace> cluster_merge(const WeightedGraph& t, const Clustering& c) {
  Clustering in = make_clustering(t, c.cluster_of);  // never trust caller measures
  if (t.n() == 0) return {in, RoundTrace{}};
  const CvSchedule sched = cv_schedule(t.id(t.n() - 1) + 1);

  auto result = run_programs<MergeProgram>(t, [&](std::size_t i) {
    MergeProgram p;
    p.cid = in.cluster_of[i];
    p.sched = sched;
    return p;
  });

  CentralMerge central = central_merge(t, in, sched);
  auto cluster_index = [&](NodeId cid) {
    return static_cast<std::size_t>(
        std::lower_bound(in.cluster_ids.begin(), in.cluster_ids.end(), cid) -
        in.cluster_ids.begin());
  };
  std::vector<NodeId> labels(t.n());
  for (std::size_t i = 0; i < t.n(); ++i) {
    const MergeProgram& p = result.programs[i];
    labels[i] = p.output();
    ensure(labels[i] == central.label[i],
           "distributed and central merges disagree on a cluster label");
    std::size_t k = cluster_index(in.cluster_of[i]);
    ensure(p.seen_final_color() == central.color[k],
           "distributed and central merges disagree on a cluster color");
    ensure(p.seen_prune_code() == central.code[k],
           "distributed and central merges disagree on a pruning decision");
  }

  Clustering out = make_clustering(t, labels);
  ensure(out.max_diameter <= 9 * in.max_diameter + 8,
         "merged diameter exceeds its 9d+8 bound");
  ensure(geq_rel(0.75 * in.intercluster_weight, out.intercluster_weight),
         "merge kept less than a quarter of the cut weight");
  ensure(result.trace.max_words <= 4, "merge exceeded 4 words per message");
  return {std::move(out), result.trace};
}

// ---------------------------------------------------------------------------
// Split: clusters above the diameter threshold layer themselves from their
// minimum-id member, group parent edges into depth residue classes, and drop
// the lightest class; bands of consecutive layers become the new clusters.
// ---------------------------------------------------------------------------

namespace {

constexpr std::int64_t S_HELLO = 0, S_CLAIM = 1, S_DIAM = 2, S_DECIDE = 3, S_CLS = 4,
                       S_PICK = 5, S_ECHO_UP = 6, S_ECHO_DOWN = 7;

struct SplitProgram {
  // parameters
  NodeId cid = -1;
  std::int64_t k = 1;
  std::int64_t threshold = 0;  // 2 * floor(1/delta)

  std::size_t deg = 0;
  NodeId self = -1;
  double w_self = 0.0;
  bool leader = false;

  std::vector<NodeId> nb_cid;
  std::vector<double> nb_w;
  std::size_t hello_got = 0;
  bool hello_done = false;

  std::size_t parent_port = NO_PORT;
  bool claimed = false;
  std::int64_t depth = -1;
  std::vector<char> is_child;
  std::size_t n_children = 0;

  std::vector<char> have_diam;
  std::vector<std::int64_t> dh, dd;
  std::size_t diam_got = 0;
  bool diam_sent = false;

  bool cls_started = false;
  std::vector<std::deque<double>> pend;
  std::vector<std::int64_t> cls_got;
  std::int64_t next_p = 0;
  std::vector<double> sums;  // leader only

  std::int64_t pick = -2;  // -2 unknown, -1 keep everything, >= 0 dropped class

  EchoState echo;
  PortQueues out;
  bool echo_armed = false;

  std::int64_t output() const { return echo.final_val; }
  std::int64_t seen_pick() const { return pick; }
  std::int64_t seen_depth() const { return depth; }

  void initialize(NodeApi& api) {
    deg = api.degree();
    self = api.id();
    w_self = api.weight();
    leader = (cid == self);
    nb_cid.assign(deg, -1);
    nb_w.assign(deg, 0.0);
    is_child.assign(deg, 0);
    have_diam.assign(deg, 0);
    dh.assign(deg, 0);
    dd.assign(deg, 0);
    pend.assign(deg, {});
    cls_got.assign(deg, 0);
    echo.reserve(deg);
    out.arm(deg);
    for (std::size_t p = 0; p < deg; ++p)
      out.push(p, {Word::id(S_HELLO), Word::id(cid), Word::wt(w_self)});
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
    out.flush(api);
    if (echo.done() && out.empty()) {
      api.halt();
      return;
    }
    if (out.empty()) api.idle_until_message();
  }

  void on_msg(std::size_t port, const Message& m) {
    switch (m.at(0).as_id()) {
      case S_HELLO:
        nb_cid[port] = m.at(1).as_id();
        nb_w[port] = m.at(2).as_wt();
        ++hello_got;
        break;
      case S_CLAIM:
        ensure(!claimed, "duplicate layering claim");
        claimed = true;
        parent_port = port;
        depth = m.at(1).as_id() + 1;
        for (std::size_t p = 0; p < deg; ++p)
          if (p != port && nb_cid[p] == cid) {
            is_child[p] = 1;
            ++n_children;
            out.push(p, {Word::id(S_CLAIM), Word::id(depth)});
          }
        break;
      case S_DIAM:
        ensure(!have_diam[port], "duplicate height report");
        have_diam[port] = 1;
        dh[port] = m.at(1).as_id();
        dd[port] = m.at(2).as_id();
        ++diam_got;
        break;
      case S_DECIDE:
        start_cls();
        break;
      case S_CLS:
        ensure(m.at(1).as_id() == cls_got[port], "class reports arrived out of order");
        pend[port].push_back(m.at(2).as_wt());
        ++cls_got[port];
        break;
      case S_PICK:
        apply_pick(m.at(1).as_id());
        break;
      case S_ECHO_UP:
        echo.on_up(port, m.at(1).as_id());
        break;
      case S_ECHO_DOWN:
        echo.on_down(port, m.at(1).as_id());
        break;
      default:
        ensure(false, "unknown split message tag");
    }
  }

  void start_cls() {
    if (cls_started) return;
    cls_started = true;
    for (std::size_t p = 0; p < deg; ++p)
      if (is_child[p]) out.push(p, {Word::id(S_DECIDE)});
    if (leader) sums.assign(static_cast<std::size_t>(k), 0.0);
  }

  void apply_pick(std::int64_t p0) {
    ensure(pick == -2, "duplicate class choice");
    pick = p0;
    std::vector<char> active(deg, 0);
    bool parent_cut = p0 >= 0 && depth >= 1 && (depth - 1) % k == p0;
    bool child_cut = p0 >= 0 && depth % k == p0;
    for (std::size_t p = 0; p < deg; ++p) {
      if (is_child[p]) {
        if (!child_cut) active[p] = 1;
        out.push(p, {Word::id(S_PICK), Word::id(p0)});
      } else if (p == parent_port) {
        if (!parent_cut) active[p] = 1;
      }
    }
    echo.arm(active);
    echo_armed = true;
  }

  void progress() {
    bool again = true;
    while (again) {
      again = false;
      if (!hello_done && hello_got == deg) {
        hello_done = true;
        if (leader) {
          claimed = true;
          depth = 0;
          for (std::size_t p = 0; p < deg; ++p)
            if (nb_cid[p] == cid) {
              is_child[p] = 1;
              ++n_children;
              out.push(p, {Word::id(S_CLAIM), Word::id(0)});
            }
        }
        again = true;
      }
      if (hello_done && claimed && !diam_sent && diam_got == n_children) {
        std::int64_t top1 = -1, top2 = -1, best = 0;
        for (std::size_t p = 0; p < deg; ++p) {
          if (!is_child[p]) continue;
          best = std::max(best, dd[p]);
          if (dh[p] > top1) {
            top2 = top1;
            top1 = dh[p];
          } else if (dh[p] > top2) {
            top2 = dh[p];
          }
        }
        std::int64_t h = top1 >= 0 ? top1 + 1 : 0;
        std::int64_t through = (top1 >= 0 ? top1 + 1 : 0) + (top2 >= 0 ? top2 + 1 : 0);
        std::int64_t dm = std::max(best, through);
        diam_sent = true;
        if (leader) {
          if (dm <= threshold)
            apply_pick(-1);
          else
            start_cls();
        } else {
          out.push(parent_port, {Word::id(S_DIAM), Word::id(h), Word::id(dm)});
        }
        again = true;
      }
      if (cls_started && next_p < k) {
        while (next_p < k && cls_ready()) {
          double acc = 0.0;
          for (std::size_t p = 0; p < deg; ++p) {
            if (!is_child[p]) continue;
            acc += pend[p].front();
            pend[p].pop_front();
            if (next_p == depth % k) acc += min_weight(w_self, nb_w[p]);
          }
          if (leader) {
            sums[static_cast<std::size_t>(next_p)] = acc;
          } else {
            out.push(parent_port, {Word::id(S_CLS), Word::id(next_p), Word::wt(acc)});
          }
          ++next_p;
          again = true;
        }
        if (leader && next_p == k && pick == -2) {
          std::int64_t p0 = 0;
          for (std::int64_t p = 1; p < k; ++p)
            if (sums[static_cast<std::size_t>(p)] < sums[static_cast<std::size_t>(p0)])
              p0 = p;
          apply_pick(p0);
          again = true;
        }
      }
      if (echo_armed)
        echo.advance(self, [&](std::size_t p, bool up, NodeId v) {
          out.push(p, {Word::id(up ? S_ECHO_UP : S_ECHO_DOWN), Word::id(v)});
          again = true;
        });
    }
  }

  bool cls_ready() const {
    for (std::size_t p = 0; p < deg; ++p)
      if (is_child[p] && cls_got[p] <= next_p) return false;
    return true;
  }
};

struct CentralSplit {
  std::vector<NodeId> label;
  std::vector<std::int64_t> pick;   // per cluster index
  std::vector<std::int64_t> depth;  // per node
};

CentralSplit central_split(const WeightedGraph& t, const Clustering& c, std::int64_t k,
                           std::int64_t threshold) {
  const std::size_t n = t.n();
  const std::size_t nc = c.cluster_ids.size();
  RootedClusters rooted = detail::root_clusters(t, c.cluster_of);
  std::vector<std::int64_t> depth(n, 0);
  for (std::size_t v : rooted.bfs_order)
    if (rooted.parent_node[v] != static_cast<std::size_t>(-1))
      depth[v] = depth[rooted.parent_node[v]] + 1;

  auto diam = cluster_diameters(t, c.cluster_of, rooted);
  auto cluster_index = [&](NodeId cid) {
    return static_cast<std::size_t>(
        std::lower_bound(c.cluster_ids.begin(), c.cluster_ids.end(), cid) -
        c.cluster_ids.begin());
  };

  // class sums per node, folded like the stream: children in ascending port
  // order, each child's value followed by the connecting edge when the class
  // matches the node's depth residue.
  std::vector<std::vector<double>> cls(n);
  for (std::size_t q = rooted.bfs_order.size(); q-- > 0;) {
    std::size_t v = rooted.bfs_order[q];
    std::size_t ck = cluster_index(c.cluster_of[v]);
    if (diam[t.index_of(c.cluster_ids[ck])] <= threshold) continue;
    cls[v].assign(static_cast<std::size_t>(k), 0.0);
    auto nb = t.neighbors(v);
    for (std::int64_t p0 = 0; p0 < k; ++p0) {
      double acc = 0.0;
      for (std::size_t p = 0; p < nb.size(); ++p) {
        std::size_t u = nb[p];
        if (c.cluster_of[u] != c.cluster_of[v] || rooted.parent_node[u] != v) continue;
        acc += cls[u][static_cast<std::size_t>(p0)];
        if (p0 == depth[v] % k) acc += min_weight(t.weight(v), t.weight(u));
      }
      cls[v][static_cast<std::size_t>(p0)] = acc;
    }
  }

  std::vector<std::int64_t> pick(nc, -1);
  for (std::size_t ck = 0; ck < nc; ++ck) {
    std::size_t root = t.index_of(c.cluster_ids[ck]);
    if (diam[root] <= threshold) continue;
    std::int64_t p0 = 0;
    for (std::int64_t p = 1; p < k; ++p)
      if (cls[root][static_cast<std::size_t>(p)] < cls[root][static_cast<std::size_t>(p0)])
        p0 = p;
    pick[ck] = p0;
  }

  std::vector<NodeId> label = detail::component_min_labels(t, [&](std::size_t i, std::size_t j) {
    if (c.cluster_of[i] != c.cluster_of[j]) return false;
    std::size_t child = rooted.parent_node[i] == j ? i : j;
    std::int64_t p0 = pick[cluster_index(c.cluster_of[i])];
    return !(p0 >= 0 && (depth[child] - 1) % k == p0);
  });
  return CentralSplit{std::move(label), std::move(pick), std::move(depth)};
}

}  // namespace

std::pair<Clustering, RoundTrace> cluster_split(const WeightedGraph& t, const Clustering& c,
                                                double delta) {
  require(delta > 0.0 && delta <= 1.0, "delta must be in (0, 1]");
  Clustering in = make_clustering(t, c.cluster_of);
  if (t.n() == 0) return {in, RoundTrace{}};

  const double inv = 1.0 / delta;
  const auto fl = static_cast<std::int64_t>(std::floor(inv + 1e-9));
  const auto k = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(inv - 1e-9)));
  const std::int64_t threshold = 2 * fl;

  auto result = run_programs<SplitProgram>(t, [&](std::size_t i) {
    SplitProgram p;
    p.cid = in.cluster_of[i];
    p.k = k;
    p.threshold = threshold;
    return p;
  });

  CentralSplit central = central_split(t, in, k, threshold);
  auto cluster_index = [&](NodeId cid) {
    return static_cast<std::size_t>(
        std::lower_bound(in.cluster_ids.begin(), in.cluster_ids.end(), cid) -
        in.cluster_ids.begin());
  };
  std::vector<NodeId> labels(t.n());
  for (std::size_t i = 0; i < t.n(); ++i) {
    const SplitProgram& p = result.programs[i];
    labels[i] = p.output();
    ensure(labels[i] == central.label[i],
           "distributed and central splits disagree on a cluster label");
    ensure(p.seen_depth() == central.depth[i],
           "distributed and central splits disagree on a layer depth");
    ensure(p.seen_pick() == central.pick[cluster_index(in.cluster_of[i])],
           "distributed and central splits disagree on the dropped class");
  }

  Clustering out = make_clustering(t, labels);
  ensure(out.max_diameter <= std::max(2 * (k - 1), threshold),
         "split left a cluster wider than its diameter bound");
  ensure(geq_rel(in.intercluster_weight + delta * in.edge_weight_total,
                 out.intercluster_weight),
         "split added more than delta times the total edge weight");
  ensure(result.trace.max_words <= 3, "split exceeded 3 words per message");
  return {std::move(out), result.trace};
}

std::pair<Clustering, RoundTrace> tree_clustering(const WeightedGraph& t, double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must be in (0, 1]");
  Clustering c = singleton_clustering(t);
  RoundTrace trace;
  if (t.n() == 0) return {c, trace};

  // Supporting fact used by the combination bound: the total edge weight of a
  // forest never exceeds its node weight (each edge charges its min endpoint).
  ensure(geq_rel(t.total_weight(), c.edge_weight_total),
         "forest edge weight exceeds node weight");

  const auto phases =
      static_cast<std::int64_t>(std::ceil(std::log2(1.0 / eps) - 1e-9)) + 1;
  double lambda = 1.0;
  for (std::int64_t j = 0; j < phases; ++j) {
    for (int m = 0; m < 5; ++m) {
      auto [next, tr] = cluster_merge(t, c);
      c = std::move(next);
      trace += tr;
    }
    auto [next, tr] = cluster_split(t, c, lambda / 4.0);
    c = std::move(next);
    trace += tr;
    lambda /= 2.0;
  }

  ensure(c.lambda() <= eps / 2.0 + 1e-12, "clustering kept too much cut weight");
  ensure(static_cast<double>(c.max_diameter) <= 16.0 / eps + 1e-9,
         "clustering diameter exceeds its 16/eps bound");
  return {c, trace};
}

}  // namespace mwis
