#pragma once

// Internal building blocks for the cluster protocols: per-port FIFO outboxes
// that respect the one-message-per-port-per-round rule, the leaf-to-center
// echo that labels a tree component by its minimum identifier, and the rooted
// traversal used by the centralized reference implementations.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "mwis/congest.hpp"
#include "mwis/graph.hpp"
#include "mwis/util.hpp"

namespace mwis::detail {

inline constexpr std::size_t NO_PORT = static_cast<std::size_t>(-1);

// Outbound buffering: programs enqueue freely, flush sends at most one queued
// message per port per round. A node with queued traffic must stay awake.
struct PortQueues {
  std::vector<std::deque<Message>> q;

  void arm(std::size_t degree) { q.assign(degree, {}); }
  void push(std::size_t port, Message m) { q[port].push_back(std::move(m)); }
  void flush(NodeApi& api) {
    for (std::size_t p = 0; p < q.size(); ++p)
      if (!q[p].empty()) {
        api.send(p, std::move(q[p].front()));
        q[p].pop_front();
      }
  }
  bool empty() const {
    for (const auto& d : q)
      if (!d.empty()) return false;
    return true;
  }
};

// Minimum-identifier election on one tree component. Every node declares the
// ports that stay inside the component (arm/activate), leaves start a
// convergecast, the one or two nodes that hear from every active port learn
// the minimum and flood it back out. Message payloads are handled by the
// caller; this struct only tracks state transitions.
struct EchoState {
  std::vector<char> active;    // by port, meaningful once armed_
  std::vector<char> have_up;   // by port
  std::vector<NodeId> up_val;  // by port
  std::size_t need = 0;        // number of active ports
  std::size_t got = 0;         // active ports heard from
  std::size_t sent_up_port = NO_PORT;
  NodeId min_up = std::numeric_limits<NodeId>::max();
  NodeId final_val = -1;
  bool armed_ = false;
  bool have_final = false;

  void reserve(std::size_t degree) {
    active.assign(degree, 0);
    have_up.assign(degree, 0);
    up_val.assign(degree, 0);
  }

  // Declares the component ports. Upward values that arrived early are folded
  // in here; arrivals are buffered before arming without counting.
  void arm(const std::vector<char>& component_ports) {
    active = component_ports;
    need = 0;
    got = 0;
    for (std::size_t p = 0; p < active.size(); ++p) {
      if (!active[p]) continue;
      ++need;
      if (have_up[p]) {
        ++got;
        min_up = std::min(min_up, up_val[p]);
      }
    }
    armed_ = true;
  }
  bool armed() const { return armed_; }

  void on_up(std::size_t port, NodeId v) {
    ensure(!have_up[port], "duplicate upward echo on one port");
    have_up[port] = 1;
    up_val[port] = v;
    if (armed_ && active[port]) {
      ++got;
      min_up = std::min(min_up, v);
    }
  }

  void on_down(std::size_t port, NodeId v) {
    ensure(armed_ && active[port], "downward echo on an inactive port");
    ensure(!have_final, "component label delivered twice");
    have_final = true;
    final_val = v;
    down_skip = port;
  }

  // Runs all enabled transitions; sends go through `push(port, up?, value)`.
  template <class Push>
  void advance(NodeId own_id, Push&& push) {
    if (!armed_) return;
    if (!have_final && got == need) {  // center: every active port reported
      final_val = std::min(own_id, min_up);
      have_final = true;
      down_skip = sent_up_port;  // a co-center already knows the value
    }
    if (!have_final && sent_up_port == NO_PORT && got + 1 == need) {
      std::size_t missing = NO_PORT;
      for (std::size_t p = 0; p < active.size(); ++p)
        if (active[p] && !have_up[p]) {
          missing = p;
          break;
        }
      ensure(missing != NO_PORT, "echo accounting lost a port");
      sent_up_port = missing;
      push(missing, true, std::min(own_id, min_up));
    }
    if (have_final && !flooded) {
      flooded = true;
      for (std::size_t p = 0; p < active.size(); ++p)
        if (active[p] && p != down_skip) push(p, false, final_val);
    }
  }

  bool done() const { return have_final && flooded; }

 private:
  std::size_t down_skip = NO_PORT;
  bool flooded = false;
};

// Rooted view of same-label components: parents point towards the node whose
// identifier equals the label (which must be a member). bfs_order lists every
// node parent-before-child, so a reverse scan folds children first.
struct RootedClusters {
  std::vector<std::size_t> parent_node;  // index, or SIZE_MAX at roots
  std::vector<std::size_t> parent_port;  // port towards parent, or NO_PORT
  std::vector<std::size_t> bfs_order;
};

inline RootedClusters root_clusters(const WeightedGraph& g, std::span<const NodeId> label) {
  const std::size_t n = g.n();
  RootedClusters r;
  r.parent_node.assign(n, static_cast<std::size_t>(-1));
  r.parent_port.assign(n, NO_PORT);
  r.bfs_order.reserve(n);
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.id(i) != label[i]) continue;  // roots carry their own label
    seen[i] = 1;
    std::size_t head = r.bfs_order.size();
    r.bfs_order.push_back(i);
    while (head < r.bfs_order.size()) {
      std::size_t v = r.bfs_order[head++];
      auto nb = g.neighbors(v);
      for (std::size_t p = 0; p < nb.size(); ++p) {
        std::size_t u = nb[p];
        if (label[u] != label[v] || seen[u]) continue;
        seen[u] = 1;
        r.parent_node[u] = v;
        auto back = g.neighbors(u);
        r.parent_port[u] = static_cast<std::size_t>(
            std::lower_bound(back.begin(), back.end(), v) - back.begin());
        r.bfs_order.push_back(u);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    ensure(seen[i], "component label does not name a member identifier");
  return r;
}

// Connected components over the edges accepted by `keep`, labelled by the
// minimum member identifier.
template <class Keep>
std::vector<NodeId> component_min_labels(const WeightedGraph& g, Keep&& keep) {
  const std::size_t n = g.n();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [i, j] : g.edges())
    if (keep(i, j)) {
      std::size_t a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<NodeId> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = g.id(find(i));  // min index = min id
  return label;
}

}  // namespace mwis::detail
