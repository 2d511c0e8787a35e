#include <doctest.h>

#include "helpers.hpp"
#include "mwis/coloring.hpp"

using namespace mwis;
using namespace testing_support;

namespace {

// Chain orientation for a path graph: parent of i is i-1, node 0 is the root.
std::vector<NodeId> path_parents(std::size_t n) {
  std::vector<NodeId> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<NodeId>(i) - 1;
  return parent;
}

// Orientation for any forest built by rooting each component at its minimum
// index via breadth-first search.
std::vector<NodeId> bfs_parents(const WeightedGraph& g) {
  std::vector<NodeId> parent(g.n(), -1);
  std::vector<char> seen(g.n(), 0);
  std::vector<std::size_t> queue;
  for (std::size_t r = 0; r < g.n(); ++r) {
    if (seen[r]) continue;
    seen[r] = 1;
    queue.assign(1, r);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      std::size_t v = queue[h];
      for (std::size_t u : g.neighbors(v))
        if (!seen[u]) {
          seen[u] = 1;
          parent[u] = g.id(v);
          queue.push_back(u);
        }
    }
  }
  return parent;
}

}  // namespace

TEST_CASE("is_proper") {
  WeightedGraph g = path_graph(3);
  CHECK(is_proper(g, Coloring{{0, 1, 0}, 2}));
  CHECK(!is_proper(g, Coloring{{0, 0, 1}, 2}));
  CHECK(!is_proper(g, Coloring{{0, 2, 0}, 2}));  // out of palette
  CHECK(!is_proper(g, Coloring{{0, 1}, 2}));     // wrong size
}

TEST_CASE("log_star") {
  CHECK(log_star(1.0) == 0);
  CHECK(log_star(2.0) == 1);
  CHECK(log_star(4.0) == 2);
  CHECK(log_star(16.0) == 3);
  CHECK(log_star(65536.0) == 4);
  CHECK(log_star(1e5) == 5);
}

TEST_CASE("fast coloring on paths, stars and random graphs") {
  for (std::size_t n : {2ul, 10ul, 50ul}) {
    auto [c, trace] = linial_coloring(path_graph(n));
    CHECK(is_proper(path_graph(n), c));
    CHECK(c.palette <= 36 * 4);
  }
  WeightedGraph star = star_graph(10);
  auto [c, trace] = linial_coloring(star);
  CHECK(is_proper(star, c));
  CHECK(c.palette <= 36 * 100);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    WeightedGraph g = random_graph(60, 0.08, seed);
    auto [col, tr] = linial_coloring(g);
    CHECK(is_proper(g, col));
    std::int64_t de = std::max<std::int64_t>(static_cast<std::int64_t>(g.max_degree()), 1);
    CHECK(col.palette <= 36 * de * de);
  }
}

TEST_CASE("fast coloring of an edgeless graph is free") {
  WeightedGraph g(5, {});
  auto [c, trace] = linial_coloring(g);
  CHECK(c.palette == 1);
  CHECK(trace.rounds == 0);
  CHECK(trace.total_messages == 0);
  CHECK(is_proper(g, c));
}

TEST_CASE("fast coloring round count grows like log* not log") {
  WeightedGraph tiny = path_graph(64);
  WeightedGraph big = path_graph(4096);
  auto [c1, t1] = linial_coloring(tiny);
  auto [c2, t2] = linial_coloring(big);
  CHECK(t2.rounds <= t1.rounds + 2);
  CHECK(t2.rounds <= 8);
}

TEST_CASE("tree 3-coloring on a rooted path") {
  WeightedGraph g = path_graph(100);
  auto [c, trace] = cole_vishkin_3color(g, path_parents(100));
  CHECK(c.palette == 3);
  CHECK(is_proper(g, c));
  CHECK(trace.rounds <= 8 + 2 * log_star(100.0));
  CHECK(trace.max_words == 1);
}

TEST_CASE("tree 3-coloring on random forests and stars") {
  WeightedGraph star = star_graph(9);
  auto [cs, ts] = cole_vishkin_3color(star, bfs_parents(star));
  CHECK(is_proper(star, cs));

  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    WeightedGraph t = random_tree(200, seed);
    auto [c, trace] = cole_vishkin_3color(t, bfs_parents(t));
    CHECK(c.palette == 3);
    CHECK(is_proper(t, c));
    CHECK(trace.rounds <= 8 + 2 * log_star(200.0));
  }

  WeightedGraph forest(7, {{0, 1}, {1, 2}, {3, 4}, {5, 6}});
  auto [cf, tf] = cole_vishkin_3color(forest, bfs_parents(forest));
  CHECK(is_proper(forest, cf));
}

TEST_CASE("tree 3-coloring of a single node") {
  WeightedGraph g(1, {});
  auto [c, trace] = cole_vishkin_3color(g, std::vector<NodeId>{-1});
  CHECK(c.palette == 3);
  CHECK(c.color[0] >= 0);
  CHECK(c.color[0] < 3);
}

TEST_CASE("tree 3-coloring round count at large n") {
  for (std::size_t n : {100ul, 1000ul, 10000ul, 100000ul}) {
    WeightedGraph g = path_graph(n);
    auto [c, trace] = cole_vishkin_3color(g, path_parents(n));
    CHECK(is_proper(g, c));
    CHECK(trace.rounds <= 8 + 2 * log_star(static_cast<double>(n)));
  }
}

TEST_CASE("tree 3-coloring validates the orientation") {
  WeightedGraph g = path_graph(3);
  CHECK_THROWS_AS(cole_vishkin_3color(g, std::vector<NodeId>{-1, -1, 1}),
                  std::invalid_argument);  // edge (0,1) unoriented
  CHECK_THROWS_AS(cole_vishkin_3color(g, std::vector<NodeId>{1, 0, 1}),
                  std::invalid_argument);  // edge (0,1) oriented twice
  CHECK_THROWS_AS(cole_vishkin_3color(g, std::vector<NodeId>{2, 0, 1}),
                  std::invalid_argument);  // parent is not a neighbor
  CHECK_THROWS_AS(cole_vishkin_3color(clique_graph(3), std::vector<NodeId>{-1, 0, 1}),
                  std::invalid_argument);  // not a forest
}

TEST_CASE("palette compaction") {
  WeightedGraph g = random_graph(50, 0.1, 5);
  auto [c, trace] = linial_coloring(g);
  std::int64_t target = static_cast<std::int64_t>(g.max_degree()) + 1;
  auto [cc, tc] = reduce_colors(g, c, target);
  CHECK(cc.palette == target);
  CHECK(is_proper(g, cc));
  CHECK(tc.rounds == c.palette - target);

  auto [noop, tn] = reduce_colors(g, cc, cc.palette + 5);
  CHECK(noop.color == cc.color);
  CHECK(tn.rounds == 0);

  CHECK_THROWS_AS(reduce_colors(g, c, static_cast<std::int64_t>(g.max_degree())),
                  std::invalid_argument);
}

TEST_CASE("palette compaction keeps untouched colors") {
  // Colors below the target are never changed, only high colors move.
  WeightedGraph g = path_graph(4);
  Coloring c{{0, 5, 1, 6}, 7};
  auto [cc, trace] = reduce_colors(g, c, 3);
  CHECK(is_proper(g, cc));
  CHECK(cc.color[0] == 0);
  CHECK(cc.color[2] == 1);
}

TEST_CASE("coloring is deterministic across step orders") {
  WeightedGraph g = random_graph(40, 0.12, 21);
  auto [base, tb] = linial_coloring(g);
  auto [again, ta] = linial_coloring(g);
  CHECK(base.color == again.color);
  CHECK(tb == ta);
}
