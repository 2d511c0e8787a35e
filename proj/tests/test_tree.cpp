#include <doctest.h>

#include <algorithm>
#include <vector>

#include "helpers.hpp"
#include "mwis/clustering.hpp"
#include "mwis/oracle.hpp"
#include "mwis/tree_mwis.hpp"

using namespace mwis;
using namespace testing_support;

TEST_CASE("tree tables match the oracle on fixed paths") {
  {
    auto [set, trace] = tree_mwis_exact(path_graph(3, {1.0, 5.0, 1.0}));
    CHECK(set.members == std::vector<NodeId>{1});
    CHECK(set.weight == doctest::Approx(5.0));
    CHECK(trace.max_words <= 3);
  }
  {
    auto [set, trace] = tree_mwis_exact(path_graph(3, {2.0, 1.0, 2.0}));
    CHECK(set.members == std::vector<NodeId>{0, 2});
    CHECK(set.weight == doctest::Approx(4.0));
  }
}

TEST_CASE("tree solver is exact on random small trees") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto t = random_tree(3 + seed % 10, 1000 + seed);
    auto [set, trace] = tree_mwis_exact(t);
    auto best = brute_force_mwis(t);
    CHECK(set.weight == doctest::Approx(best.weight));
    CHECK(is_independent(t, set.members));
  }
}

TEST_CASE("tree solver handles forests, leaves and the empty graph") {
  CHECK(tree_mwis_exact(WeightedGraph{}).first.members.empty());
  {
    auto [set, trace] = tree_mwis_exact(WeightedGraph(1, {}, {7.0}));
    CHECK(set.members == std::vector<NodeId>{0});
    CHECK(trace.rounds == 0);  // a lone node never needs a message
  }
  {
    // two components: a path and an isolated node
    WeightedGraph f(4, {{0, 1}, {1, 2}}, {1.0, 5.0, 1.0, 2.0});
    auto [set, trace] = tree_mwis_exact(f);
    CHECK(set.weight == doctest::Approx(7.0));
  }
  CHECK_THROWS_AS(tree_mwis_exact(clique_graph(3)), std::invalid_argument);
}

TEST_CASE("tree tables report parents towards the minimum identifier") {
  auto t = path_graph(4);
  auto tb = tree_dp_tables(t);
  CHECK(tb.root_of == std::vector<NodeId>{0, 0, 0, 0});
  CHECK(tb.parent_port[0] == -1);
  CHECK(tb.parent_port[1] == 0);  // towards node 0
  CHECK(tb.parent_port[2] == 0);
  CHECK(tb.opt(0) == doctest::Approx(2.0));
}

TEST_CASE("clustering constructor validates and normalizes") {
  auto t = path_graph(4);
  CHECK_THROWS_AS(make_clustering(t, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(make_clustering(t, {0, 1, 0, 1}), std::invalid_argument);  // disconnected
  auto c = make_clustering(t, {7, 7, 9, 9});  // arbitrary labels get normalized
  CHECK(c.cluster_of == std::vector<NodeId>{0, 0, 2, 2});
  CHECK(c.cluster_ids == std::vector<NodeId>{0, 2});
  CHECK(c.intercluster.size() == 1);
  CHECK(c.max_diameter == 1);
  CHECK(c.lambda() == doctest::Approx(1.0 / 3.0));
  auto s = singleton_clustering(t);
  CHECK(s.max_diameter == 0);
  CHECK(s.intercluster_weight == doctest::Approx(3.0));
}

TEST_CASE("merging singletons keeps at least a quarter of the cut weight") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto t = random_tree(2 + 40 * (seed % 5), 2000 + seed);
    auto c = singleton_clustering(t);
    for (int round = 0; round < 3; ++round) {
      auto [next, trace] = cluster_merge(t, c);
      CHECK(next.intercluster_weight <= 0.75 * c.intercluster_weight + 1e-9);
      CHECK(next.max_diameter <= 9 * c.max_diameter + 8);
      CHECK(trace.max_words <= 4);
      c = std::move(next);
      if (c.intercluster.empty()) break;
    }
  }
}

TEST_CASE("merging a star and a path behaves") {
  {
    auto t = star_graph(6);
    auto [c, trace] = cluster_merge(t, singleton_clustering(t));
    CHECK(c.intercluster_weight <= 0.75 * 6.0 + 1e-9);
    for (std::size_t i = 0; i < t.n(); ++i) CHECK(c.cluster_of[i] >= 0);
  }
  {
    auto t = path_graph(2);
    auto [c, trace] = cluster_merge(t, singleton_clustering(t));
    // a lone cut edge is its own mark from both sides and must be kept
    CHECK(c.intercluster.empty());
    CHECK(c.cluster_ids == std::vector<NodeId>{0});
  }
}

TEST_CASE("merge leaves a single cluster alone") {
  auto t = random_tree(40, 77);
  auto one = make_clustering(t, std::vector<NodeId>(40, 0));
  auto [c, trace] = cluster_merge(t, one);
  CHECK(c.cluster_ids == one.cluster_ids);
  CHECK(c.intercluster.empty());
}

TEST_CASE("splitting a long path drops one residue class") {
  auto t = path_graph(9);
  auto one = make_clustering(t, std::vector<NodeId>(9, 0));
  auto [c, trace] = cluster_split(t, one, 0.5);
  // both residue classes weigh 4, the tie goes to class 0: edges at depths
  // 1, 3, 5, 7 get cut, leaving bands {0}, {1,2}, {3,4}, {5,6}, {7,8}
  CHECK(c.cluster_ids == std::vector<NodeId>{0, 1, 3, 5, 7});
  CHECK(c.intercluster_weight == doctest::Approx(4.0));
  CHECK(c.max_diameter == 1);
  CHECK(trace.max_words <= 3);
}

TEST_CASE("splitting a narrow cluster leaves it untouched") {
  auto t = path_graph(5);
  auto one = make_clustering(t, std::vector<NodeId>(5, 0));
  auto [c, trace] = cluster_split(t, one, 0.5);  // diameter 4 <= 2*floor(1/delta)
  CHECK(c.cluster_ids == std::vector<NodeId>{0});
  CHECK(c.intercluster.empty());
}

TEST_CASE("split bounds hold on random trees") {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    auto t = random_tree(150, 3000 + seed);
    auto c = make_clustering(t, std::vector<NodeId>(150, 0));
    for (double delta : {0.5, 0.25, 0.125}) {
      auto [next, trace] = cluster_split(t, c, delta);
      CHECK(next.intercluster_weight <=
            c.intercluster_weight + delta * c.edge_weight_total + 1e-9);
      CHECK(static_cast<double>(next.max_diameter) <= 2.0 / delta + 1e-9);
    }
  }
  auto t = path_graph(4);
  CHECK_THROWS_AS(cluster_split(t, singleton_clustering(t), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cluster_split(t, singleton_clustering(t), 1.5), std::invalid_argument);
}

TEST_CASE("tree clustering meets its cut-weight and diameter targets") {
  {
    auto t = WeightedGraph(1, {}, {3.0});
    auto [c, trace] = tree_clustering(t, 0.5);
    CHECK(c.cluster_ids == std::vector<NodeId>{0});
  }
  {
    auto t = path_graph(64);
    auto [c, trace] = tree_clustering(t, 0.5);
    CHECK(c.intercluster_weight <= 0.25 * 63.0 + 1e-9);
    CHECK(static_cast<double>(c.max_diameter) <= 32.0);
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (double eps : {0.5, 0.25, 0.1}) {
      auto t = random_tree(400 + 500 * seed, 4000 + seed);
      auto [c, trace] = tree_clustering(t, eps);
      CHECK(c.lambda() <= eps / 2.0 + 1e-12);
      CHECK(static_cast<double>(c.max_diameter) <= 16.0 / eps + 1e-9);
    }
  }
  CHECK_THROWS_AS(tree_clustering(path_graph(3), 0.0), std::invalid_argument);
}

TEST_CASE("combining cluster solutions drops the lighter side of conflicts") {
  auto t = path_graph(2, {3.0, 7.0});
  auto c = singleton_clustering(t);
  auto set = combine_cluster_solutions(t, c, {{0}, {1}});
  CHECK(set.members == std::vector<NodeId>{1});
  CHECK(set.weight == doctest::Approx(7.0));
  // empty picks are fine
  CHECK(combine_cluster_solutions(t, c, {{}, {}}).members.empty());
  // validation
  CHECK_THROWS_AS(combine_cluster_solutions(t, c, {{1}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(combine_cluster_solutions(t, c, {{0}}), std::invalid_argument);
  auto band = make_clustering(path_graph(3), {0, 0, 0});
  CHECK_THROWS_AS(combine_cluster_solutions(path_graph(3), band, {{0, 1}}),
                  std::invalid_argument);
}

TEST_CASE("approximate tree solver meets its guarantee on fixed inputs") {
  {
    auto t = path_graph(3, {1.0, 5.0, 1.0});
    auto [set, trace] = tree_approx_mwis(t, 0.5);
    CHECK(set.weight >= 0.5 * 5.0);
    CHECK(is_independent(t, set.members));
  }
  {
    auto t = path_graph(100);
    auto [set, trace] = tree_approx_mwis(t, 0.5);
    CHECK(set.weight >= 25.0);  // half of the exact optimum 50
    CHECK(trace.max_words <= 4);
  }
  CHECK_THROWS_AS(tree_approx_mwis(path_graph(3), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(tree_approx_mwis(WeightedGraph(2, {}), 0.5), std::invalid_argument);
}

TEST_CASE("approximate tree solver stays within eps of exact on random trees") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto t = random_tree(20 + 9 * seed, 5000 + seed);
    double opt = tree_mwis_exact(t).first.weight;
    for (double eps : {0.3, 0.1}) {
      auto [set, trace] = tree_approx_mwis(t, eps);
      CHECK(set.weight >= (1.0 - eps) * opt - 1e-9);
      CHECK(is_independent(t, set.members));
    }
  }
}

TEST_CASE("approximate tree solver is deterministic") {
  auto t = random_tree(300, 99);
  auto [a, ta] = tree_approx_mwis(t, 0.25);
  auto [b, tb] = tree_approx_mwis(t, 0.25);
  CHECK(a.members == b.members);
  CHECK(a.weight == b.weight);
  CHECK(ta == tb);
}
