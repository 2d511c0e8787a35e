#include "mwis/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace mwis {

namespace {

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t pack(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

GeneratedInstance finish(std::string name, std::size_t n,
                         std::vector<std::pair<NodeId, NodeId>> edges, std::int64_t beta,
                         const WeightSpec& ws, std::uint64_t seed) {
  GeneratedInstance out;
  out.graph = WeightedGraph(n, edges, generate_weights(n, ws, seed ^ 0x5851f42d4c957f2dULL));
  out.beta = beta;
  out.name = std::move(name);
  return out;
}

}  // namespace

WeightSpec parse_weight_spec(const std::string& text) {
  WeightSpec spec;
  if (text.empty() || text == "unit") return spec;
  auto args_of = [&](const std::string& prefix) {
    require(text.size() > prefix.size() + 1 && text.back() == ')',
            "malformed weight spec: " + text);
    return text.substr(prefix.size(), text.size() - prefix.size() - 1);
  };
  if (text.rfind("uniform(", 0) == 0) {
    spec.kind = WeightSpec::Kind::uniform;
    std::string args = args_of("uniform(");
    auto comma = args.find(',');
    require(comma != std::string::npos, "uniform weights need two bounds");
    spec.lo = std::stod(args.substr(0, comma));
    spec.hi = std::stod(args.substr(comma + 1));
    require(spec.lo >= 0.0 && spec.hi >= spec.lo, "uniform bounds must satisfy 0 <= lo <= hi");
    return spec;
  }
  if (text.rfind("powerlaw(", 0) == 0) {
    spec.kind = WeightSpec::Kind::powerlaw;
    spec.alpha = std::stod(args_of("powerlaw("));
    require(spec.alpha > 1.0, "powerlaw exponent must exceed 1");
    return spec;
  }
  require(false, "unknown weight spec: " + text);
  return spec;
}

std::string weight_spec_name(const WeightSpec& spec) {
  switch (spec.kind) {
    case WeightSpec::Kind::unit:
      return "unit";
    case WeightSpec::Kind::uniform:
      return "uniform(" + std::to_string(spec.lo) + "," + std::to_string(spec.hi) + ")";
    case WeightSpec::Kind::powerlaw:
      return "powerlaw(" + std::to_string(spec.alpha) + ")";
  }
  return "unit";
}

std::vector<double> generate_weights(std::size_t n, const WeightSpec& spec,
                                     std::uint64_t seed) {
  std::vector<double> w(n, 1.0);
  if (spec.kind == WeightSpec::Kind::unit) return w;
  std::mt19937_64 rng(seed);
  for (double& x : w) {
    double u = unit_draw(rng);
    if (spec.kind == WeightSpec::Kind::uniform)
      x = spec.lo + (spec.hi - spec.lo) * u;
    else
      x = std::pow(1.0 - u, -1.0 / (spec.alpha - 1.0));
  }
  return w;
}

GeneratedInstance gen_tree(std::size_t n, std::uint64_t seed, const WeightSpec& ws) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (n >= 2) {
    // uniform labeled tree via Pruefer sequence decode
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> pruefer(n - 2);
    for (auto& p : pruefer) p = rng() % n;
    std::vector<std::size_t> deg(n, 1);
    for (std::size_t p : pruefer) ++deg[p];
    std::size_t ptr = 0;
    while (deg[ptr] != 1) ++ptr;
    std::size_t cursor = ptr;
    for (std::size_t p : pruefer) {
      edges.emplace_back(static_cast<NodeId>(std::min(cursor, p)),
                         static_cast<NodeId>(std::max(cursor, p)));
      --deg[cursor];
      if (--deg[p] == 1 && p < ptr) {
        cursor = p;
      } else {
        ++ptr;
        while (deg[ptr] != 1) ++ptr;
        cursor = ptr;
      }
    }
    std::size_t a = n, b = n;
    for (std::size_t i = 0; i < n; ++i)
      if (deg[i] == 1) (a == n ? a : b) = i;
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  return finish("tree", n, std::move(edges), 1, ws, seed);
}

GeneratedInstance gen_forest_union(std::size_t n, std::int64_t layers, std::uint64_t seed,
                                   const WeightSpec& ws) {
  require(layers >= 1, "forest union needs at least one layer");
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> have;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::int64_t layer = 0; layer < layers; ++layer) {
    // random attachment tree over a fresh random node ordering
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (std::size_t i = 1; i < n; ++i) {
      NodeId u = static_cast<NodeId>(order[i]);
      NodeId v = static_cast<NodeId>(order[rng() % i]);
      if (have.insert(pack(u, v)).second)
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  return finish("forests", n, std::move(edges), layers, ws, seed);
}

GeneratedInstance gen_path(std::size_t n, std::uint64_t seed, const WeightSpec& ws) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
  return finish("path", n, std::move(edges), 1, ws, seed);
}

GeneratedInstance gen_cycle(std::size_t n, std::uint64_t seed, const WeightSpec& ws) {
  require(n == 0 || n >= 3, "a cycle needs at least three nodes");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
  if (n >= 3) edges.emplace_back(static_cast<NodeId>(0), static_cast<NodeId>(n - 1));
  return finish("cycle", n, std::move(edges), n >= 3 ? 2 : 1, ws, seed);
}

GeneratedInstance gen_clique(std::size_t n, std::uint64_t seed, const WeightSpec& ws) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
  std::int64_t beta = std::max<std::int64_t>(1, static_cast<std::int64_t>((n + 1) / 2));
  return finish("clique", n, std::move(edges), beta, ws, seed);
}

GeneratedInstance gen_star(std::size_t leaves, std::uint64_t seed, const WeightSpec& ws) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 1; i <= leaves; ++i)
    edges.emplace_back(static_cast<NodeId>(0), static_cast<NodeId>(i));
  return finish("star", leaves == 0 ? 1 : leaves + 1, std::move(edges), 1, ws, seed);
}

GeneratedInstance gen_bounded_degree(std::size_t n, std::int64_t cap, std::uint64_t seed,
                                     const WeightSpec& ws) {
  require(cap >= 0, "degree cap must be nonnegative");
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> have;
  std::vector<std::int64_t> deg(n, 0);
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (n >= 2 && cap >= 1) {
    std::uint64_t attempts = 4 * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(cap);
    for (std::uint64_t a = 0; a < attempts; ++a) {
      std::size_t u = rng() % n, v = rng() % n;
      if (u == v || deg[u] >= cap || deg[v] >= cap) continue;
      if (!have.insert(pack(static_cast<NodeId>(u), static_cast<NodeId>(v))).second) continue;
      edges.emplace_back(static_cast<NodeId>(std::min(u, v)),
                         static_cast<NodeId>(std::max(u, v)));
      ++deg[u];
      ++deg[v];
    }
  }
  std::int64_t max_deg = 0;
  for (std::int64_t d : deg) max_deg = std::max(max_deg, d);
  std::int64_t beta = std::max<std::int64_t>(1, (max_deg + 2) / 2);  // ceil((max_deg+1)/2)
  return finish("bounded_degree", n, std::move(edges), beta, ws, seed);
}

GeneratedInstance generate(const std::string& name, std::size_t n, std::int64_t beta,
                           std::uint64_t seed, const WeightSpec& ws) {
  if (name == "star" && n > 0) return gen_star(n - 1, seed, ws);
  if (name == "tree") return gen_tree(n, seed, ws);
  if (name == "forests") return gen_forest_union(n, beta, seed, ws);
  if (name == "path") return gen_path(n, seed, ws);
  if (name == "cycle") return gen_cycle(n, seed, ws);
  if (name == "clique") return gen_clique(n, seed, ws);
  if (name == "star") return GeneratedInstance{WeightedGraph{}, 1, "star"};
  if (name == "bounded_degree") return gen_bounded_degree(n, beta, seed, ws);
  require(false, "unknown generator: " + name);
  return {};
}

}  // namespace mwis
