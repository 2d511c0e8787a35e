#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwis/graph.hpp"

namespace mwis {

// Node weight distributions. `unit` leaves every weight at 1; `uniform` draws
// from [lo, hi); `powerlaw` draws Pareto values with minimum 1 and tail
// exponent alpha > 1. All draws are pure functions of the seed.
struct WeightSpec {
  enum class Kind { unit, uniform, powerlaw };
  Kind kind = Kind::unit;
  double lo = 0.0;
  double hi = 1.0;
  double alpha = 2.5;
};

// Accepts "unit", "uniform(lo,hi)" and "powerlaw(alpha)".
WeightSpec parse_weight_spec(const std::string& text);
std::string weight_spec_name(const WeightSpec& spec);

std::vector<double> generate_weights(std::size_t n, const WeightSpec& spec,
                                     std::uint64_t seed);

// A generated instance plus the arboricity upper bound its construction
// certifies (every generator here yields one).
struct GeneratedInstance {
  WeightedGraph graph;
  std::int64_t beta = 1;
  std::string name;
};

// Uniform random labeled tree (Pruefer decode), beta = 1.
GeneratedInstance gen_tree(std::size_t n, std::uint64_t seed, const WeightSpec& ws = {});

// Union of `layers` independent random spanning trees with duplicate-edge
// rejection: the edge set splits into `layers` forests, so beta = layers.
GeneratedInstance gen_forest_union(std::size_t n, std::int64_t layers, std::uint64_t seed,
                                   const WeightSpec& ws = {});

GeneratedInstance gen_path(std::size_t n, std::uint64_t seed, const WeightSpec& ws = {});
GeneratedInstance gen_cycle(std::size_t n, std::uint64_t seed, const WeightSpec& ws = {});
GeneratedInstance gen_clique(std::size_t n, std::uint64_t seed, const WeightSpec& ws = {});
GeneratedInstance gen_star(std::size_t leaves, std::uint64_t seed, const WeightSpec& ws = {});

// Random graph with maximum degree at most cap (beta = ceil((cap+1)/2), which
// bounds the arboricity of any graph of that maximum degree).
GeneratedInstance gen_bounded_degree(std::size_t n, std::int64_t cap, std::uint64_t seed,
                                     const WeightSpec& ws = {});

// Dispatch by name: tree | forests | path | cycle | clique | star |
// bounded_degree. `beta` feeds the forest layer count and the degree cap.
GeneratedInstance generate(const std::string& name, std::size_t n, std::int64_t beta,
                           std::uint64_t seed, const WeightSpec& ws = {});

}  // namespace mwis
