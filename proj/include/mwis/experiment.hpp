#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwis/generators.hpp"
#include "mwis/graph.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// One experiment: generate `repeat` instances (seeds seed, seed+1, ...), run
// the chosen algorithm on each, score the guarantee, and optionally verify
// independence and the guarantee externally. The seed fully determines every
// instance; rows come back sorted by instance id regardless of thread count.
struct ExperimentConfig {
  std::string generator = "tree";
  std::size_t n = 100;
  std::int64_t beta = 1;  // forest layers / degree cap, per generator
  std::uint64_t seed = 1;
  WeightSpec weights;
  std::string algo = "tree_approx";
  double eps = 0.25;
  bool verify = true;
  std::size_t repeat = 1;
  std::size_t threads = 1;
  std::int64_t budget = 8;  // allowed words per edge per round
};

// One row per run. `guarantee` is the right-hand side of the algorithm's
// weight bound; `opt` is the exact optimum when affordable (forest dynamic
// program or the n <= 30 oracle), else -1, and `ratio` = weight/opt or -1.
struct ResultRow {
  std::int64_t instance_id = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t delta = 0;  // maximum degree
  std::int64_t beta = 1;   // certified arboricity bound of the instance
  double eps = 0.0;
  std::string algo;
  double weight = 0.0;
  double guarantee = 0.0;
  double opt = -1.0;
  double ratio = -1.0;
  std::int64_t rounds = 0;
  std::int64_t max_words = 0;
  double ms = 0.0;
  bool violation = false;  // weight fell below guarantee, or budget exceeded
};

// Algorithms accepted by run_experiment: tree_exact, tree_approx, mwis_4beta,
// dpo_greedy, dpo_rounded, caro_wei, arboricity.
std::vector<std::string> known_algorithms();

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Emission. The CSV columns are fixed:
// instance_id,n,m,delta,beta,eps,algo,weight,guarantee,opt,ratio,rounds,max_words,ms
// Numeric fields use shortest-roundtrip formatting, so parsing them back
// yields bit-identical values.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);
std::vector<ResultRow> rows_from_json(const std::string& text);

// True when every row's weight meets its guarantee (relative tolerance 1e-9)
// and no row is flagged.
bool all_rows_clean(const std::vector<ResultRow>& rows);

}  // namespace mwis
