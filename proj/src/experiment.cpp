#include "mwis/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mwis/arboricity.hpp"
#include "mwis/caro_wei.hpp"
#include "mwis/oracle.hpp"
#include "mwis/rounding.hpp"
#include "mwis/tree_mwis.hpp"

namespace mwis {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Exact optimum when affordable: forest dynamic program at any size, the
// branch-and-bound oracle up to its n <= 30 limit, else unknown (-1).
double exact_optimum(const WeightedGraph& g) {
  if (g.n() == 0) return 0.0;
  if (is_forest(g)) {
    TreeDpTables tb = tree_dp_tables(g);
    double opt = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
      if (tb.root_of[i] == g.id(i)) opt += tb.opt(i);
    return opt;
  }
  if (g.n() <= 30) return brute_force_mwis(g).weight;
  return -1.0;
}

struct RunOutput {
  IndependentSet set;
  RoundTrace trace;
  double guarantee = 0.0;
};

RunOutput run_algorithm(const ExperimentConfig& cfg, const GeneratedInstance& inst,
                        double opt) {
  const WeightedGraph& g = inst.graph;
  const double wv = g.total_weight();
  const auto delta = static_cast<double>(g.max_degree());
  RunOutput out;
  if (cfg.algo == "tree_exact") {
    std::tie(out.set, out.trace) = tree_mwis_exact(g);
    out.guarantee = opt;
  } else if (cfg.algo == "tree_approx") {
    std::tie(out.set, out.trace) = tree_approx_mwis(g, cfg.eps);
    out.guarantee = opt >= 0.0 ? (1.0 - cfg.eps) * opt : 0.0;
  } else if (cfg.algo == "mwis_4beta") {
    std::tie(out.set, out.trace) = mwis_4beta(g, g.weights(), inst.beta, cfg.eps);
    out.guarantee = (1.0 - cfg.eps) * wv / (4.0 * static_cast<double>(inst.beta));
  } else if (cfg.algo == "dpo_greedy") {
    std::tie(out.set, out.trace) =
        delta_plus_one_is(g, g.weights(), cfg.eps, SubroutineMode::greedy);
    out.guarantee = wv / (delta + 1.0);
  } else if (cfg.algo == "dpo_rounded") {
    std::tie(out.set, out.trace) =
        delta_plus_one_is(g, g.weights(), cfg.eps, SubroutineMode::rounded_boosted);
    out.guarantee = (1.0 - cfg.eps) * wv / (delta + 1.0);
  } else if (cfg.algo == "caro_wei") {
    std::tie(out.set, out.trace) = weighted_caro_wei(g, g.weights(), cfg.eps);
    out.guarantee = (1.0 - cfg.eps) * caro_wei_bound(g);
  } else if (cfg.algo == "arboricity") {
    std::tie(out.set, out.trace) =
        approx_mwis_arboricity(g, g.weights(), inst.beta, cfg.eps);
    out.guarantee =
        (1.0 - 2.0 * cfg.eps) * wv / (2.0 * static_cast<double>(inst.beta) + 1.0);
  } else {
    require(false, "unknown algorithm: " + cfg.algo);
  }
  return out;
}

ResultRow run_one(const ExperimentConfig& cfg, std::uint64_t seed) {
  GeneratedInstance inst = generate(cfg.generator, cfg.n, cfg.beta, seed, cfg.weights);
  const WeightedGraph& g = inst.graph;
  double opt = exact_optimum(g);

  auto t0 = std::chrono::steady_clock::now();
  RunOutput run = run_algorithm(cfg, inst, opt);
  auto t1 = std::chrono::steady_clock::now();

  if (cfg.verify) {
    ensure(is_independent(g, run.set.members), "emitted set is not independent");
    ensure(eq_rel(run.set.weight, set_weight(g, g.weights(), run.set.members)),
           "emitted weight does not match its member list");
  }

  ResultRow row;
  row.instance_id = static_cast<std::int64_t>(seed);
  row.n = static_cast<std::int64_t>(g.n());
  row.m = static_cast<std::int64_t>(g.m());
  row.delta = static_cast<std::int64_t>(g.max_degree());
  row.beta = inst.beta;
  row.eps = cfg.eps;
  row.algo = cfg.algo;
  row.weight = run.set.weight;
  row.guarantee = run.guarantee;
  row.opt = opt;
  if (opt > 0.0)
    row.ratio = run.set.weight / opt;
  else if (opt == 0.0)
    row.ratio = 1.0;
  row.rounds = run.trace.rounds;
  row.max_words = run.trace.max_words;
  row.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  row.violation = !geq_rel(row.weight, row.guarantee) || row.max_words > cfg.budget;
  return row;
}

}  // namespace

std::vector<std::string> known_algorithms() {
  return {"tree_exact", "tree_approx", "mwis_4beta", "dpo_greedy",
          "dpo_rounded", "caro_wei",    "arboricity"};
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  require(cfg.repeat >= 1, "repeat must be at least 1");
  require(cfg.budget >= 1, "budget must be at least 1");
  std::vector<ResultRow> rows(cfg.repeat);
  const std::size_t workers = std::min(std::max<std::size_t>(cfg.threads, 1), cfg.repeat);
  if (workers <= 1) {
    for (std::size_t k = 0; k < cfg.repeat; ++k) rows[k] = run_one(cfg, cfg.seed + k);
    return rows;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t wkr = 0; wkr < workers; ++wkr)
    pool.emplace_back([&, wkr] {
      try {
        for (std::size_t k = wkr; k < cfg.repeat; k += workers)
          rows[k] = run_one(cfg, cfg.seed + k);
      } catch (...) {
        errors[wkr] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;  // already ordered by instance id (seed + k)
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "instance_id,n,m,delta,beta,eps,algo,weight,guarantee,opt,ratio,rounds,max_words,ms\n";
  for (const ResultRow& r : rows) {
    out += std::to_string(r.instance_id) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.m) + ',' + std::to_string(r.delta) + ',' +
           std::to_string(r.beta) + ',' + fmt_double(r.eps) + ',' + r.algo + ',' +
           fmt_double(r.weight) + ',' + fmt_double(r.guarantee) + ',' + fmt_double(r.opt) +
           ',' + fmt_double(r.ratio) + ',' + std::to_string(r.rounds) + ',' +
           std::to_string(r.max_words) + ',' + fmt_double(r.ms) + '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "empty results file");
  require(line ==
              "instance_id,n,m,delta,beta,eps,algo,weight,guarantee,opt,ratio,rounds,"
              "max_words,ms",
          "unexpected results header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    require(f.size() == 14, "malformed results row");
    ResultRow r;
    r.instance_id = std::stoll(f[0]);
    r.n = std::stoll(f[1]);
    r.m = std::stoll(f[2]);
    r.delta = std::stoll(f[3]);
    r.beta = std::stoll(f[4]);
    r.eps = std::stod(f[5]);
    r.algo = f[6];
    r.weight = std::stod(f[7]);
    r.guarantee = std::stod(f[8]);
    r.opt = std::stod(f[9]);
    r.ratio = std::stod(f[10]);
    r.rounds = std::stoll(f[11]);
    r.max_words = std::stoll(f[12]);
    r.ms = std::stod(f[13]);
    r.violation = !geq_rel(r.weight, r.guarantee);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    arr.push_back({{"instance_id", r.instance_id},
                   {"n", r.n},
                   {"m", r.m},
                   {"delta", r.delta},
                   {"beta", r.beta},
                   {"eps", r.eps},
                   {"algo", r.algo},
                   {"weight", r.weight},
                   {"guarantee", r.guarantee},
                   {"opt", r.opt},
                   {"ratio", r.ratio},
                   {"rounds", r.rounds},
                   {"max_words", r.max_words},
                   {"ms", r.ms},
                   {"violation", r.violation}});
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  require(arr.is_array(), "results JSON must be an array");
  std::vector<ResultRow> rows;
  for (const auto& j : arr) {
    ResultRow r;
    r.instance_id = j.at("instance_id").get<std::int64_t>();
    r.n = j.at("n").get<std::int64_t>();
    r.m = j.at("m").get<std::int64_t>();
    r.delta = j.at("delta").get<std::int64_t>();
    r.beta = j.at("beta").get<std::int64_t>();
    r.eps = j.at("eps").get<double>();
    r.algo = j.at("algo").get<std::string>();
    r.weight = j.at("weight").get<double>();
    r.guarantee = j.at("guarantee").get<double>();
    r.opt = j.at("opt").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.rounds = j.at("rounds").get<std::int64_t>();
    r.max_words = j.at("max_words").get<std::int64_t>();
    r.ms = j.at("ms").get<double>();
    r.violation = j.value("violation", !geq_rel(r.weight, r.guarantee));
    rows.push_back(std::move(r));
  }
  return rows;
}

bool all_rows_clean(const std::vector<ResultRow>& rows) {
  for (const ResultRow& r : rows)
    if (r.violation || !geq_rel(r.weight, r.guarantee)) return false;
  return true;
}

}  // namespace mwis
