// Command-line harness: generate instances, run the independent-set
// algorithms with their weight guarantees, re-verify stored result files, and
// benchmark round counts on large trees.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mwis/experiment.hpp"
#include "mwis/graph_io.hpp"
#include "mwis/tree_mwis.hpp"
#include "mwis/util.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  mwis::require(out.good(), "cannot open output file: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  mwis::require(in.good(), "cannot open input file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_gen(const std::string& type, std::size_t n, std::int64_t beta,
            std::uint64_t seed, const std::string& weights, const std::string& out) {
  mwis::GeneratedInstance inst =
      mwis::generate(type, n, beta, seed, mwis::parse_weight_spec(weights));
  nlohmann::json j = nlohmann::json::parse(mwis::graph_to_json(inst.graph));
  j["generator"] = inst.name;
  j["beta"] = inst.beta;  // certified arboricity bound for this instance
  j["seed"] = seed;
  write_text(out, j.dump() + "\n");
  return 0;
}

int cmd_run(const mwis::ExperimentConfig& cfg, const std::string& format,
            const std::string& out) {
  std::vector<mwis::ResultRow> rows = mwis::run_experiment(cfg);
  write_text(out, format == "json" ? mwis::rows_to_json(rows) : mwis::rows_to_csv(rows));
  if (!mwis::all_rows_clean(rows)) {
    std::cerr << "violation: at least one run missed its guarantee or budget\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& in, const std::string& format, std::int64_t budget) {
  const std::string text = read_text(in);
  std::vector<mwis::ResultRow> rows;
  if (format == "json" || (!text.empty() && text[0] == '['))
    rows = mwis::rows_from_json(text);
  else
    rows = mwis::rows_from_csv(text);
  std::size_t bad = 0;
  for (const mwis::ResultRow& r : rows) {
    std::vector<std::string> faults;
    if (!mwis::geq_rel(r.weight, r.guarantee)) faults.push_back("weight below guarantee");
    if (r.max_words > budget) faults.push_back("per-edge word budget exceeded");
    if (r.violation) faults.push_back("flagged by the producing run");
    if (r.opt > 0.0 && !mwis::eq_rel(r.ratio, r.weight / r.opt))
      faults.push_back("ratio does not match weight/opt");
    if (r.opt >= 0.0 && !mwis::geq_rel(r.opt, r.weight))
      faults.push_back("weight exceeds the exact optimum");
    if (!faults.empty()) {
      ++bad;
      std::cerr << "row " << r.instance_id << " (" << r.algo << "):";
      for (const std::string& f : faults) std::cerr << " " << f << ";";
      std::cerr << "\n";
    }
  }
  std::cout << rows.size() << " rows checked, " << bad << " bad\n";
  return bad == 0 ? 0 : 1;
}

int cmd_bench(const std::vector<std::size_t>& sizes, double eps, std::uint64_t seed,
              const std::string& weights, const std::string& format,
              const std::string& out) {
  std::string csv = "n,rounds,max_words,ms\n";
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t n : sizes) {
    mwis::GeneratedInstance inst =
        mwis::generate("tree", n, 1, seed, mwis::parse_weight_spec(weights));
    auto t0 = std::chrono::steady_clock::now();
    auto [set, trace] = mwis::tree_approx_mwis(inst.graph, eps);
    auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    csv += std::to_string(n) + ',' + std::to_string(trace.rounds) + ',' +
           std::to_string(trace.max_words) + ',' + std::to_string(ms) + '\n';
    arr.push_back({{"n", n},
                   {"rounds", trace.rounds},
                   {"max_words", trace.max_words},
                   {"ms", ms},
                   {"weight", set.weight}});
  }
  write_text(out, format == "json" ? arr.dump(2) + "\n" : csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed maximum-weight independent set toolkit"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::uint64_t seed = 1;
  double eps = 0.25;
  std::int64_t beta = 1;
  std::string algo = "tree_approx";
  std::int64_t budget = 8;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "base random seed (fully determines instances)");
  app.add_option("--eps", eps, "accuracy parameter in (0, 1]");
  app.add_option("--beta", beta, "arboricity bound / generator layer count");
  app.add_option("--algo", algo, "algorithm to run")
      ->check(CLI::IsMember(mwis::known_algorithms()));
  app.add_option("--budget", budget, "allowed words per edge per round");

  auto* gen = app.add_subcommand("gen", "generate an instance as graph JSON");
  gen->fallthrough();
  std::string gen_type = "tree";
  std::size_t gen_n = 100;
  std::string gen_weights = "uniform(0,10)";
  std::string gen_out = "-";
  gen->add_option("--type", gen_type, "tree|forests|path|cycle|clique|star|bounded_degree");
  gen->add_option("--n", gen_n, "number of nodes");
  gen->add_option("--weights", gen_weights, "unit | uniform(lo,hi) | powerlaw(alpha)");
  gen->add_option("--out", gen_out, "output path, - for stdout");

  auto* run = app.add_subcommand("run", "run an algorithm over generated instances");
  run->fallthrough();
  std::string run_gen = "tree";
  std::size_t run_n = 100;
  std::string run_weights = "uniform(0,10)";
  std::size_t run_repeat = 1;
  std::size_t run_threads = 1;
  bool run_no_verify = false;
  std::string run_out = "-";
  run->add_option("--gen", run_gen, "instance generator");
  run->add_option("--n", run_n, "number of nodes");
  run->add_option("--weights", run_weights, "weight distribution");
  run->add_option("--repeat", run_repeat, "number of instances (seeds seed..seed+k-1)");
  run->add_option("--threads", run_threads, "worker threads");
  run->add_flag("--no-verify", run_no_verify, "skip external re-verification");
  run->add_option("--out", run_out, "output path, - for stdout");

  auto* verify = app.add_subcommand("verify", "re-check a stored result file");
  verify->fallthrough();
  std::string verify_in;
  verify->add_option("--in", verify_in, "result file, - for stdin")->required();

  auto* bench = app.add_subcommand("bench", "round counts for the tree scheme");
  bench->fallthrough();
  std::vector<std::size_t> bench_sizes{1000, 10000, 100000};
  std::string bench_weights = "uniform(0,10)";
  std::string bench_out = "-";
  bench->add_option("--sizes", bench_sizes, "tree sizes to benchmark")->delimiter(',');
  bench->add_option("--weights", bench_weights, "weight distribution");
  bench->add_option("--out", bench_out, "output path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_type, gen_n, beta, seed, gen_weights, gen_out);
    if (run->parsed()) {
      mwis::ExperimentConfig cfg;
      cfg.generator = run_gen;
      cfg.n = run_n;
      cfg.beta = beta;
      cfg.seed = seed;
      cfg.weights = mwis::parse_weight_spec(run_weights);
      cfg.algo = algo;
      cfg.eps = eps;
      cfg.verify = !run_no_verify;
      cfg.repeat = run_repeat;
      cfg.threads = run_threads;
      cfg.budget = budget;
      return cmd_run(cfg, format, run_out);
    }
    if (verify->parsed()) return cmd_verify(verify_in, format, budget);
    if (bench->parsed())
      return cmd_bench(bench_sizes, eps, seed, bench_weights, format, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
