#include "mwis/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mwis {

using nlohmann::json;

std::string graph_to_json(const WeightedGraph& g) {
  json j;
  bool dense = true;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (g.id(i) != static_cast<NodeId>(i)) { dense = false; break; }
  if (dense) {
    j["n"] = g.n();
  } else {
    j["ids"] = std::vector<NodeId>(g.ids().begin(), g.ids().end());
  }
  json edges = json::array();
  for (const auto& [i, jx] : g.edges()) edges.push_back({g.id(i), g.id(jx)});
  j["edges"] = std::move(edges);
  j["weights"] = g.weights();
  return j.dump();
}

WeightedGraph graph_from_json(const std::string& text) {
  json j = json::parse(text);
  require(j.is_object(), "graph json must be an object");
  require(j.contains("n") || j.contains("ids"), "graph json needs \"n\" or \"ids\"");
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      require(e.is_array() && e.size() == 2, "each edge must be a [u, v] pair");
      edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
    }
  }
  std::vector<double> weights;
  if (j.contains("weights")) weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("ids")) {
    auto ids = j.at("ids").get<std::vector<NodeId>>();
    return WeightedGraph(std::move(ids), edges, std::move(weights));
  }
  return WeightedGraph(j.at("n").get<std::size_t>(), edges, std::move(weights));
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open graph file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

void save_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open output file: " + path);
  out << graph_to_json(g) << "\n";
}

std::string trace_to_json(const RoundTrace& t) {
  json j;
  j["rounds"] = t.rounds;
  j["max_words"] = t.max_words;
  j["total_messages"] = t.total_messages;
  return j.dump();
}

RoundTrace trace_from_json(const std::string& text) {
  json j = json::parse(text);
  RoundTrace t;
  t.rounds = j.at("rounds").get<std::int64_t>();
  t.max_words = j.at("max_words").get<std::int64_t>();
  t.total_messages = j.at("total_messages").get<std::int64_t>();
  return t;
}

}  // namespace mwis
