#pragma once

#include <string>

#include "mwis/graph.hpp"
#include "mwis/trace.hpp"

namespace mwis {

// Graph JSON: {"n": <int>, "edges": [[u, v], ...], "weights": [w_0, ...]}.
// "weights" is optional and defaults to all 1.0. Graphs whose identifiers are
// not dense 0..n-1 (induced subgraphs) carry an extra "ids" array instead of
// plain "n"; the reader accepts both forms.
std::string graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const std::string& text);

WeightedGraph load_graph(const std::string& path);
void save_graph(const WeightedGraph& g, const std::string& path);

// Trace JSON: {"rounds": r, "max_words": w, "total_messages": t}.
std::string trace_to_json(const RoundTrace& t);
RoundTrace trace_from_json(const std::string& text);

}  // namespace mwis
