#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spinglass/rng.hpp"

namespace spinglass::graphs {

// Simple undirected graph: no loops, no duplicate edges.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

struct CutResult {
  std::vector<std::int8_t> assignment;  // +-1 per vertex
  long long cut_value = 0;
  std::string method;
};

long long cut_value(const Graph& g, const std::vector<std::int8_t>& assignment);

// Exact max-cut by Gray-code enumeration over the gauge sigma_1 = +1;
// ties broken by the lexicographically smallest assignment. Requires n <= 24.
CutResult maxcut_bruteforce(const Graph& g);

// Steepest single-flip ascent to a local optimum, best of `restarts` random
// initializations.
CutResult maxcut_localsearch(const Graph& g, int restarts, RngStream& rng);

CutResult random_cut(const Graph& g, RngStream& rng);

// Erdos-Renyi G(n, d/n).
Graph er_graph(int n, double d, RngStream& rng);

// Random d-regular graph by configuration-model pairing with rejection of
// loops and multi-edges (retry cap 1000). Requires n*d even.
Graph reg_graph(int n, int d, RngStream& rng);

// Edge-list text: one "u v" pair per line, 0-indexed.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);

}  // namespace spinglass::graphs
