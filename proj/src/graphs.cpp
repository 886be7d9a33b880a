#include "spinglass/graphs.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spinglass::graphs {

namespace {

std::vector<std::vector<int>> adjacency(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

void validate(const Graph& g) {
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : g.edges) {
    if (u == v) throw std::invalid_argument("graph: loop edge");
    if (u < 0 || v < 0 || u >= g.n || v >= g.n)
      throw std::invalid_argument("graph: vertex out of range");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw std::invalid_argument("graph: duplicate edge");
  }
}

}  // namespace

long long cut_value(const Graph& g, const std::vector<std::int8_t>& assignment) {
  if (static_cast<int>(assignment.size()) != g.n)
    throw std::invalid_argument("cut_value: assignment size mismatch");
  long long cut = 0;
  for (auto [u, v] : g.edges)
    if (assignment[u] != assignment[v]) ++cut;
  return cut;
}

CutResult maxcut_bruteforce(const Graph& g) {
  if (g.n > 24) throw std::runtime_error("maxcut_bruteforce: n > 24 not supported");
  if (g.n < 1) throw std::invalid_argument("maxcut_bruteforce: empty graph");
  validate(g);
  const auto adj = adjacency(g);

  // vertex 0 fixed to +1; Gray code over the remaining n-1 spins.
  // opp[v] counts neighbours currently on the other side.
  std::vector<std::int8_t> sigma(g.n, 1);
  std::vector<int> opp(g.n, 0);
  long long cut = 0;

  std::vector<std::int8_t> best_sigma = sigma;
  long long best_cut = cut;
  auto consider = [&](const std::vector<std::int8_t>& s, long long c) {
    if (c > best_cut || (c == best_cut && s < best_sigma)) {
      best_cut = c;
      best_sigma = s;
    }
  };
  consider(sigma, cut);

  const std::uint64_t total = 1ull << (g.n - 1);
  for (std::uint64_t i = 1; i < total; ++i) {
    const int bit = __builtin_ctzll(i);
    const int v = 1 + bit;
    const long long delta = static_cast<long long>(adj[v].size()) - 2ll * opp[v];
    cut += delta;
    sigma[v] = -sigma[v];
    for (int u : adj[v]) {
      if (sigma[u] != sigma[v])
        ++opp[u];
      else
        --opp[u];
    }
    opp[v] = static_cast<int>(adj[v].size()) - opp[v];
    consider(sigma, cut);
  }
  return {best_sigma, best_cut, "brute"};
}

CutResult maxcut_localsearch(const Graph& g, int restarts, RngStream& rng) {
  if (restarts < 1) throw std::invalid_argument("maxcut_localsearch: restarts >= 1");
  validate(g);
  const auto adj = adjacency(g);
  CutResult best;
  best.cut_value = -1;
  best.method = "local-search";
  for (int r = 0; r < restarts; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    std::vector<std::int8_t> sigma(g.n);
    for (int v = 0; v < g.n; ++v) sigma[v] = sub.next_u64() & 1 ? 1 : -1;
    std::vector<int> opp(g.n, 0);
    long long cut = 0;
    for (auto [u, v] : g.edges)
      if (sigma[u] != sigma[v]) {
        ++cut;
        ++opp[u];
        ++opp[v];
      }
    for (;;) {
      int best_v = -1;
      long long best_gain = 0;
      for (int v = 0; v < g.n; ++v) {
        const long long gain = static_cast<long long>(adj[v].size()) - 2ll * opp[v];
        if (gain > best_gain) {
          best_gain = gain;
          best_v = v;
        }
      }
      if (best_v < 0) break;
      sigma[best_v] = -sigma[best_v];
      cut += best_gain;
      for (int u : adj[best_v]) {
        if (sigma[u] != sigma[best_v])
          ++opp[u];
        else
          --opp[u];
      }
      opp[best_v] = static_cast<int>(adj[best_v].size()) - opp[best_v];
    }
    if (cut > best.cut_value) {
      best.cut_value = cut;
      best.assignment = sigma;
    }
  }
  return best;
}

CutResult random_cut(const Graph& g, RngStream& rng) {
  std::vector<std::int8_t> sigma(g.n);
  for (int v = 0; v < g.n; ++v) sigma[v] = rng.next_u64() & 1 ? 1 : -1;
  return {sigma, cut_value(g, sigma), "random"};
}

Graph er_graph(int n, double d, RngStream& rng) {
  if (n < 1 || d < 0.0) throw std::invalid_argument("er_graph: bad parameters");
  Graph g;
  g.n = n;
  const double p = std::min(1.0, d / n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_uniform() < p) g.edges.emplace_back(u, v);
  return g;
}

Graph reg_graph(int n, int d, RngStream& rng) {
  if (n < 1 || d < 0 || d >= n) throw std::invalid_argument("reg_graph: bad parameters");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("reg_graph: n*d must be even");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < d; ++i) stubs.push_back(v);
    // Fisher-Yates pairing
    for (std::size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[rng.next_u64() % i]);
    std::set<std::pair<int, int>> seen;
    Graph g;
    g.n = n;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const int u = stubs[i], v = stubs[i + 1];
      if (u == v || !seen.insert(std::minmax(u, v)).second) {
        ok = false;
        break;
      }
      g.edges.emplace_back(u, v);
    }
    if (ok) return g;
  }
  throw std::runtime_error("reg_graph: pairing retry cap exceeded");
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edges) out << u << " " << v << "\n";
}

Graph read_edge_list(std::istream& in) {
  Graph g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    int u, v;
    if (!(ss >> u >> v)) throw std::invalid_argument("read_edge_list: malformed line");
    g.edges.emplace_back(u, v);
    g.n = std::max({g.n, u + 1, v + 1});
  }
  validate(g);
  return g;
}

}  // namespace spinglass::graphs
