// graphs.hpp: small shared helpers for Erdős–Rényi edge sets.
#pragma once

#include <utility>
#include <vector>

#include "rpd/errors.hpp"
#include "rpd/rng.hpp"

namespace rpd {

/// True when the undirected graph (vertices 0..n-1, given edge list) is
/// connected.  An empty graph with n <= 1 counts as connected.
inline bool is_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

/// One G(n, p) draw: each unordered pair (i < j) is an edge independently
/// with probability p.  Draw order is fixed (row-major over i < j) so the
/// result is a pure function of the rng state.
inline std::vector<std::pair<int, int>> erdos_renyi_edges(int n, double p,
                                                          Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return edges;
}

/// G(n, p) conditioned on connectivity: redraw until connected, up to
/// `max_attempts` times.
/// @throws Error when every attempt produced a disconnected graph
inline std::vector<std::pair<int, int>> connected_erdos_renyi_edges(
    int n, double p, Rng& rng, int max_attempts = 1000) {
  if (n < 1) throw DomainError("connected_erdos_renyi_edges: n must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("connected_erdos_renyi_edges: p must lie in (0, 1]");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    auto edges = erdos_renyi_edges(n, p, rng);
    if (is_connected(n, edges)) return edges;
  }
  throw Error("connected_erdos_renyi_edges: no connected draw in " +
              std::to_string(max_attempts) + " attempts");
}

}  // namespace rpd
