// Copyright 2026 The qprof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Unweighted undirected graph algorithms shared by the interaction-graph
// metrics and the device model.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace qprof::graph {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Simple undirected graph with sorted, duplicate-free adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  template <typename EdgeRange>
  static Graph from_edges(std::size_t n, const EdgeRange& edges) {
    Graph g(n);
    for (const auto& [u, v] : edges) g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    g.finalize();
    return g;
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) return;
    adj_[u].push_back(static_cast<std::uint32_t>(v));
    adj_[v].push_back(static_cast<std::uint32_t>(u));
  }

  void finalize() {
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
  }

  std::size_t size() const { return adj_.size(); }
  const std::vector<std::uint32_t>& neighbors(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }

  bool adjacent(std::size_t u, std::size_t v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), static_cast<std::uint32_t>(v));
  }

  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adj_) s += a.size();
    return s / 2;
  }

  /// Induced subgraph on `nodes`; node i of the result is nodes[i].
  Graph induced(const std::vector<std::size_t>& nodes) const {
    std::vector<std::size_t> local(adj_.size(), SIZE_MAX);
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
    Graph g(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::uint32_t w : adj_[nodes[i]]) {
        if (local[w] != SIZE_MAX) g.adj_[i].push_back(static_cast<std::uint32_t>(local[w]));
      }
    }
    g.finalize();
    return g;
  }

 private:
  std::vector<std::vector<std::uint32_t>> adj_;
};

/// Hop distances from `src`; kUnreachable where no path exists.
inline std::vector<std::uint32_t> bfs(const Graph& g, std::size_t src) {
  std::vector<std::uint32_t> dist(g.size(), kUnreachable);
  std::vector<std::uint32_t> queue;
  queue.reserve(g.size());
  dist[src] = 0;
  queue.push_back(static_cast<std::uint32_t>(src));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t u = queue[head];
    for (std::uint32_t w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

/// Connected components, each sorted ascending, ordered by smallest member.
inline std::vector<std::vector<std::size_t>> components(const Graph& g) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(g.size(), false);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (std::uint32_t w : g.neighbors(comp[head])) {
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// Global minimum edge cut of a connected graph (Stoer-Wagner, unit weights).
/// Returns 0 for graphs with fewer than two nodes or that are disconnected.
inline std::size_t edge_connectivity(const Graph& g) {
  const std::size_t n = g.size();
  if (n < 2) return 0;
  // Dense weight matrix over merged super-nodes.
  std::vector<std::vector<std::uint32_t>> w(n, std::vector<std::uint32_t>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::uint32_t v : g.neighbors(u)) w[u][v] = 1;
  }
  std::vector<std::size_t> alive(n);
  for (std::size_t i = 0; i < n; ++i) alive[i] = i;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint64_t> key(n);
  std::vector<bool> added(n);
  while (alive.size() > 1) {
    std::fill(key.begin(), key.end(), 0);
    std::fill(added.begin(), added.end(), false);
    std::size_t prev = alive[0];
    std::size_t last = alive[0];
    for (std::size_t step = 0; step < alive.size(); ++step) {
      std::size_t pick = SIZE_MAX;
      for (std::size_t v : alive) {
        if (!added[v] && (pick == SIZE_MAX || key[v] > key[pick])) pick = v;
      }
      added[pick] = true;
      prev = last;
      last = pick;
      for (std::size_t v : alive) {
        if (!added[v]) key[v] += w[pick][v];
      }
    }
    best = std::min<std::size_t>(best, key[last]);
    // Merge `last` into `prev`.
    for (std::size_t v : alive) {
      w[prev][v] += w[last][v];
      w[v][prev] = w[prev][v];
    }
    w[prev][prev] = 0;
    alive.erase(std::find(alive.begin(), alive.end(), last));
  }
  return best;
}

namespace detail {

/// Unit-capacity max flow on a directed graph given as arc lists.
class UnitFlow {
 public:
  explicit UnitFlow(std::size_t n) : head_(n, -1) {}

  void add_arc(std::size_t u, std::size_t v) {
    to_.push_back(v);
    cap_.push_back(1);
    next_.push_back(head_[u]);
    head_[u] = static_cast<int>(to_.size() - 1);
    to_.push_back(u);
    cap_.push_back(0);
    next_.push_back(head_[v]);
    head_[v] = static_cast<int>(to_.size() - 1);
  }

  /// Max flow from s to t, stopping early once `limit` is reached.
  std::size_t run(std::size_t s, std::size_t t, std::size_t limit) {
    std::size_t flow = 0;
    std::vector<int> via(head_.size());
    while (flow < limit) {
      std::fill(via.begin(), via.end(), -2);
      via[s] = -1;
      std::vector<std::size_t> q{s};
      for (std::size_t h = 0; h < q.size() && via[t] == -2; ++h) {
        for (int e = head_[q[h]]; e != -1; e = next_[e]) {
          if (cap_[e] > 0 && via[to_[e]] == -2) {
            via[to_[e]] = e;
            q.push_back(to_[e]);
          }
        }
      }
      if (via[t] == -2) break;
      for (std::size_t v = t; v != s;) {
        const int e = via[v];
        cap_[e] -= 1;
        cap_[e ^ 1] += 1;
        v = to_[e ^ 1];
      }
      ++flow;
    }
    return flow;
  }

 private:
  std::vector<int> head_;
  std::vector<std::size_t> to_;
  std::vector<int> cap_;
  std::vector<int> next_;
};

/// Number of internally vertex-disjoint s-t paths (s, t non-adjacent).
inline std::size_t local_vertex_connectivity(const Graph& g, std::size_t s, std::size_t t, std::size_t limit) {
  const std::size_t n = g.size();
  // Node v splits into v_in = 2v and v_out = 2v + 1.
  UnitFlow f(2 * n);
  for (std::size_t v = 0; v < n; ++v) {
    if (v != s && v != t) f.add_arc(2 * v, 2 * v + 1);
    for (std::uint32_t w : g.neighbors(v)) f.add_arc(2 * v + 1, 2 * static_cast<std::size_t>(w));
  }
  return f.run(2 * s + 1, 2 * t, limit);
}

}  // namespace detail

/// Vertex connectivity of a connected graph (Even's algorithm). Complete
/// graphs K_n give n - 1; graphs with fewer than two nodes give 0.
inline std::size_t vertex_connectivity(const Graph& g) {
  const std::size_t n = g.size();
  if (n < 2) return 0;
  std::size_t min_deg = n;
  for (std::size_t v = 0; v < n; ++v) min_deg = std::min(min_deg, g.degree(v));
  std::size_t best = n - 1;
  // Sources v_0..v_k suffice once k exceeds the current bound.
  for (std::size_t i = 0; i < n && i <= best; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (g.adjacent(i, j)) continue;
      best = std::min(best, detail::local_vertex_connectivity(g, i, j, best));
    }
  }
  return std::min(best, min_deg);
}

/// Exact maximum clique size (Bron-Kerbosch with pivoting).
inline std::size_t max_clique_exact(const Graph& g) {
  const std::size_t n = g.size();
  if (n == 0) return 0;
  std::size_t best = 1;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  auto intersect = [&](const std::vector<std::size_t>& set, std::size_t v) {
    std::vector<std::size_t> out;
    for (std::size_t u : set) {
      if (g.adjacent(u, v)) out.push_back(u);
    }
    return out;
  };
  auto rec = [&](auto&& self, std::size_t r, std::vector<std::size_t> p, std::vector<std::size_t> x) -> void {
    if (p.empty()) {
      if (x.empty()) best = std::max(best, r);
      return;
    }
    if (r + p.size() <= best) return;
    std::size_t pivot = p.front();
    std::size_t pivot_deg = 0;
    for (const auto* set : {&p, &x}) {
      for (std::size_t u : *set) {
        std::size_t d = 0;
        for (std::size_t v : p) d += g.adjacent(u, v) ? 1 : 0;
        if (d > pivot_deg) {
          pivot_deg = d;
          pivot = u;
        }
      }
    }
    std::vector<std::size_t> candidates;
    for (std::size_t v : p) {
      if (!g.adjacent(pivot, v)) candidates.push_back(v);
    }
    for (std::size_t v : candidates) {
      self(self, r + 1, intersect(p, v), intersect(x, v));
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  };
  rec(rec, 0, all, {});
  return best;
}

/// Greedy clique: a lower bound on the maximum clique size.
inline std::size_t max_clique_greedy(const Graph& g) {
  const std::size_t n = g.size();
  if (n == 0) return 0;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
  std::size_t best = 1;
  for (std::size_t seed : order) {
    if (g.degree(seed) + 1 <= best) break;
    std::vector<std::size_t> clique{seed};
    std::vector<std::uint32_t> cand(g.neighbors(seed).begin(), g.neighbors(seed).end());
    std::stable_sort(cand.begin(), cand.end(), [&](std::uint32_t a, std::uint32_t b) { return g.degree(a) > g.degree(b); });
    for (std::uint32_t v : cand) {
      bool ok = true;
      for (std::size_t u : clique) ok = ok && g.adjacent(u, v);
      if (ok) clique.push_back(v);
    }
    best = std::max(best, clique.size());
  }
  return best;
}

}  // namespace qprof::graph
