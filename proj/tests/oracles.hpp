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

// Slow, obviously-correct reference implementations used by the tests.
// Nothing here calls into the library's algorithms.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "qprof/circuit.hpp"
#include "qprof/random.hpp"

namespace oracle {

using Adj = std::vector<std::vector<bool>>;
constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// G(n, p) with a hand-rolled coin.
inline Adj random_graph(std::size_t n, double p, qprof::Rng& rng) {
  Adj a(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) a[i][j] = a[j][i] = true;
    }
  }
  return a;
}

inline std::vector<std::vector<int>> floyd_warshall(const Adj& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

inline std::size_t degree(const Adj& a, std::size_t v) { return static_cast<std::size_t>(std::count(a[v].begin(), a[v].end(), true)); }

/// Connected components via repeated flood fill over the reachability table.
inline std::vector<std::vector<std::size_t>> components(const Adj& a) {
  const auto d = floyd_warshall(a);
  std::vector<bool> seen(a.size(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (d[i][j] < kInf) {
        c.push_back(j);
        seen[j] = true;
      }
    }
    out.push_back(c);
  }
  return out;
}

inline Adj induced(const Adj& a, const std::vector<std::size_t>& nodes) {
  Adj s(nodes.size(), std::vector<bool>(nodes.size(), false));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) s[i][j] = a[nodes[i]][nodes[j]];
  }
  return s;
}

inline bool connected_without(const Adj& a, std::uint32_t removed_mask) {
  const std::size_t n = a.size();
  std::size_t start = n;
  std::size_t alive = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!(removed_mask >> v & 1)) {
      ++alive;
      if (start == n) start = v;
    }
  }
  if (alive <= 1) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  std::size_t count = 0;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    ++count;
    for (std::size_t w = 0; w < n; ++w) {
      if (a[v][w] && !seen[w] && !(removed_mask >> w & 1)) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return count == alive;
}

/// Smallest vertex set whose removal disconnects the graph; n-1 for cliques.
inline std::size_t vertex_connectivity(const Adj& a) {
  const std::size_t n = a.size();
  if (n <= 1) return 0;
  if (!connected_without(a, 0)) return 0;
  std::size_t best = n - 1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(__builtin_popcount(mask));
    if (k >= best || n - k < 2) continue;
    if (!connected_without(a, mask)) best = k;
  }
  return best;
}

inline std::size_t max_clique(const Adj& a) {
  const std::size_t n = a.size();
  std::size_t best = n ? 1 : 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if ((mask >> j & 1) && !a[i][j]) ok = false;
      }
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

/// Max s-t flow with unit capacities in both directions (DFS augmenting).
inline int max_flow(const Adj& a, std::size_t s, std::size_t t) {
  const std::size_t n = a.size();
  std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cap[i][j] = a[i][j] ? 1 : 0;
  }
  int flow = 0;
  for (;;) {
    std::vector<int> parent(n, -1);
    parent[s] = static_cast<int>(s);
    std::vector<std::size_t> stack{s};
    while (!stack.empty() && parent[t] < 0) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if (cap[v][w] > 0 && parent[w] < 0) {
          parent[w] = static_cast<int>(v);
          stack.push_back(w);
        }
      }
    }
    if (parent[t] < 0) return flow;
    for (std::size_t v = t; v != s; v = static_cast<std::size_t>(parent[v])) {
      const auto u = static_cast<std::size_t>(parent[v]);
      --cap[u][v];
      ++cap[v][u];
    }
    ++flow;
  }
}

inline std::size_t edge_connectivity(const Adj& a) {
  if (a.size() <= 1) return 0;
  int best = kInf;
  for (std::size_t t = 1; t < a.size(); ++t) best = std::min(best, max_flow(a, 0, t));
  return static_cast<std::size_t>(best);
}

/// Triangles counted once per (i<j<k); triples are paths of length 2.
inline double transitivity(const Adj& a) {
  const std::size_t n = a.size();
  double tri = 0;
  double triples = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (a[i][j] && a[j][k] && a[i][k]) ++tri;
      }
    }
    const double d = static_cast<double>(degree(a, i));
    triples += d * (d - 1) / 2;
  }
  return triples == 0 ? 0.0 : 3 * tri / triples;
}

/// One-pass textbook Pearson formula.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// ----------------------------------------------------------------- circuits

/// Edge (i, j) iff gates i < j share a qubit with no gate on that qubit in
/// between. Barriers behave like gates on their operands.
inline std::set<std::pair<std::size_t, std::size_t>> dag_edges(const qprof::Circuit& c) {
  std::set<std::pair<std::size_t, std::size_t>> e;
  const auto& g = c.gates;
  auto on = [](const qprof::Gate& x, qprof::Qubit q) {
    return std::find(x.qubits.begin(), x.qubits.end(), q) != x.qubits.end();
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      for (qprof::Qubit q : g[i].qubits) {
        if (!on(g[j], q)) continue;
        bool between = false;
        for (std::size_t k = i + 1; k < j && !between; ++k) between = on(g[k], q);
        if (!between) e.insert({i, j});
      }
    }
  }
  return e;
}

/// Longest weighted path through the DAG by memoised recursion.
template <typename W>
std::uint64_t longest_path(const qprof::Circuit& c, W&& weight) {
  const auto edges = dag_edges(c);
  const std::size_t n = c.gates.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (auto [i, j] : edges) succ[i].push_back(j);
  std::vector<std::int64_t> memo(n, -1);
  auto rec = [&](auto&& self, std::size_t v) -> std::uint64_t {
    if (memo[v] >= 0) return static_cast<std::uint64_t>(memo[v]);
    std::uint64_t best = 0;
    for (std::size_t w : succ[v]) best = std::max(best, self(self, w));
    best += weight(v);
    memo[v] = static_cast<std::int64_t>(best);
    return best;
  };
  std::uint64_t out = 0;
  for (std::size_t v = 0; v < n; ++v) out = std::max(out, rec(rec, v));
  return out;
}

/// Fewest SWAPs needed to run the circuit's two-qubit gates in order on a
/// coupling graph, by breadth-first search over (gate, permutation) states.
/// Only for tiny devices.
inline std::size_t min_swaps(const qprof::Circuit& c, const Adj& coupling, std::vector<std::uint32_t> start) {
  const std::size_t n = coupling.size();
  start.resize(n);
  // Fill unused physical slots so the state is a full permutation.
  std::vector<bool> used(n, false);
  for (std::size_t l = 0; l < c.n_qubits; ++l) used[start[l]] = true;
  std::size_t next = 0;
  for (std::size_t l = c.n_qubits; l < n; ++l) {
    while (used[next]) ++next;
    start[l] = static_cast<std::uint32_t>(next);
    used[next] = true;
  }
  std::vector<std::pair<qprof::Qubit, qprof::Qubit>> gates;
  for (const auto& g : c.gates) {
    if (qprof::is_two_qubit(g.kind)) gates.emplace_back(g.qubits[0], g.qubits[1]);
  }
  using State = std::pair<std::size_t, std::vector<std::uint32_t>>;
  std::map<State, std::size_t> dist;
  std::deque<State> q;
  auto advance = [&](State s) {
    while (s.first < gates.size() && coupling[s.second[gates[s.first].first]][s.second[gates[s.first].second]]) {
      ++s.first;
    }
    return s;
  };
  State s0 = advance({0, start});
  dist[s0] = 0;
  q.push_back(s0);
  while (!q.empty()) {
    State s = q.front();
    q.pop_front();
    const std::size_t d = dist[s];
    if (s.first == gates.size()) return d;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (!coupling[u][v]) continue;
        State t = s;
        for (auto& p : t.second) {
          if (p == u) p = static_cast<std::uint32_t>(v);
          else if (p == v) p = static_cast<std::uint32_t>(u);
        }
        t = advance(t);
        if (dist.emplace(t, d + 1).second) q.push_back(t);
      }
    }
  }
  return std::numeric_limits<std::size_t>::max();
}

// --------------------------------------------------------------- simulation

using Complex = std::complex<double>;
using Mat2 = std::array<Complex, 4>;  // row-major

inline Mat2 gate_matrix(const qprof::Gate& g) {
  using qprof::GateKind;
  constexpr double pi = std::numbers::pi;
  const Complex i(0, 1);
  const double r = 1 / std::sqrt(2.0);
  auto p = [&](std::size_t k) { return g.params.at(k); };
  switch (g.kind) {
    case GateKind::H: return {r, r, r, -r};
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -i, i, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::S: return {1, 0, 0, i};
    case GateKind::Sdg: return {1, 0, 0, -i};
    case GateKind::T: return {1, 0, 0, std::exp(i * (pi / 4))};
    case GateKind::Tdg: return {1, 0, 0, std::exp(-i * (pi / 4))};
    case GateKind::RX: return {std::cos(p(0) / 2), -i * std::sin(p(0) / 2), -i * std::sin(p(0) / 2), std::cos(p(0) / 2)};
    case GateKind::RY: return {std::cos(p(0) / 2), -std::sin(p(0) / 2), std::sin(p(0) / 2), std::cos(p(0) / 2)};
    case GateKind::RZ: return {std::exp(-i * (p(0) / 2)), 0, 0, std::exp(i * (p(0) / 2))};
    case GateKind::U: {
      const double t = p(0), ph = p(1), l = p(2);
      return {std::cos(t / 2), -std::exp(i * l) * std::sin(t / 2), std::exp(i * ph) * std::sin(t / 2),
              std::exp(i * (ph + l)) * std::cos(t / 2)};
    }
    default: throw std::logic_error("not a one-qubit unitary");
  }
}

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

/// Product of a time-ordered gate list.
inline Mat2 sequence_matrix(const std::vector<qprof::Gate>& seq) {
  Mat2 m{1, 0, 0, 1};
  for (const auto& g : seq) m = mul(gate_matrix(g), m);
  return m;
}

inline bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol = 1e-9) {
  // |tr(A^dag B)| = 2 iff B = e^{i phi} A for unitaries.
  Complex tr = 0;
  for (std::size_t k = 0; k < 4; ++k) tr += std::conj(a[k]) * b[k];
  return std::abs(std::abs(tr) - 2.0) < tol;
}

using State = std::vector<Complex>;

inline State random_state(std::size_t n_qubits, qprof::Rng& rng) {
  State s(std::size_t{1} << n_qubits);
  double norm = 0;
  for (auto& a : s) {
    a = Complex(rng.normal(), rng.normal());
    norm += std::norm(a);
  }
  for (auto& a : s) a /= std::sqrt(norm);
  return s;
}

/// Applies the unitary part of a circuit (measure and barrier skipped).
inline void apply(State& s, const qprof::Circuit& c) {
  using qprof::GateKind;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Measure || g.kind == GateKind::Barrier) continue;
    if (qprof::is_two_qubit(g.kind)) {
      const std::size_t a = std::size_t{1} << g.qubits[0];
      const std::size_t b = std::size_t{1} << g.qubits[1];
      for (std::size_t x = 0; x < s.size(); ++x) {
        switch (g.kind) {
          case GateKind::CNOT:
            if ((x & a) && !(x & b)) std::swap(s[x], s[x | b]);
            break;
          case GateKind::CZ:
            if ((x & a) && (x & b)) s[x] = -s[x];
            break;
          case GateKind::SWAP:
            if ((x & a) && !(x & b)) std::swap(s[x], s[(x & ~a) | b]);
            break;
          default: break;
        }
      }
      continue;
    }
    const Mat2 m = gate_matrix(g);
    const std::size_t bit = std::size_t{1} << g.qubits[0];
    for (std::size_t x = 0; x < s.size(); ++x) {
      if (x & bit) continue;
      const Complex a0 = s[x];
      const Complex a1 = s[x | bit];
      s[x] = m[0] * a0 + m[1] * a1;
      s[x | bit] = m[2] * a0 + m[3] * a1;
    }
  }
}

/// Embeds a logical state into physical qubits: logical l sits on layout[l];
/// unused physical qubits are |0>.
inline State embed(const State& logical, std::size_t n_logical, const std::vector<std::uint32_t>& layout,
                   std::size_t n_physical) {
  State out(std::size_t{1} << n_physical, 0.0);
  for (std::size_t x = 0; x < logical.size(); ++x) {
    std::size_t y = 0;
    for (std::size_t l = 0; l < n_logical; ++l) {
      if (x >> l & 1) y |= std::size_t{1} << layout[l];
    }
    out[y] = logical[x];
  }
  return out;
}

inline double overlap(const State& a, const State& b) {
  Complex s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::abs(s);
}

}  // namespace oracle
