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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprof/circuit.hpp"
#include "qprof/graph.hpp"

namespace qprof {

/// Weighted qubit interaction graph: one node per qubit, one edge per pair
/// of qubits sharing at least one two-qubit gate, weighted by gate count.
struct InteractionGraph {
  std::size_t n_nodes = 0;
  std::map<std::pair<Qubit, Qubit>, std::uint32_t> edges;  // key has first < second

  std::uint64_t total_weight() const {
    std::uint64_t s = 0;
    for (const auto& [e, w] : edges) s += w;
    return s;
  }

  graph::Graph topology() const {
    graph::Graph g(n_nodes);
    for (const auto& [e, w] : edges) g.add_edge(e.first, e.second);
    g.finalize();
    return g;
  }

  bool operator==(const InteractionGraph&) const = default;
};

inline InteractionGraph build_interaction_graph(const Circuit& c) {
  InteractionGraph ig;
  ig.n_nodes = c.n_qubits;
  for (const Gate& g : c.gates) {
    if (!is_two_qubit(g.kind)) continue;
    const Qubit a = std::min(g.qubits[0], g.qubits[1]);
    const Qubit b = std::max(g.qubits[0], g.qubits[1]);
    ++ig.edges[{a, b}];
  }
  return ig;
}

/// `u v weight` per line.
inline std::string to_edge_list(const InteractionGraph& ig) {
  std::string out;
  for (const auto& [e, w] : ig.edges) {
    out += std::to_string(e.first) + " " + std::to_string(e.second) + " " + std::to_string(w) + "\n";
  }
  return out;
}

inline std::string to_dot(const InteractionGraph& ig, std::string_view name = "interaction") {
  std::string out = "graph \"" + std::string(name) + "\" {\n";
  for (std::size_t v = 0; v < ig.n_nodes; ++v) out += "  q" + std::to_string(v) + ";\n";
  for (const auto& [e, w] : ig.edges) {
    out += "  q" + std::to_string(e.first) + " -- q" + std::to_string(e.second) + " [weight=" + std::to_string(w) +
           ", label=\"" + std::to_string(w) + "\"];\n";
  }
  out += "}\n";
  return out;
}

struct MetricOptions {
  /// Exact max-clique and vertex connectivity up to this many nodes.
  std::size_t exact_node_limit = 64;
  /// Include the zero entries of the adjacency matrix in the weight spread.
  bool weight_std_include_zeros = false;
};

/// Structural feature record of one circuit.
struct MetricVector {
  std::size_t n_qubits = 0;
  std::size_t n_gates = 0;
  double two_qubit_fraction = 0.0;
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  double avg_degree = 0.0;
  double avg_shortest_path = 0.0;
  std::size_t diameter = 0;
  double density = 0.0;
  double global_clustering_coefficient = 0.0;
  std::size_t edge_connectivity = 0;
  std::size_t vertex_connectivity = 0;
  std::size_t max_clique_size = 0;
  double adjacency_weight_std = 0.0;
  std::size_t n_components = 0;
  bool degenerate = false;  // no edges at all
  bool exact = true;        // false: clique is a greedy lower bound and vertex connectivity a bound

  bool operator==(const MetricVector&) const = default;
};

inline constexpr std::array<std::string_view, 15> kMetricNames = {
    "n_qubits",         "n_gates",           "two_qubit_fraction",
    "min_degree",       "max_degree",        "avg_degree",
    "avg_shortest_path", "diameter",         "density",
    "global_clustering_coefficient", "edge_connectivity", "vertex_connectivity",
    "max_clique_size",  "adjacency_weight_std", "n_components"};

/// Numeric values in kMetricNames order.
inline std::array<double, 15> metric_values(const MetricVector& m) {
  return {static_cast<double>(m.n_qubits),          static_cast<double>(m.n_gates),
          m.two_qubit_fraction,                     static_cast<double>(m.min_degree),
          static_cast<double>(m.max_degree),        m.avg_degree,
          m.avg_shortest_path,                      static_cast<double>(m.diameter),
          m.density,                                m.global_clustering_coefficient,
          static_cast<double>(m.edge_connectivity), static_cast<double>(m.vertex_connectivity),
          static_cast<double>(m.max_clique_size),   m.adjacency_weight_std,
          static_cast<double>(m.n_components)};
}

inline MetricVector compute_metric_vector(const InteractionGraph& ig, const SizeProfile& sp,
                                          const MetricOptions& opts = {}) {
  MetricVector m;
  m.n_qubits = sp.n_qubits;
  m.n_gates = sp.n_gates;
  m.two_qubit_fraction = sp.two_qubit_fraction;

  const graph::Graph g = ig.topology();
  const std::size_t n = g.size();
  const std::size_t e = g.edge_count();
  const auto comps = graph::components(g);
  m.n_components = comps.size();
  if (n == 0) return m;

  m.min_degree = n;
  for (std::size_t v = 0; v < n; ++v) {
    m.min_degree = std::min(m.min_degree, g.degree(v));
    m.max_degree = std::max(m.max_degree, g.degree(v));
  }
  m.avg_degree = 2.0 * static_cast<double>(e) / static_cast<double>(n);
  m.density = n < 2 ? 0.0 : 2.0 * static_cast<double>(e) / (static_cast<double>(n) * static_cast<double>(n - 1));

  if (!ig.edges.empty()) {
    double sum = 0.0;
    double sq = 0.0;
    std::size_t count = 0;
    for (const auto& [edge, w] : ig.edges) {
      sum += w;
      ++count;
    }
    if (opts.weight_std_include_zeros && n >= 2) count = n * (n - 1) / 2;
    const double mean = sum / static_cast<double>(count);
    for (const auto& [edge, w] : ig.edges) sq += (w - mean) * (w - mean);
    sq += static_cast<double>(count - ig.edges.size()) * mean * mean;
    m.adjacency_weight_std = std::sqrt(sq / static_cast<double>(count));
  }

  if (e == 0) {
    m.degenerate = true;
    m.max_clique_size = 1;
    return m;
  }

  // Hop-count statistics over reachable ordered pairs.
  std::uint64_t path_sum = 0;
  std::uint64_t pairs = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto d = graph::bfs(g, s);
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s || d[t] == graph::kUnreachable) continue;
      path_sum += d[t];
      ++pairs;
      m.diameter = std::max<std::size_t>(m.diameter, d[t]);
    }
  }
  m.avg_shortest_path = static_cast<double>(path_sum) / static_cast<double>(pairs);

  // Transitivity: 3 * triangles / connected triples.
  std::uint64_t closed = 0;  // ordered (v, a, b) with a<b both neighbours of v and adjacent
  std::uint64_t triples = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nb = g.neighbors(v);
    const std::uint64_t d = nb.size();
    triples += d * (d - (d > 0 ? 1 : 0)) / 2;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (g.adjacent(nb[i], nb[j])) ++closed;
      }
    }
  }
  m.global_clustering_coefficient = triples == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triples);

  // Connectivity on the largest component (first one on ties).
  const std::vector<std::size_t>* largest = &comps.front();
  for (const auto& c : comps) {
    if (c.size() > largest->size()) largest = &c;
  }
  const graph::Graph sub = g.induced(*largest);
  m.edge_connectivity = graph::edge_connectivity(sub);
  std::size_t sub_min_deg = sub.size();
  for (std::size_t v = 0; v < sub.size(); ++v) sub_min_deg = std::min(sub_min_deg, sub.degree(v));
  if (n <= opts.exact_node_limit) {
    m.vertex_connectivity = graph::vertex_connectivity(sub);
    m.max_clique_size = graph::max_clique_exact(g);
  } else {
    m.exact = false;
    // kappa >= 2*delta + 2 - n, and any connected graph on >= 2 nodes has kappa >= 1.
    const long long k = static_cast<long long>(2 * sub_min_deg + 2) - static_cast<long long>(sub.size());
    m.vertex_connectivity = static_cast<std::size_t>(std::max<long long>(sub.size() >= 2 ? 1 : 0, k));
    m.vertex_connectivity = std::min(m.vertex_connectivity, m.edge_connectivity);
    m.max_clique_size = graph::max_clique_greedy(g);
  }
  return m;
}

inline MetricVector profile_circuit(const Circuit& c, const CountOptions& count = {}, const MetricOptions& opts = {}) {
  return compute_metric_vector(build_interaction_graph(c), size_profile(c, count), opts);
}

}  // namespace qprof
