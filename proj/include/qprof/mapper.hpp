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

/**
 * @file mapper.hpp
 * @brief Circuit mapping: placement, SWAP routing, native decomposition.
 *
 * The pipeline run by map_circuit():
 *
 * 1. **Placement**: logical qubits onto device qubits (identity or
 *    degree-greedy).
 * 2. **Routing**: gates are consumed in program order; before every
 *    two-qubit gate whose operands are not coupled, SWAPs are inserted along
 *    a shortest coupling path.
 * 3. **Decomposition**: SWAP and non-native gates are rewritten into the
 *    device's native gate set, with optional cancellation of adjacent
 *    inverse one-qubit pairs.
 * 4. **Scheduling**: ASAP latency under the device duration table.
 *
 * Two routing policies are available. `nearest_path` always moves the
 * lower-indexed logical qubit along the lexicographically least shortest
 * path. `min_extend` looks at every shortest path (up to a cap) and every
 * split of the moves between the two operands, and picks the candidate
 * that least extends the ASAP schedule once the next `lookahead` two-qubit
 * gates are accounted for. It follows the latency-minimising idea of
 * MinExtend but is a simplified, independent heuristic.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qprof/circuit.hpp"
#include "qprof/device.hpp"
#include "qprof/error.hpp"
#include "qprof/interaction_graph.hpp"
#include "qprof/metrics.hpp"
#include "qprof/qasm.hpp"

namespace qprof {

enum class PlacementStrategy { identity, degree_greedy };
enum class RoutingPolicy { nearest_path, min_extend };
enum class Baseline { decomposed, raw };
enum class BasisChange { hadamard, ry };

inline std::string_view to_string(PlacementStrategy s) { return s == PlacementStrategy::identity ? "identity" : "degree_greedy"; }
inline std::string_view to_string(RoutingPolicy p) { return p == RoutingPolicy::nearest_path ? "nearest_path" : "min_extend"; }
inline std::string_view to_string(Baseline b) { return b == Baseline::decomposed ? "decomposed" : "raw"; }
inline std::string_view to_string(BasisChange b) { return b == BasisChange::hadamard ? "hadamard" : "ry"; }

inline PlacementStrategy placement_from_string(std::string_view s) {
  if (s == "identity") return PlacementStrategy::identity;
  if (s == "degree_greedy") return PlacementStrategy::degree_greedy;
  throw InvalidArgument("unknown placement strategy '" + std::string(s) + "'");
}
inline RoutingPolicy policy_from_string(std::string_view s) {
  if (s == "nearest_path") return RoutingPolicy::nearest_path;
  if (s == "min_extend") return RoutingPolicy::min_extend;
  throw InvalidArgument("unknown routing policy '" + std::string(s) + "'");
}
inline Baseline baseline_from_string(std::string_view s) {
  if (s == "decomposed") return Baseline::decomposed;
  if (s == "raw") return Baseline::raw;
  throw InvalidArgument("unknown baseline '" + std::string(s) + "'");
}
inline BasisChange basis_from_string(std::string_view s) {
  if (s == "hadamard") return BasisChange::hadamard;
  if (s == "ry") return BasisChange::ry;
  throw InvalidArgument("unknown basis change '" + std::string(s) + "'");
}

/// Injective logical -> physical assignment.
class Placement {
 public:
  static constexpr Qubit kFree = std::numeric_limits<Qubit>::max();

  Placement() = default;
  Placement(std::vector<Qubit> logical_to_physical, std::size_t n_physical)
      : l2p_(std::move(logical_to_physical)), p2l_(n_physical, kFree) {
    for (std::size_t l = 0; l < l2p_.size(); ++l) {
      const Qubit p = l2p_[l];
      if (p >= n_physical) throw InvalidArgument("placement target out of range");
      if (p2l_[p] != kFree) throw InvalidArgument("placement is not injective");
      p2l_[p] = static_cast<Qubit>(l);
    }
  }

  static Placement identity(std::size_t n_logical, std::size_t n_physical) {
    std::vector<Qubit> l2p(n_logical);
    for (std::size_t i = 0; i < n_logical; ++i) l2p[i] = static_cast<Qubit>(i);
    return Placement(std::move(l2p), n_physical);
  }

  Qubit physical(Qubit logical) const { return l2p_[logical]; }
  Qubit logical(Qubit physical) const { return p2l_[physical]; }
  std::size_t n_logical() const { return l2p_.size(); }
  std::size_t n_physical() const { return p2l_.size(); }
  const std::vector<Qubit>& layout() const { return l2p_; }

  /// Exchanges whatever occupies physical qubits a and b.
  void swap_physical(Qubit a, Qubit b) {
    std::swap(p2l_[a], p2l_[b]);
    if (p2l_[a] != kFree) l2p_[p2l_[a]] = a;
    if (p2l_[b] != kFree) l2p_[p2l_[b]] = b;
  }

  bool operator==(const Placement&) const = default;

 private:
  std::vector<Qubit> l2p_;
  std::vector<Qubit> p2l_;
};

inline Placement initial_placement(const Circuit& c, const Device& d, PlacementStrategy strategy) {
  if (c.n_qubits > d.n_qubits) {
    throw TooManyQubits("circuit needs " + std::to_string(c.n_qubits) + " qubits, device '" + d.name + "' has " +
                        std::to_string(d.n_qubits));
  }
  if (strategy == PlacementStrategy::identity) return Placement::identity(c.n_qubits, d.n_qubits);

  const graph::Graph ig = build_interaction_graph(c).topology();
  const graph::Graph cg = d.coupling_graph();
  std::vector<Qubit> logical(c.n_qubits);
  std::vector<Qubit> physical(d.n_qubits);
  for (std::size_t i = 0; i < logical.size(); ++i) logical[i] = static_cast<Qubit>(i);
  for (std::size_t i = 0; i < physical.size(); ++i) physical[i] = static_cast<Qubit>(i);
  std::stable_sort(logical.begin(), logical.end(), [&](Qubit a, Qubit b) { return ig.degree(a) > ig.degree(b); });
  std::stable_sort(physical.begin(), physical.end(), [&](Qubit a, Qubit b) { return cg.degree(a) > cg.degree(b); });
  std::vector<Qubit> l2p(c.n_qubits);
  for (std::size_t i = 0; i < logical.size(); ++i) l2p[logical[i]] = physical[i];
  return Placement(std::move(l2p), d.n_qubits);
}

/// A circuit over physical qubits with SWAPs inserted.
struct RoutedCircuit {
  Circuit circuit;
  Placement initial;
  Placement final;
  std::size_t swap_count = 0;
  std::vector<std::size_t> provenance;  // original gate index -> index in circuit.gates
};

struct RouteOptions {
  RoutingPolicy policy = RoutingPolicy::min_extend;
  std::size_t lookahead = 5;
  std::size_t max_paths = 32;  // shortest paths examined per blocked gate
};

namespace mapper_detail {

/// Shortest paths from `src` to `dst` in lexicographic order, at most `cap`.
inline std::vector<std::vector<Qubit>> shortest_paths(const graph::Graph& g, const DistanceMatrix& dist, Qubit src,
                                                      Qubit dst, std::size_t cap) {
  std::vector<std::vector<Qubit>> out;
  std::vector<Qubit> path{src};
  auto rec = [&](auto&& self, Qubit cur) -> void {
    if (out.size() >= cap) return;
    if (cur == dst) {
      out.push_back(path);
      return;
    }
    const std::uint32_t dcur = dist(cur, dst);
    for (std::uint32_t w : g.neighbors(cur)) {
      if (dist(w, dst) + 1 != dcur) continue;
      path.push_back(w);
      self(self, w);
      path.pop_back();
      if (out.size() >= cap) return;
    }
  };
  rec(rec, src);
  return out;
}

/// SWAPs (as physical pairs) that bring path.front() and path.back() next to
/// each other, with the front operand moving `front_moves` steps.
inline std::vector<std::pair<Qubit, Qubit>> swaps_for(const std::vector<Qubit>& path, std::size_t front_moves) {
  std::vector<std::pair<Qubit, Qubit>> s;
  const std::size_t len = path.size() - 1;  // edges
  for (std::size_t i = 0; i < front_moves; ++i) s.emplace_back(path[i], path[i + 1]);
  for (std::size_t i = 0; i + 1 + front_moves < len; ++i) s.emplace_back(path[len - i], path[len - i - 1]);
  return s;
}

}  // namespace mapper_detail

inline RoutedCircuit route(const Circuit& c, const Device& d, const Placement& placement, const RouteOptions& opts = {}) {
  validate(c);
  if (placement.n_logical() != c.n_qubits || placement.n_physical() != d.n_qubits) {
    throw InvalidArgument("placement does not match circuit and device");
  }
  const graph::Graph cg = d.coupling_graph();
  const DistanceMatrix dist(cg);
  const DurationTable dur = d.effective_durations();
  const std::uint64_t swap_cycles = *dur.get(GateKind::SWAP);
  auto cycles = [&](const Gate& g) -> std::uint64_t { return is_counted(g.kind) ? *dur.get(g.kind) : 0; };

  std::vector<std::size_t> two_qubit_gates;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (is_two_qubit(c.gates[i].kind)) two_qubit_gates.push_back(i);
  }

  RoutedCircuit out;
  out.circuit.n_qubits = d.n_qubits;
  out.circuit.n_clbits = c.n_clbits;
  out.circuit.name = c.name;
  out.circuit.origin = c.origin;
  out.initial = placement;
  out.provenance.resize(c.gates.size());
  Placement cur = placement;
  std::vector<std::uint64_t> ready(d.n_qubits, 0);

  auto occupy = [](std::vector<std::uint64_t>& r, Qubit a, Qubit b, std::uint64_t len) {
    const std::uint64_t end = std::max(r[a], r[b]) + len;
    r[a] = end;
    r[b] = end;
  };

  std::size_t next_two = 0;  // position in two_qubit_gates
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (is_two_qubit(g.kind)) {
      ++next_two;
      const Qubit la = g.qubits[0];
      const Qubit lb = g.qubits[1];
      const Qubit pa = cur.physical(la);
      const Qubit pb = cur.physical(lb);
      if (!dist.reachable(pa, pb)) {
        throw UnroutableGate("gate " + std::to_string(i) + ": qubits " + std::to_string(pa) + " and " +
                             std::to_string(pb) + " lie in different coupling components");
      }
      if (dist(pa, pb) > 1) {
        // The lower-indexed logical qubit is the path's front.
        const Qubit lo = std::min(la, lb);
        const Qubit hi = std::max(la, lb);
        const Qubit src = cur.physical(lo);
        const Qubit dst = cur.physical(hi);
        const std::size_t moves = dist(src, dst) - 1;
        std::vector<std::pair<Qubit, Qubit>> chosen;
        if (opts.policy == RoutingPolicy::nearest_path) {
          const auto paths = mapper_detail::shortest_paths(cg, dist, src, dst, 1);
          chosen = mapper_detail::swaps_for(paths.front(), moves);
        } else {
          const auto paths = mapper_detail::shortest_paths(cg, dist, src, dst, std::max<std::size_t>(1, opts.max_paths));
          using Cost = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
          std::optional<Cost> best;
          for (const auto& path : paths) {
            for (std::size_t m = moves + 1; m-- > 0;) {
              auto swaps = mapper_detail::swaps_for(path, m);
              std::vector<std::uint64_t> r = ready;
              Placement p = cur;
              for (const auto& [a, b] : swaps) {
                occupy(r, a, b, swap_cycles);
                p.swap_physical(a, b);
              }
              occupy(r, p.physical(la), p.physical(lb), cycles(g));
              const std::uint64_t gate_end = r[p.physical(la)];
              std::uint64_t future_distance = 0;
              const std::size_t stop = std::min(two_qubit_gates.size(), next_two + opts.lookahead);
              for (std::size_t k = next_two; k < stop; ++k) {
                const Gate& f = c.gates[two_qubit_gates[k]];
                const Qubit fa = p.physical(f.qubits[0]);
                const Qubit fb = p.physical(f.qubits[1]);
                const std::uint64_t hops = dist.reachable(fa, fb) ? dist(fa, fb) : d.n_qubits;
                future_distance += hops - 1;
                occupy(r, fa, fb, (hops - 1) * swap_cycles + cycles(f));
              }
              const std::uint64_t makespan = *std::max_element(r.begin(), r.end());
              const Cost cost{makespan, future_distance, gate_end};
              if (!best || cost < *best) {
                best = cost;
                chosen = std::move(swaps);
              }
            }
          }
        }
        for (const auto& [a, b] : chosen) {
          out.circuit.gates.push_back(Gate::two(GateKind::SWAP, a, b));
          occupy(ready, a, b, swap_cycles);
          cur.swap_physical(a, b);
          ++out.swap_count;
        }
      }
    }
    Gate pg = g;
    for (Qubit& q : pg.qubits) q = cur.physical(q);
    std::uint64_t start = 0;
    for (Qubit q : pg.qubits) start = std::max(start, ready[q]);
    for (Qubit q : pg.qubits) ready[q] = start + cycles(pg);
    out.provenance[i] = out.circuit.gates.size();
    out.circuit.gates.push_back(std::move(pg));
  }
  out.final = cur;
  return out;
}

/// Replays a routed circuit and returns a description of the first
/// violation, or std::nullopt when the routing is sound: every two-qubit gate
/// acts on coupled qubits, every original gate appears at its provenance
/// slot on the qubits its logical operands occupy at that point, all other
/// gates are SWAPs, and the tracked layout equals the recorded final one.
inline std::optional<std::string> check_routing(const Circuit& original, const RoutedCircuit& routed, const Device& d) {
  const graph::Graph cg = d.coupling_graph();
  if (routed.provenance.size() != original.gates.size()) return "provenance size mismatch";
  std::vector<std::optional<std::size_t>> origin_of(routed.circuit.gates.size());
  for (std::size_t i = 0; i < routed.provenance.size(); ++i) {
    const std::size_t pos = routed.provenance[i];
    if (pos >= routed.circuit.gates.size() || origin_of[pos]) return "bad provenance for gate " + std::to_string(i);
    if (i > 0 && pos <= routed.provenance[i - 1]) return "provenance not order preserving at gate " + std::to_string(i);
    origin_of[pos] = i;
  }
  Placement track = routed.initial;
  std::size_t swaps = 0;
  for (std::size_t pos = 0; pos < routed.circuit.gates.size(); ++pos) {
    const Gate& g = routed.circuit.gates[pos];
    if (is_two_qubit(g.kind) && !cg.adjacent(g.qubits[0], g.qubits[1])) {
      return "gate " + std::to_string(pos) + " acts on uncoupled qubits " + std::to_string(g.qubits[0]) + "," +
             std::to_string(g.qubits[1]);
    }
    if (!origin_of[pos]) {
      if (g.kind != GateKind::SWAP) return "inserted gate " + std::to_string(pos) + " is not a SWAP";
      track.swap_physical(g.qubits[0], g.qubits[1]);
      ++swaps;
      continue;
    }
    const Gate& o = original.gates[*origin_of[pos]];
    if (o.kind != g.kind || o.params != g.params || o.clbit != g.clbit || o.qubits.size() != g.qubits.size()) {
      return "gate " + std::to_string(pos) + " differs from original gate " + std::to_string(*origin_of[pos]);
    }
    for (std::size_t k = 0; k < o.qubits.size(); ++k) {
      if (track.physical(o.qubits[k]) != g.qubits[k]) {
        return "original gate " + std::to_string(*origin_of[pos]) + " applied to the wrong physical qubit";
      }
    }
  }
  if (swaps != routed.swap_count) return "swap_count does not match inserted SWAPs";
  if (!(track == routed.final)) return "final placement does not match tracked permutation";
  return std::nullopt;
}

struct DecomposeOptions {
  bool cancel_inverse_pairs = true;
  BasisChange basis_change = BasisChange::hadamard;
};

namespace mapper_detail {

constexpr double kHalfPi = std::numbers::pi / 2;

/// One-qubit rewrite rules in time order, tried in sequence. Equalities hold
/// up to global phase.
inline std::vector<std::vector<Gate>> one_qubit_rules(const Gate& g) {
  constexpr double pi = std::numbers::pi;
  const Qubit q = g.qubits[0];
  auto G = [q](GateKind k, double a) { return Gate::one(k, q, {a}); };
  auto P = [q](GateKind k) { return Gate::one(k, q); };
  switch (g.kind) {
    case GateKind::H:
      return {{G(GateKind::RY, kHalfPi), P(GateKind::X)},
              {G(GateKind::RZ, kHalfPi), G(GateKind::RX, kHalfPi), G(GateKind::RZ, kHalfPi)},
              {G(GateKind::RY, kHalfPi), G(GateKind::RX, pi)}};
    case GateKind::X:
      return {{G(GateKind::RX, pi)}};
    case GateKind::Y:
      return {{G(GateKind::RY, pi)}};
    case GateKind::Z:
      return {{G(GateKind::RZ, pi)}};
    case GateKind::S:
      return {{G(GateKind::RZ, kHalfPi)}};
    case GateKind::Sdg:
      return {{G(GateKind::RZ, -kHalfPi)}};
    case GateKind::T:
      return {{G(GateKind::RZ, pi / 4)}};
    case GateKind::Tdg:
      return {{G(GateKind::RZ, -pi / 4)}};
    case GateKind::RX:
      return {{G(GateKind::RZ, kHalfPi), G(GateKind::RY, g.params[0]), G(GateKind::RZ, -kHalfPi)}};
    case GateKind::RY:
      return {{G(GateKind::RZ, -kHalfPi), G(GateKind::RX, g.params[0]), G(GateKind::RZ, kHalfPi)}};
    case GateKind::RZ:
      return {{G(GateKind::RX, -kHalfPi), G(GateKind::RY, g.params[0]), G(GateKind::RX, kHalfPi)}};
    case GateKind::U:
      return {{G(GateKind::RZ, g.params[2]), G(GateKind::RY, g.params[0]), G(GateKind::RZ, g.params[1])}};
    default:
      return {};
  }
}

inline bool rewrite_one_qubit(const Gate& g, const Device& d, std::size_t depth, std::vector<Gate>& out) {
  if (d.is_native(g.kind)) {
    out.push_back(g);
    return true;
  }
  if (depth == 0) return false;
  for (const auto& rule : one_qubit_rules(g)) {
    std::vector<Gate> attempt;
    bool ok = true;
    for (const Gate& piece : rule) {
      if (!rewrite_one_qubit(piece, d, depth - 1, attempt)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.insert(out.end(), attempt.begin(), attempt.end());
      return true;
    }
  }
  return false;
}

inline bool are_inverse(const Gate& a, const Gate& b) {
  if (a.kind != b.kind || a.qubits != b.qubits) return false;
  if (a.kind == GateKind::H) return true;
  if (a.kind == GateKind::RX || a.kind == GateKind::RY || a.kind == GateKind::RZ) {
    return a.params[0] + b.params[0] == 0.0;
  }
  return false;
}

}  // namespace mapper_detail

/// Rewrites every gate into the device's native set. SWAP becomes three
/// CNOTs; CNOT and CZ are converted into each other by a basis change on the
/// target qubit.
inline Circuit decompose_to_native(const Circuit& c, const Device& d, const DecomposeOptions& opts = {}) {
  using mapper_detail::kHalfPi;
  std::vector<Gate> flat;
  auto emit_one = [&](const Gate& g) {
    if (!mapper_detail::rewrite_one_qubit(g, d, 3, flat)) {
      throw NoDecomposition("no rule takes '" + std::string(kind_name(g.kind)) + "' to the native set of '" + d.name + "'");
    }
  };
  auto basis = [&](Qubit t, bool before) {
    // CNOT = B(t) . CZ . B'(t) with B = H (self-inverse) or RY(-pi/2) / RY(pi/2).
    if (opts.basis_change == BasisChange::hadamard) {
      emit_one(Gate::one(GateKind::H, t));
    } else {
      emit_one(Gate::one(GateKind::RY, t, {before ? -kHalfPi : kHalfPi}));
    }
  };
  auto emit_cnot = [&](Qubit ctl, Qubit tgt) {
    if (d.native_two_qubit == GateKind::CNOT) {
      flat.push_back(Gate::two(GateKind::CNOT, ctl, tgt));
    } else {
      basis(tgt, true);
      flat.push_back(Gate::two(GateKind::CZ, ctl, tgt));
      basis(tgt, false);
    }
  };
  auto emit_cz = [&](Qubit a, Qubit b) {
    if (d.native_two_qubit == GateKind::CZ) {
      flat.push_back(Gate::two(GateKind::CZ, a, b));
    } else {
      // CZ = B'(b) . CNOT . B(b), the mirror of the CNOT rule.
      basis(b, false);
      flat.push_back(Gate::two(GateKind::CNOT, a, b));
      basis(b, true);
    }
  };
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::Measure:
      case GateKind::Barrier:
        flat.push_back(g);
        break;
      case GateKind::CNOT:
        emit_cnot(g.qubits[0], g.qubits[1]);
        break;
      case GateKind::CZ:
        emit_cz(g.qubits[0], g.qubits[1]);
        break;
      case GateKind::SWAP:
        emit_cnot(g.qubits[0], g.qubits[1]);
        emit_cnot(g.qubits[1], g.qubits[0]);
        emit_cnot(g.qubits[0], g.qubits[1]);
        break;
      default:
        emit_one(g);
    }
  }

  Circuit out;
  out.n_qubits = c.n_qubits;
  out.n_clbits = c.n_clbits;
  out.name = c.name;
  out.origin = c.origin;
  if (!opts.cancel_inverse_pairs) {
    out.gates = std::move(flat);
    return out;
  }
  // Per-qubit stacks of surviving gate indices; a one-qubit gate cancels
  // against the top of its qubit's stack when the two are inverse.
  std::vector<bool> removed(flat.size(), false);
  std::vector<std::vector<std::size_t>> last(c.n_qubits);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const Gate& g = flat[i];
    if (g.qubits.size() == 1 && is_one_qubit(g.kind)) {
      auto& stack = last[g.qubits[0]];
      if (!stack.empty() && mapper_detail::are_inverse(flat[stack.back()], g)) {
        removed[stack.back()] = true;
        removed[i] = true;
        stack.pop_back();
        continue;
      }
    }
    for (Qubit q : g.qubits) last[q].push_back(i);
  }
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!removed[i]) out.gates.push_back(std::move(flat[i]));
  }
  return out;
}

inline Circuit decompose_to_native(const RoutedCircuit& r, const Device& d, const DecomposeOptions& opts = {}) {
  return decompose_to_native(r.circuit, d, opts);
}

struct MapOptions {
  PlacementStrategy placement = PlacementStrategy::identity;
  RouteOptions routing;
  Baseline baseline = Baseline::decomposed;
  DecomposeOptions decompose;
  CountOptions count;
  std::uint64_t seed = 0;

  std::string summary() const {
    return "placement=" + std::string(to_string(placement)) + ";policy=" + std::string(to_string(routing.policy)) +
           ";lookahead=" + std::to_string(routing.lookahead) + ";max_paths=" + std::to_string(routing.max_paths) +
           ";baseline=" + std::string(to_string(baseline)) + ";basis=" + std::string(to_string(decompose.basis_change)) +
           ";cancel=" + (decompose.cancel_inverse_pairs ? "1" : "0") + ";count_measure=" +
           (count.count_measure ? "1" : "0") + ";seed=" + std::to_string(seed);
  }
};

struct MappingOutput {
  MappingResult result;
  RoutedCircuit routed;
  Circuit native;    // routed and decomposed, over physical qubits
  Circuit baseline;  // what G/L/F_before were measured on
};

inline MappingOutput map_circuit(const Circuit& c, const Device& d, const MapOptions& opts = {}) {
  validate(c);
  MappingOutput out;
  const Placement start = initial_placement(c, d, opts.placement);
  out.routed = route(c, d, start, opts.routing);
  out.native = decompose_to_native(out.routed, d, opts.decompose);

  MappingResult& r = out.result;
  if (opts.baseline == Baseline::decomposed) {
    out.baseline = decompose_to_native(c, d, opts.decompose);
    r.g_before = size_profile(out.baseline, opts.count).n_gates;
    r.l_before = latency_cycles(out.baseline, d.durations, opts.count);
    r.f_before = circuit_fidelity(out.baseline, d.error_rates, opts.count);
  } else {
    out.baseline = c;
    r.g_before = size_profile(c, opts.count).n_gates;
    r.l_before = latency_cycles(c, d.effective_durations(), opts.count);
    r.f_before = circuit_fidelity(c, d.effective_error_rates(), opts.count);
  }
  r.g_after = size_profile(out.native, opts.count).n_gates;
  r.l_after = latency_cycles(out.native, d.durations, opts.count);
  r.f_after = circuit_fidelity(out.native, d.error_rates, opts.count);
  r.swap_count = out.routed.swap_count;
  r.initial_layout = out.routed.initial.layout();
  r.final_layout = out.routed.final.layout();
  r.device_name = d.name;
  r.device_fingerprint = fingerprint(d);
  r.config = opts.summary();
  return out;
}

/// Routed circuit as QASM with a provenance header.
inline std::string routed_qasm(const MappingOutput& m, const MapOptions& opts, bool native = false) {
  SerializeOptions so;
  auto layout = [](const std::vector<Qubit>& l) {
    std::string s;
    for (std::size_t i = 0; i < l.size(); ++i) s += (i ? "," : "") + std::to_string(l[i]);
    return s;
  };
  so.header = {"device: " + m.result.device_name + " (" + m.result.device_fingerprint + ")",
               "options: " + opts.summary(),
               "initial_layout: " + layout(m.result.initial_layout),
               "final_layout: " + layout(m.result.final_layout),
               "swap_count: " + std::to_string(m.result.swap_count)};
  return serialize_qasm(native ? m.native : m.routed.circuit, so);
}

}  // namespace qprof
