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

// Core circuit representation: gates over virtual qubits, size statistics,
// the gate dependency DAG, unit-time depth and duration-aware latency.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprof/error.hpp"

namespace qprof {

using Qubit = std::uint32_t;

enum class GateKind : std::uint8_t {
  H,
  X,
  Y,
  Z,
  S,
  Sdg,
  T,
  Tdg,
  RX,
  RY,
  RZ,
  U,  // generic one-qubit rotation U(theta, phi, lambda)
  CNOT,
  CZ,
  SWAP,
  Measure,
  Barrier,
};

inline constexpr std::size_t kGateKindCount = static_cast<std::size_t>(GateKind::Barrier) + 1;

inline constexpr std::array<GateKind, kGateKindCount> kAllGateKinds = {
    GateKind::H,  GateKind::X,  GateKind::Y,    GateKind::Z,    GateKind::S,       GateKind::Sdg,
    GateKind::T,  GateKind::Tdg, GateKind::RX,  GateKind::RY,   GateKind::RZ,      GateKind::U,
    GateKind::CNOT, GateKind::CZ, GateKind::SWAP, GateKind::Measure, GateKind::Barrier};

inline constexpr std::array<GateKind, 12> kOneQubitKinds = {
    GateKind::H, GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,  GateKind::Sdg,
    GateKind::T, GateKind::Tdg, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::U};

constexpr std::size_t index_of(GateKind k) { return static_cast<std::size_t>(k); }

/// Canonical lower-case name, used in device configs and reports.
constexpr std::string_view kind_name(GateKind k) {
  constexpr std::array<std::string_view, kGateKindCount> names = {
      "h", "x", "y", "z", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "u",
      "cnot", "cz", "swap", "measure", "barrier"};
  return names[index_of(k)];
}

/// Parses a canonical kind name; also accepts the QASM spellings "cx" and "u3".
inline std::optional<GateKind> kind_from_name(std::string_view name) {
  if (name == "cx") return GateKind::CNOT;
  if (name == "u3") return GateKind::U;
  for (GateKind k : kAllGateKinds) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

constexpr bool is_two_qubit(GateKind k) {
  return k == GateKind::CNOT || k == GateKind::CZ || k == GateKind::SWAP;
}

constexpr bool is_one_qubit(GateKind k) {
  return index_of(k) <= index_of(GateKind::U);
}

constexpr std::size_t param_count(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    case GateKind::U:
      return 3;
    default:
      return 0;
  }
}

/// Fixed-size table indexed by gate kind; unset entries are std::nullopt.
template <typename T>
class KindTable {
 public:
  KindTable() = default;

  bool has(GateKind k) const { return values_[index_of(k)].has_value(); }
  const std::optional<T>& get(GateKind k) const { return values_[index_of(k)]; }
  void set(GateKind k, T v) { values_[index_of(k)] = std::move(v); }
  void unset(GateKind k) { values_[index_of(k)].reset(); }

  /// Throws E when the kind has no entry.
  template <typename E>
  const T& require(GateKind k, std::string_view what) const {
    const auto& v = values_[index_of(k)];
    if (!v) throw E(std::string(what) + " missing for gate kind '" + std::string(kind_name(k)) + "'");
    return *v;
  }

  bool operator==(const KindTable&) const = default;

 private:
  std::array<std::optional<T>, kGateKindCount> values_{};
};

using DurationTable = KindTable<std::uint32_t>;

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<Qubit> qubits;
  std::vector<double> params;
  std::optional<std::uint32_t> clbit;  // Measure target

  static Gate one(GateKind k, Qubit q, std::vector<double> params = {}) {
    return Gate{k, {q}, std::move(params), std::nullopt};
  }
  static Gate two(GateKind k, Qubit a, Qubit b) { return Gate{k, {a, b}, {}, std::nullopt}; }
  static Gate measure(Qubit q, std::uint32_t c) { return Gate{GateKind::Measure, {q}, {}, c}; }
  static Gate barrier(std::vector<Qubit> qs) { return Gate{GateKind::Barrier, std::move(qs), {}, std::nullopt}; }

  bool operator==(const Gate&) const = default;
};

enum class OriginTag : std::uint8_t {
  real_algorithm,
  reversible_arithmetic,
  random,
  queko,
  quantum_volume,
  unknown,
};

constexpr std::string_view origin_name(OriginTag t) {
  constexpr std::array<std::string_view, 6> names = {
      "real_algorithm", "reversible_arithmetic", "random", "queko", "quantum_volume", "unknown"};
  return names[static_cast<std::size_t>(t)];
}

inline OriginTag origin_from_name(std::string_view s) {
  for (std::size_t i = 0; i < 6; ++i) {
    auto t = static_cast<OriginTag>(i);
    if (origin_name(t) == s) return t;
  }
  return OriginTag::unknown;
}

struct Circuit {
  std::size_t n_qubits = 1;
  std::size_t n_clbits = 0;
  std::vector<Gate> gates;
  std::string name;
  OriginTag origin = OriginTag::unknown;

  Circuit() = default;
  explicit Circuit(std::size_t qubits, std::vector<Gate> g = {}) : n_qubits(qubits), gates(std::move(g)) {}

  /// Gate-for-gate equality; name and origin are metadata and not compared.
  bool same_gates(const Circuit& o) const { return n_qubits == o.n_qubits && gates == o.gates; }
};

/// Throws InvalidCircuit if any gate breaks arity, operand or parameter rules.
inline void validate(const Circuit& c) {
  if (c.n_qubits == 0) throw InvalidCircuit("circuit must have at least one qubit");
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    auto fail = [&](const std::string& why) {
      throw InvalidCircuit("gate " + std::to_string(i) + " (" + std::string(kind_name(g.kind)) + "): " + why);
    };
    for (Qubit q : g.qubits) {
      if (q >= c.n_qubits) fail("operand " + std::to_string(q) + " out of range");
    }
    if (g.kind == GateKind::Barrier) {
      if (g.qubits.empty()) fail("barrier without operands");
      continue;
    }
    const std::size_t want = is_two_qubit(g.kind) ? 2 : 1;
    if (g.qubits.size() != want) fail("wrong operand count");
    if (want == 2 && g.qubits[0] == g.qubits[1]) fail("operands must be distinct");
    if (g.params.size() != param_count(g.kind)) fail("wrong parameter count");
    if (g.kind == GateKind::Measure && g.clbit && *g.clbit >= c.n_clbits) fail("classical bit out of range");
  }
}

/// Which operations count as gates for size, latency and fidelity.
struct CountOptions {
  bool count_measure = false;
};

/// Barriers never count; measurements only when requested.
constexpr bool is_counted(GateKind k, const CountOptions& opts = {}) {
  if (k == GateKind::Barrier) return false;
  if (k == GateKind::Measure) return opts.count_measure;
  return true;
}

struct SizeProfile {
  std::size_t n_qubits = 0;
  std::size_t n_gates = 0;
  double two_qubit_fraction = 0.0;

  bool operator==(const SizeProfile&) const = default;
};

inline SizeProfile size_profile(const Circuit& c, const CountOptions& opts = {}) {
  std::size_t counted = 0;
  std::size_t two = 0;
  for (const Gate& g : c.gates) {
    if (!is_counted(g.kind, opts)) continue;
    ++counted;
    if (is_two_qubit(g.kind)) ++two;
  }
  SizeProfile sp;
  sp.n_qubits = c.n_qubits;
  sp.n_gates = counted;
  sp.two_qubit_fraction = counted == 0 ? 0.0 : static_cast<double>(two) / static_cast<double>(counted);
  return sp;
}

/// Gate dependency DAG. Node i is gate i; edges always point forward.
struct Dag {
  std::vector<std::vector<std::size_t>> successors;
  std::vector<std::vector<std::size_t>> predecessors;

  std::size_t size() const { return successors.size(); }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < successors.size(); ++i) {
      for (std::size_t j : successors[i]) out.emplace_back(i, j);
    }
    return out;
  }
};

/// Edge i->j iff gates i<j share a qubit with no gate on that qubit between
/// them. Barriers participate as ordinary nodes on all their operands.
inline Dag dependency_dag(const Circuit& c) {
  constexpr std::size_t none = SIZE_MAX;
  Dag dag;
  dag.successors.resize(c.gates.size());
  dag.predecessors.resize(c.gates.size());
  std::vector<std::size_t> last(c.n_qubits, none);
  for (std::size_t j = 0; j < c.gates.size(); ++j) {
    auto& preds = dag.predecessors[j];
    for (Qubit q : c.gates[j].qubits) {
      const std::size_t i = last[q];
      if (i != none && std::find(preds.begin(), preds.end(), i) == preds.end()) {
        preds.push_back(i);
        dag.successors[i].push_back(j);
      }
      last[q] = j;
    }
    std::sort(preds.begin(), preds.end());
  }
  return dag;
}

/// ASAP start/end cycle of every gate given per-gate durations.
struct Schedule {
  std::vector<std::uint64_t> start;
  std::vector<std::uint64_t> end;
  std::uint64_t makespan = 0;
};

/// Schedules gates ASAP in program order (a topological order of the DAG).
/// `duration(i)` gives the cycle count of gate i.
template <typename DurationFn>
Schedule schedule_asap(const Circuit& c, DurationFn&& duration) {
  Schedule s;
  s.start.resize(c.gates.size());
  s.end.resize(c.gates.size());
  std::vector<std::uint64_t> ready(c.n_qubits, 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    std::uint64_t t = 0;
    for (Qubit q : c.gates[i].qubits) t = std::max(t, ready[q]);
    const std::uint64_t e = t + duration(i);
    for (Qubit q : c.gates[i].qubits) ready[q] = e;
    s.start[i] = t;
    s.end[i] = e;
    s.makespan = std::max(s.makespan, e);
  }
  return s;
}

/// Unit-time depth: counted gates take one step, barriers and uncounted
/// measurements take none but still order their operands.
inline std::size_t depth(const Circuit& c, const CountOptions& opts = {}) {
  auto s = schedule_asap(c, [&](std::size_t i) -> std::uint64_t { return is_counted(c.gates[i].kind, opts) ? 1 : 0; });
  return static_cast<std::size_t>(s.makespan);
}

/// Makespan of the ASAP schedule under a per-kind cycle table.
inline std::uint64_t latency_cycles(const Circuit& c, const DurationTable& durations, const CountOptions& opts = {}) {
  std::vector<std::uint64_t> d(c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const GateKind k = c.gates[i].kind;
    d[i] = is_counted(k, opts) ? durations.require<MissingDuration>(k, "duration") : 0;
  }
  return schedule_asap(c, [&](std::size_t i) { return d[i]; }).makespan;
}

}  // namespace qprof
