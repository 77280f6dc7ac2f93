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

// Target devices: coupling graph, native gate set, per-kind durations and
// error rates. Includes the JSON config loader and topology generators.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qprof/circuit.hpp"
#include "qprof/error.hpp"
#include "qprof/graph.hpp"

namespace qprof {

using ErrorTable = KindTable<double>;

// Workbench defaults used when a config omits a table entry. These are not
// calibration data for any real chip.
inline constexpr std::uint32_t kDefaultOneQubitCycles = 1;
inline constexpr std::uint32_t kDefaultTwoQubitCycles = 2;
inline constexpr double kDefaultOneQubitError = 0.001;
inline constexpr double kDefaultTwoQubitError = 0.01;

struct Device {
  std::string name;
  std::size_t n_qubits = 0;
  std::vector<std::pair<Qubit, Qubit>> edges;  // sorted, first < second
  std::set<GateKind> native_one_qubit;
  GateKind native_two_qubit = GateKind::CNOT;
  DurationTable durations;
  ErrorTable error_rates;
  bool allow_disconnected = false;
  std::string note;  // free-form provenance text kept with the config

  bool is_native(GateKind k) const {
    if (is_two_qubit(k)) return k == native_two_qubit;
    if (is_one_qubit(k)) return native_one_qubit.count(k) > 0;
    return k == GateKind::Measure || k == GateKind::Barrier;
  }

  graph::Graph coupling_graph() const { return graph::Graph::from_edges(n_qubits, edges); }

  /// Cycles of a gate kind as executed after native decomposition. SWAP and
  /// non-native CNOT/CZ fall back to their decompositions when the table has
  /// no entry of their own.
  std::uint64_t effective_duration(GateKind k) const {
    if (k == GateKind::Barrier) return 0;
    if (durations.has(k)) return *durations.get(k);
    const auto one = [&](GateKind g) -> std::uint64_t {
      return durations.has(g) ? *durations.get(g) : kDefaultOneQubitCycles;
    };
    switch (k) {
      case GateKind::SWAP:
        return 3 * effective_duration(GateKind::CNOT);
      case GateKind::CNOT:
      case GateKind::CZ:
        // Basis change on the target around the native two-qubit gate.
        return effective_duration(native_two_qubit) + 2 * one(GateKind::H);
      default:
        return is_one_qubit(k) ? kDefaultOneQubitCycles : kDefaultTwoQubitCycles;
    }
  }

  /// Error rate of a kind after native decomposition (SWAP = 3 CNOTs).
  double effective_error(GateKind k) const {
    if (k == GateKind::Barrier) return 0.0;
    if (error_rates.has(k)) return *error_rates.get(k);
    if (k == GateKind::SWAP) {
      const double s = 1.0 - effective_error(GateKind::CNOT);
      return 1.0 - s * s * s;
    }
    if (is_two_qubit(k)) {
      const double h = 1.0 - (error_rates.has(GateKind::H) ? *error_rates.get(GateKind::H) : kDefaultOneQubitError);
      return 1.0 - (1.0 - effective_error(native_two_qubit)) * h * h;
    }
    return kDefaultOneQubitError;
  }

  DurationTable effective_durations() const {
    DurationTable t;
    for (GateKind k : kAllGateKinds) t.set(k, static_cast<std::uint32_t>(effective_duration(k)));
    return t;
  }

  ErrorTable effective_error_rates() const {
    ErrorTable t;
    for (GateKind k : kAllGateKinds) t.set(k, effective_error(k));
    return t;
  }

  bool operator==(const Device&) const = default;
};

/// Fills every unset one-qubit, CNOT, CZ and measure entry with the
/// workbench defaults. SWAP stays unset and is derived from CNOT.
inline void apply_default_tables(Device& d) {
  for (GateKind k : kOneQubitKinds) {
    if (!d.durations.has(k)) d.durations.set(k, kDefaultOneQubitCycles);
    if (!d.error_rates.has(k)) d.error_rates.set(k, kDefaultOneQubitError);
  }
  if (!d.durations.has(GateKind::Measure)) d.durations.set(GateKind::Measure, kDefaultOneQubitCycles);
  if (!d.error_rates.has(GateKind::Measure)) d.error_rates.set(GateKind::Measure, kDefaultOneQubitError);
  if (!d.durations.has(d.native_two_qubit)) d.durations.set(d.native_two_qubit, kDefaultTwoQubitCycles);
  if (!d.error_rates.has(d.native_two_qubit)) d.error_rates.set(d.native_two_qubit, kDefaultTwoQubitError);
}

/// Checks structural invariants; throws SchemaError, BadProbability or
/// DisconnectedTopology.
inline void validate(const Device& d) {
  if (d.n_qubits == 0) throw SchemaError("device '" + d.name + "' has no qubits");
  if (d.native_two_qubit != GateKind::CNOT && d.native_two_qubit != GateKind::CZ) {
    throw SchemaError("native two-qubit gate must be cnot or cz");
  }
  for (const auto& [u, v] : d.edges) {
    if (u == v) throw SchemaError("self-loop on qubit " + std::to_string(u));
    if (u >= d.n_qubits || v >= d.n_qubits) {
      throw SchemaError("edge [" + std::to_string(u) + "," + std::to_string(v) + "] outside " +
                        std::to_string(d.n_qubits) + "-qubit device");
    }
  }
  for (GateKind k : kAllGateKinds) {
    if (const auto& e = d.error_rates.get(k); e && !(*e >= 0.0 && *e < 1.0)) {
      throw BadProbability("error rate for '" + std::string(kind_name(k)) + "' not in [0,1)");
    }
  }
  for (GateKind k : d.native_one_qubit) {
    if (!d.durations.has(k) || !d.error_rates.has(k)) {
      throw SchemaError("native gate '" + std::string(kind_name(k)) + "' lacks duration or error rate");
    }
  }
  if (!d.durations.has(d.native_two_qubit) || !d.error_rates.has(d.native_two_qubit)) {
    throw SchemaError("native two-qubit gate lacks duration or error rate");
  }
  if (!d.allow_disconnected && graph::components(d.coupling_graph()).size() > 1) {
    throw DisconnectedTopology("coupling graph of '" + d.name + "' is disconnected");
  }
}

inline void normalize_edges(std::vector<std::pair<Qubit, Qubit>>& edges) {
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

/// Builds a validated device; unspecified table entries get the defaults.
inline Device make_device(std::string name, std::size_t n, std::vector<std::pair<Qubit, Qubit>> edges,
                          GateKind native_two = GateKind::CNOT, DurationTable durations = {},
                          ErrorTable errors = {}) {
  Device d;
  d.name = std::move(name);
  d.n_qubits = n;
  d.edges = std::move(edges);
  normalize_edges(d.edges);
  d.native_one_qubit = std::set<GateKind>(kOneQubitKinds.begin(), kOneQubitKinds.end());
  d.native_two_qubit = native_two;
  d.durations = std::move(durations);
  d.error_rates = std::move(errors);
  apply_default_tables(d);
  validate(d);
  return d;
}

inline nlohmann::json to_json(const Device& d) {
  using nlohmann::json;
  json edges = json::array();
  for (const auto& [u, v] : d.edges) edges.push_back({u, v});
  json durations = json::object();
  json errors = json::object();
  for (GateKind k : kAllGateKinds) {
    if (d.durations.has(k)) durations[std::string(kind_name(k))] = *d.durations.get(k);
    if (d.error_rates.has(k)) errors[std::string(kind_name(k))] = *d.error_rates.get(k);
  }
  json native1 = json::array();
  for (GateKind k : d.native_one_qubit) native1.push_back(std::string(kind_name(k)));
  json j{{"name", d.name},
         {"n_qubits", d.n_qubits},
         {"edges", edges},
         {"native_two_qubit_gate", std::string(kind_name(d.native_two_qubit))},
         {"native_one_qubit_gates", native1},
         {"durations", durations},
         {"error_rates", errors}};
  if (d.allow_disconnected) j["allow_disconnected"] = true;
  if (!d.note.empty()) j["note"] = d.note;
  return j;
}

inline Device device_from_json(const nlohmann::json& j) {
  using nlohmann::json;
  static const std::set<std::string> known = {"name",       "n_qubits",           "edges",
                                              "native_two_qubit_gate", "native_one_qubit_gates",
                                              "durations",  "error_rates",        "allow_disconnected",
                                              "note"};
  if (!j.is_object()) throw SchemaError("device config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw SchemaError("unknown device config key '" + key + "'");
  }
  auto kind_key = [](const std::string& s) {
    auto k = kind_from_name(s);
    if (!k || *k == GateKind::Barrier) throw SchemaError("unknown gate kind '" + s + "'");
    return *k;
  };
  Device d;
  try {
    d.name = j.at("name").get<std::string>();
    const auto n = j.at("n_qubits").get<long long>();
    if (n <= 0) throw SchemaError("n_qubits must be positive");
    d.n_qubits = static_cast<std::size_t>(n);
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw SchemaError("edges must be [u, v] pairs");
      const auto u = e[0].get<long long>();
      const auto v = e[1].get<long long>();
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw SchemaError("edge [" + std::to_string(u) + "," + std::to_string(v) + "] outside " +
                          std::to_string(n) + "-qubit device");
      }
      d.edges.emplace_back(static_cast<Qubit>(u), static_cast<Qubit>(v));
    }
    const auto two = kind_key(j.at("native_two_qubit_gate").get<std::string>());
    if (two != GateKind::CNOT && two != GateKind::CZ) throw SchemaError("native_two_qubit_gate must be cnot or cz");
    d.native_two_qubit = two;
    if (j.contains("native_one_qubit_gates")) {
      for (const auto& s : j.at("native_one_qubit_gates")) {
        const GateKind k = kind_key(s.get<std::string>());
        if (!is_one_qubit(k)) throw SchemaError("'" + s.get<std::string>() + "' is not a one-qubit gate");
        d.native_one_qubit.insert(k);
      }
    } else {
      d.native_one_qubit = std::set<GateKind>(kOneQubitKinds.begin(), kOneQubitKinds.end());
    }
    if (j.contains("durations")) {
      for (const auto& [key, value] : j.at("durations").items()) {
        const auto cycles = value.get<long long>();
        if (cycles < 0) throw SchemaError("negative duration for '" + key + "'");
        d.durations.set(kind_key(key), static_cast<std::uint32_t>(cycles));
      }
    }
    if (j.contains("error_rates")) {
      for (const auto& [key, value] : j.at("error_rates").items()) {
        const double p = value.get<double>();
        if (!(p >= 0.0 && p < 1.0)) throw BadProbability("error rate for '" + key + "' not in [0,1)");
        d.error_rates.set(kind_key(key), p);
      }
    }
    d.allow_disconnected = j.value("allow_disconnected", false);
    d.note = j.value("note", std::string());
  } catch (const json::exception& e) {
    throw SchemaError(std::string("device config: ") + e.what());
  }
  normalize_edges(d.edges);
  apply_default_tables(d);
  validate(d);
  return d;
}

inline Device load_device(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open device config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return device_from_json(j);
}

inline void save_device(const Device& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(d).dump(2) << "\n";
}

/// Stable 64-bit FNV-1a hash of the canonical config, as 16 hex digits.
inline std::string fingerprint(const Device& d) {
  const std::string canon = to_json(d).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Topology generators.

/// rows x cols nearest-neighbour grid, numbered row-major.
inline Device grid_device(std::size_t rows, std::size_t cols, GateKind native_two = GateKind::CNOT,
                          DurationTable durations = {}, ErrorTable errors = {}) {
  if (rows == 0 || cols == 0) throw InvalidArgument("grid dimensions must be positive");
  std::vector<std::pair<Qubit, Qubit>> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto q = static_cast<Qubit>(r * cols + c);
      if (c + 1 < cols) edges.emplace_back(q, q + 1);
      if (r + 1 < rows) edges.emplace_back(q, static_cast<Qubit>(q + cols));
    }
  }
  return make_device("grid_" + std::to_string(rows) + "x" + std::to_string(cols), rows * cols, std::move(edges),
                     native_two, std::move(durations), std::move(errors));
}

inline Device line_device(std::size_t n, GateKind native_two = GateKind::CNOT) {
  Device d = grid_device(1, n, native_two);
  d.name = "line_" + std::to_string(n);
  return d;
}

inline Device complete_device(std::size_t n, GateKind native_two = GateKind::CNOT) {
  std::vector<std::pair<Qubit, Qubit>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(static_cast<Qubit>(u), static_cast<Qubit>(v));
  }
  return make_device("complete_" + std::to_string(n), n, std::move(edges), native_two);
}

/// Rotated surface-code lattice of odd distance d: d*d data qubits and
/// d*d - 1 ancillas, each ancilla coupled to its 2 or 4 diagonal data
/// neighbours. d = 3 gives the 17-qubit layout, d = 7 gives 97 qubits.
inline Device surface_code_device(std::size_t distance, GateKind native_two = GateKind::CZ) {
  if (distance < 3 || distance % 2 == 0) throw InvalidArgument("surface code distance must be odd and >= 3");
  const long long d = static_cast<long long>(distance);
  // Coordinates on a (2d+1) x (2d+1) lattice: data at odd/odd, ancillas at even/even.
  std::vector<std::pair<long long, long long>> sites;
  for (long long i = 0; i < d; ++i) {
    for (long long j = 0; j < d; ++j) sites.emplace_back(2 * i + 1, 2 * j + 1);
  }
  for (long long i = 0; i <= d; ++i) {
    for (long long j = 0; j <= d; ++j) {
      const bool interior = i > 0 && i < d && j > 0 && j < d;
      const bool x_type = (i + j) % 2 == 0;
      const bool top_bottom = (i == 0 || i == d) && j > 0 && j < d && x_type;
      const bool left_right = (j == 0 || j == d) && i > 0 && i < d && !x_type;
      if (interior || top_bottom || left_right) sites.emplace_back(2 * i, 2 * j);
    }
  }
  std::sort(sites.begin(), sites.end());
  auto index_of_site = [&](long long r, long long c) -> long long {
    auto it = std::lower_bound(sites.begin(), sites.end(), std::make_pair(r, c));
    return (it != sites.end() && *it == std::make_pair(r, c)) ? it - sites.begin() : -1;
  };
  std::vector<std::pair<Qubit, Qubit>> edges;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    const auto [r, c] = sites[s];
    if (r % 2 != 0) continue;  // ancillas only
    for (long long dr : {-1LL, 1LL}) {
      for (long long dc : {-1LL, 1LL}) {
        const long long t = index_of_site(r + dr, c + dc);
        if (t >= 0) edges.emplace_back(static_cast<Qubit>(s), static_cast<Qubit>(t));
      }
    }
  }
  Device dev = make_device("surface_" + std::to_string(sites.size()), sites.size(), std::move(edges), native_two);
  return dev;
}

/// 97-qubit surface-code chip (distance-7 extension of the 17-qubit layout).
inline Device surface97_device() {
  Device d = surface_code_device(7, GateKind::CZ);
  d.name = "surface97";
  d.note = "Reconstructed: distance-7 rotated surface-code lattice (49 data + 48 ancilla qubits), "
           "row-major by lattice coordinate. Not an official vendor edge list.";
  return d;
}

/// IBM Rochester 53-qubit heavy-hexagon style coupling map.
inline Device rochester53_device() {
  std::vector<std::pair<Qubit, Qubit>> edges = {
      {0, 1},   {1, 2},   {2, 3},   {3, 4},   {0, 5},   {4, 6},   {5, 9},   {6, 13},  {7, 8},   {8, 9},
      {9, 10},  {10, 11}, {11, 12}, {12, 13}, {13, 14}, {14, 15}, {7, 16},  {11, 17}, {15, 18}, {16, 19},
      {17, 23}, {18, 27}, {19, 20}, {20, 21}, {21, 22}, {22, 23}, {23, 24}, {24, 25}, {25, 26}, {26, 27},
      {21, 28}, {25, 29}, {28, 32}, {29, 36}, {30, 31}, {31, 32}, {32, 33}, {33, 34}, {34, 35}, {35, 36},
      {36, 37}, {37, 38}, {30, 39}, {34, 40}, {38, 41}, {39, 42}, {40, 46}, {41, 50}, {42, 43}, {43, 44},
      {44, 45}, {45, 46}, {46, 47}, {47, 48}, {48, 49}, {49, 50}, {44, 51}, {48, 52}};
  Device d = make_device("rochester53", 53, std::move(edges), GateKind::CNOT);
  d.note = "Reconstructed from the published 53-qubit Rochester coupling map.";
  return d;
}

/// Rigetti Aspen 16-qubit layout: two octagons joined by two couplers.
inline Device aspen16_device() {
  std::vector<std::pair<Qubit, Qubit>> edges;
  for (Qubit ring : {0u, 8u}) {
    for (Qubit i = 0; i < 8; ++i) edges.emplace_back(ring + i, ring + (i + 1) % 8);
  }
  // Octagon A qubits 1 and 2 face octagon B qubits 14 and 13.
  edges.emplace_back(1, 14);
  edges.emplace_back(2, 13);
  Device d = make_device("aspen16", 16, std::move(edges), GateKind::CZ);
  d.note = "Two 8-qubit rings (0-7, 8-15) joined by couplers 1-14 and 2-13.";
  return d;
}

// ---------------------------------------------------------------------------

/// All-pairs hop counts over the coupling graph.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(const graph::Graph& g) : n_(g.size()), d_(n_ * n_) {
    for (std::size_t s = 0; s < n_; ++s) {
      const auto row = graph::bfs(g, s);
      std::copy(row.begin(), row.end(), d_.begin() + static_cast<std::ptrdiff_t>(s * n_));
    }
  }

  std::size_t size() const { return n_; }
  std::uint32_t operator()(std::size_t u, std::size_t v) const { return d_[u * n_ + v]; }
  bool reachable(std::size_t u, std::size_t v) const { return d_[u * n_ + v] != graph::kUnreachable; }

  /// CSV with a header row of qubit indices; unreachable pairs are empty.
  std::string to_csv() const {
    std::ostringstream out;
    out << "qubit";
    for (std::size_t v = 0; v < n_; ++v) out << ',' << v;
    out << '\n';
    for (std::size_t u = 0; u < n_; ++u) {
      out << u;
      for (std::size_t v = 0; v < n_; ++v) {
        out << ',';
        if (reachable(u, v)) out << (*this)(u, v);
      }
      out << '\n';
    }
    return out.str();
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> d_;
};

inline DistanceMatrix all_pairs_distance(const Device& d) { return DistanceMatrix(d.coupling_graph()); }

}  // namespace qprof
