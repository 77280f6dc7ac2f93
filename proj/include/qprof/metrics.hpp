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

// Mapping evaluation metrics: gate overhead, latency overhead, circuit
// fidelity and fidelity decrease.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qprof/circuit.hpp"
#include "qprof/error.hpp"

namespace qprof {

/// 100 * (after - before) / before.
inline double relative_overhead(double before, double after) {
  if (!(before > 0.0)) throw ZeroBaseline("overhead baseline must be positive");
  return 100.0 * (after - before) / before;
}

/// Product of per-gate success probabilities (1 - error rate) over the
/// counted gates. Uncounted operations contribute nothing.
inline double circuit_fidelity(const Circuit& c, const KindTable<double>& error_rates, const CountOptions& opts = {}) {
  std::array<std::uint64_t, kGateKindCount> counts{};
  for (const Gate& g : c.gates) {
    if (is_counted(g.kind, opts)) ++counts[index_of(g.kind)];
  }
  double f = 1.0;
  for (GateKind k : kAllGateKinds) {
    const std::uint64_t n = counts[index_of(k)];
    if (n == 0) continue;
    const double eps = error_rates.require<MissingErrorRate>(k, "error rate");
    f *= std::pow(1.0 - eps, static_cast<double>(n));
  }
  return f;
}

/// 100 * (F_before - F_after) / F_before.
inline double fidelity_decrease(double f_before, double f_after) {
  if (!(f_before > 0.0)) throw ZeroBaseline("fidelity baseline must be positive");
  return 100.0 * (f_before - f_after) / f_before;
}

/// Before/after figures of one circuit mapped onto one device.
struct MappingResult {
  std::size_t g_before = 0;
  std::size_t g_after = 0;
  std::uint64_t l_before = 0;
  std::uint64_t l_after = 0;
  double f_before = 1.0;
  double f_after = 1.0;
  std::size_t swap_count = 0;
  std::vector<Qubit> initial_layout;  // logical -> physical
  std::vector<Qubit> final_layout;
  std::string device_name;
  std::string device_fingerprint;
  std::string config;  // mapper options summary

  double gate_overhead() const { return relative_overhead(static_cast<double>(g_before), static_cast<double>(g_after)); }
  double latency_overhead() const { return relative_overhead(static_cast<double>(l_before), static_cast<double>(l_after)); }
  double fidelity_drop() const { return fidelity_decrease(f_before, f_after); }

  bool operator==(const MappingResult&) const = default;
};

}  // namespace qprof
