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

// Synthetic circuit generators.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qprof/circuit.hpp"
#include "qprof/error.hpp"
#include "qprof/random.hpp"

namespace qprof {

struct GateSet {
  std::vector<GateKind> one_qubit;
  std::vector<GateKind> two_qubit;
};

inline GateSet default_gate_set() {
  return {{GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::T}, {GateKind::CNOT}};
}

/// Each gate is two-qubit with probability `two_qubit_fraction`; kinds and
/// operands are drawn uniformly. Rotation angles are uniform in [0, 2pi).
inline Circuit generate_random_circuit(std::size_t n_qubits, std::size_t n_gates, double two_qubit_fraction,
                                       const GateSet& gate_set, std::uint64_t seed) {
  if (!(two_qubit_fraction >= 0.0 && two_qubit_fraction <= 1.0)) throw BadFraction("two-qubit fraction outside [0,1]");
  if (n_qubits == 0) throw BadFraction("need at least one qubit");
  if (two_qubit_fraction > 0.0 && n_qubits < 2) throw BadFraction("two-qubit gates need at least two qubits");
  if (two_qubit_fraction > 0.0 && gate_set.two_qubit.empty()) throw BadFraction("gate set has no two-qubit kinds");
  if (two_qubit_fraction < 1.0 && gate_set.one_qubit.empty()) throw BadFraction("gate set has no one-qubit kinds");
  for (GateKind k : gate_set.one_qubit) {
    if (!is_one_qubit(k)) throw InvalidArgument("'" + std::string(kind_name(k)) + "' is not a one-qubit kind");
  }
  for (GateKind k : gate_set.two_qubit) {
    if (!is_two_qubit(k)) throw InvalidArgument("'" + std::string(kind_name(k)) + "' is not a two-qubit kind");
  }

  Rng rng(seed);
  Circuit c(n_qubits);
  c.origin = OriginTag::random;
  c.name = "random_q" + std::to_string(n_qubits) + "_g" + std::to_string(n_gates) + "_s" + std::to_string(seed);
  c.gates.reserve(n_gates);
  for (std::size_t i = 0; i < n_gates; ++i) {
    if (rng.uniform() < two_qubit_fraction) {
      const GateKind k = gate_set.two_qubit[rng.below(gate_set.two_qubit.size())];
      const auto a = static_cast<Qubit>(rng.below(n_qubits));
      auto b = static_cast<Qubit>(rng.below(n_qubits - 1));
      if (b >= a) ++b;
      c.gates.push_back(Gate::two(k, a, b));
    } else {
      const GateKind k = gate_set.one_qubit[rng.below(gate_set.one_qubit.size())];
      const auto q = static_cast<Qubit>(rng.below(n_qubits));
      std::vector<double> params(param_count(k));
      for (double& p : params) p = 2 * std::numbers::pi * rng.uniform();
      c.gates.push_back(Gate::one(k, q, std::move(params)));
    }
  }
  return c;
}

inline Circuit generate_random_circuit(std::size_t n_qubits, std::size_t n_gates, double two_qubit_fraction,
                                       std::uint64_t seed) {
  return generate_random_circuit(n_qubits, n_gates, two_qubit_fraction, default_gate_set(), seed);
}

/// Nearest-neighbour CNOT chain: `layers` sweeps of H on q0 followed by
/// CNOT(i, i+1) down the line.
inline Circuit line_circuit(std::size_t n_qubits, std::size_t layers) {
  if (n_qubits < 2) throw InvalidArgument("line circuit needs two qubits");
  Circuit c(n_qubits);
  c.origin = OriginTag::reversible_arithmetic;
  c.name = "line_q" + std::to_string(n_qubits) + "_l" + std::to_string(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    c.gates.push_back(Gate::one(GateKind::H, 0));
    for (std::size_t i = 0; i + 1 < n_qubits; ++i) {
      c.gates.push_back(Gate::two(GateKind::CNOT, static_cast<Qubit>(i), static_cast<Qubit>(i + 1)));
      c.gates.push_back(Gate::one(GateKind::T, static_cast<Qubit>(i + 1)));
    }
  }
  return c;
}

namespace generator_detail {

// Toffoli over {H, T, Tdg, CNOT}.
inline void toffoli(Circuit& c, Qubit a, Qubit b, Qubit t) {
  auto one = [&](GateKind k, Qubit q) { c.gates.push_back(Gate::one(k, q)); };
  auto cx = [&](Qubit x, Qubit y) { c.gates.push_back(Gate::two(GateKind::CNOT, x, y)); };
  one(GateKind::H, t);
  cx(b, t);
  one(GateKind::Tdg, t);
  cx(a, t);
  one(GateKind::T, t);
  cx(b, t);
  one(GateKind::Tdg, t);
  cx(a, t);
  one(GateKind::T, b);
  one(GateKind::T, t);
  one(GateKind::H, t);
  cx(a, b);
  one(GateKind::T, a);
  one(GateKind::Tdg, b);
  cx(a, b);
}

}  // namespace generator_detail

/// Ripple-carry adder on two `bits`-wide registers with a carry-in and a
/// carry-out qubit (2*bits + 2 qubits). Layout: c0, b0, a0, b1, a1, ..., z.
inline Circuit ripple_carry_adder(std::size_t bits) {
  if (bits == 0) throw InvalidArgument("adder needs at least one bit");
  const std::size_t n = 2 * bits + 2;
  Circuit c(n);
  c.origin = OriginTag::reversible_arithmetic;
  c.name = "ripple_adder_" + std::to_string(bits);
  auto a = [](std::size_t i) { return static_cast<Qubit>(2 * i + 2); };
  auto b = [](std::size_t i) { return static_cast<Qubit>(2 * i + 1); };
  auto cx = [&](Qubit x, Qubit y) { c.gates.push_back(Gate::two(GateKind::CNOT, x, y)); };
  auto maj = [&](Qubit x, Qubit y, Qubit z) {
    cx(z, y);
    cx(z, x);
    generator_detail::toffoli(c, x, y, z);
  };
  auto uma = [&](Qubit x, Qubit y, Qubit z) {
    generator_detail::toffoli(c, x, y, z);
    cx(z, x);
    cx(x, y);
  };
  maj(0, b(0), a(0));
  for (std::size_t i = 1; i < bits; ++i) maj(a(i - 1), b(i), a(i));
  cx(a(bits - 1), static_cast<Qubit>(n - 1));
  for (std::size_t i = bits; i-- > 1;) uma(a(i - 1), b(i), a(i));
  uma(0, b(0), a(0));
  return c;
}

}  // namespace qprof
