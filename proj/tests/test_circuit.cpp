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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qprof/circuit.hpp"
#include "qprof/generator.hpp"
#include "qprof/qasm.hpp"

using namespace qprof;

namespace {

Gate H(Qubit q) { return Gate::one(GateKind::H, q); }
Gate X(Qubit q) { return Gate::one(GateKind::X, q); }
Gate CX(Qubit a, Qubit b) { return Gate::two(GateKind::CNOT, a, b); }

DurationTable table(std::uint32_t one, std::uint32_t two) {
  DurationTable d;
  for (GateKind k : kOneQubitKinds) d.set(k, one);
  d.set(GateKind::CNOT, two);
  d.set(GateKind::CZ, two);
  d.set(GateKind::SWAP, 3 * two);
  return d;
}

Circuit with_barriers_and_measures(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.below(4);
  GateSet gs = default_gate_set();
  gs.two_qubit = {GateKind::CNOT, GateKind::CZ, GateKind::SWAP};
  Circuit c = generate_random_circuit(n, 5 + rng.below(20), 0.4, gs, rng.next());
  c.n_clbits = n;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t pos = rng.below(c.gates.size() + 1);
    if (rng.below(2)) {
      c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(pos), Gate::barrier({0, static_cast<Qubit>(n - 1)}));
    } else {
      const auto q = static_cast<Qubit>(rng.below(n));
      c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(pos), Gate::measure(q, q));
    }
  }
  return c;
}

}  // namespace

TEST(SizeProfile, DirectCount) {
  Circuit c(2, {H(0), CX(0, 1), H(1), CX(1, 0)});
  const SizeProfile p = size_profile(c);
  EXPECT_EQ(p.n_qubits, 2u);
  EXPECT_EQ(p.n_gates, 4u);
  EXPECT_DOUBLE_EQ(p.two_qubit_fraction, 0.5);
}

TEST(SizeProfile, EmptyCircuit) {
  const SizeProfile p = size_profile(Circuit(3));
  EXPECT_EQ(p.n_qubits, 3u);
  EXPECT_EQ(p.n_gates, 0u);
  EXPECT_EQ(p.two_qubit_fraction, 0.0);
}

TEST(SizeProfile, SixQubitFigureStatistic) {
  // 456 counted gates, 62 of them two-qubit, over 6 qubits.
  Circuit c(6);
  for (int i = 0; i < 62; ++i) c.gates.push_back(CX(i % 6, (i + 1) % 6));
  for (int i = 0; i < 394; ++i) c.gates.push_back(H(i % 6));
  c.n_clbits = 6;
  for (Qubit q = 0; q < 6; ++q) c.gates.push_back(Gate::measure(q, q));
  c.gates.push_back(Gate::barrier({0, 1, 2}));
  const SizeProfile p = size_profile(c);
  EXPECT_EQ(p.n_gates, 456u);
  EXPECT_NEAR(p.two_qubit_fraction, 0.1359, 1e-4);
  EXPECT_DOUBLE_EQ(p.two_qubit_fraction, 62.0 / 456.0);
}

TEST(SizeProfile, MeasureCountsOnlyWhenAsked) {
  Circuit c(1, {H(0), Gate::measure(0, 0), Gate::barrier({0})});
  c.n_clbits = 1;
  EXPECT_EQ(size_profile(c).n_gates, 1u);
  EXPECT_EQ(size_profile(c, {.count_measure = true}).n_gates, 2u);
}

TEST(SizeProfile, SelfConcatenationKeepsFraction) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    Circuit c = generate_random_circuit(4, 1 + rng.below(40), rng.uniform(), rng.next());
    Circuit cc = c;
    cc.gates.insert(cc.gates.end(), c.gates.begin(), c.gates.end());
    EXPECT_DOUBLE_EQ(size_profile(c).two_qubit_fraction, size_profile(cc).two_qubit_fraction);
    EXPECT_GE(size_profile(c).two_qubit_fraction, 0.0);
    EXPECT_LE(size_profile(c).two_qubit_fraction, 1.0);
  }
}

TEST(Dag, Chain) {
  const Dag d = dependency_dag(Circuit(2, {H(0), CX(0, 1), X(1)}));
  EXPECT_EQ(d.edges(), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
}

TEST(Dag, DisjointQubits) {
  EXPECT_TRUE(dependency_dag(Circuit(2, {X(0), Gate::one(GateKind::Y, 1)})).edges().empty());
}

TEST(Dag, TriangleMatchesBruteForce) {
  Circuit c(3, {CX(0, 1), CX(1, 2), CX(0, 2)});
  const auto edges = dependency_dag(c).edges();
  const auto want = oracle::dag_edges(c);
  EXPECT_EQ(std::set(edges.begin(), edges.end()), want);
  EXPECT_EQ(want, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(Dag, RandomCircuitsMatchBruteForce) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Circuit c = with_barriers_and_measures(s);
    const Dag d = dependency_dag(c);
    const auto e = d.edges();
    ASSERT_EQ(std::set(e.begin(), e.end()), oracle::dag_edges(c)) << "seed " << s;
    // Acyclic: every edge goes forward in program order, which is a
    // topological order.
    for (auto [i, j] : e) EXPECT_LT(i, j);
  }
}

TEST(Dag, BarrierOrdersItsOperands) {
  Circuit c(3, {X(0), X(1), Gate::barrier({0, 1}), X(0), X(1), X(2)});
  const auto e = dependency_dag(c).edges();
  const std::set<std::pair<std::size_t, std::size_t>> s(e.begin(), e.end());
  EXPECT_TRUE(s.count({0, 2}) && s.count({1, 2}) && s.count({2, 3}) && s.count({2, 4}));
  for (auto [i, j] : s) EXPECT_NE(j, 5u);
}

TEST(Depth, Examples) {
  EXPECT_EQ(depth(Circuit(2, {H(0), X(1)})), 1u);
  EXPECT_EQ(depth(Circuit(2, {H(0), CX(0, 1), X(1)})), 3u);
  EXPECT_EQ(depth(Circuit(1)), 0u);
}

TEST(Depth, RandomMatchesLongestPath) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Circuit c = generate_random_circuit(5, 30, 0.4, rng.next());
    const std::uint64_t want = oracle::longest_path(c, [](std::size_t) { return 1; });
    EXPECT_EQ(depth(c), want);
    EXPECT_LE(depth(c), size_profile(c).n_gates);
  }
}

TEST(Latency, Examples) {
  DurationTable d = table(1, 2);
  EXPECT_EQ(latency_cycles(Circuit(1, {H(0)}), d), 1u);
  EXPECT_EQ(latency_cycles(Circuit(2, {H(0), CX(0, 1)}), d), 3u);
}

TEST(Latency, MissingDuration) {
  DurationTable d;
  d.set(GateKind::H, 1);
  EXPECT_THROW(latency_cycles(Circuit(2, {H(0), CX(0, 1)}), d), MissingDuration);
  // Uncounted kinds need no entry.
  Circuit m(1, {H(0), Gate::measure(0, 0)});
  m.n_clbits = 1;
  EXPECT_EQ(latency_cycles(m, d), 1u);
}

TEST(Latency, RandomMatchesWeightedLongestPath) {
  const DurationTable d = table(1, 2);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Circuit c = with_barriers_and_measures(s + 1000);
    auto w = [&](std::size_t i) -> std::uint64_t {
      const GateKind k = c.gates[i].kind;
      return is_counted(k) ? *d.get(k) : 0;
    };
    EXPECT_EQ(latency_cycles(c, d), oracle::longest_path(c, w)) << "seed " << s;
  }
}

TEST(Latency, UnitDurationsEqualDepth) {
  const DurationTable unit = table(1, 1);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Circuit c = generate_random_circuit(4, rng.below(50), 0.5, rng.next());
    EXPECT_EQ(latency_cycles(c, unit), depth(c));
  }
}

TEST(Circuit, ValidateRejectsBadGates) {
  EXPECT_THROW(validate(Circuit(2, {CX(0, 0)})), InvalidCircuit);
  EXPECT_THROW(validate(Circuit(2, {CX(0, 2)})), InvalidCircuit);
  EXPECT_THROW(validate(Circuit(1, {Gate::one(GateKind::RX, 0)})), InvalidCircuit);
  EXPECT_THROW(validate(Circuit(0)), InvalidCircuit);
  EXPECT_NO_THROW(validate(Circuit(2, {CX(0, 1), Gate::one(GateKind::RZ, 1, {0.5})})));
}

TEST(Circuit, ParsedCircuitsHaveAcyclicDags) {
  const Circuit c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\nccx q[0],q[1],q[2];\ncswap q[3],q[2],q[0];\n");
  for (auto [i, j] : dependency_dag(c).edges()) EXPECT_LT(i, j);
}
