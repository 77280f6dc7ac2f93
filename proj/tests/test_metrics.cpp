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

#include "qprof/device.hpp"
#include "qprof/generator.hpp"
#include "qprof/metrics.hpp"

using namespace qprof;

namespace {

ErrorTable uniform(double eps) {
  ErrorTable t;
  for (GateKind k : kAllGateKinds) t.set(k, eps);
  return t;
}

}  // namespace

TEST(Overhead, Examples) {
  EXPECT_DOUBLE_EQ(relative_overhead(100, 250), 150.0);
  EXPECT_DOUBLE_EQ(relative_overhead(4, 4), 0.0);
  EXPECT_DOUBLE_EQ(relative_overhead(1, 4), 300.0);
  EXPECT_THROW(relative_overhead(0, 5), ZeroBaseline);
  EXPECT_THROW(fidelity_decrease(0.0, 0.5), ZeroBaseline);
}

TEST(Fidelity, Examples) {
  const Circuit two(2, {Gate::one(GateKind::H, 0), Gate::two(GateKind::CNOT, 0, 1)});
  EXPECT_EQ(circuit_fidelity(two, uniform(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(circuit_fidelity(two, uniform(0.5)), 0.25);
  Circuit hundred(1);
  for (int i = 0; i < 100; ++i) hundred.gates.push_back(Gate::one(GateKind::X, 0));
  EXPECT_NEAR(circuit_fidelity(hundred, uniform(0.001)), std::pow(0.999, 100), 1e-15);
  EXPECT_NEAR(circuit_fidelity(hundred, uniform(0.001)), 0.9048, 1e-4);
  EXPECT_EQ(circuit_fidelity(Circuit(3), uniform(0.3)), 1.0);
}

TEST(Fidelity, PerKindRates) {
  ErrorTable t;
  t.set(GateKind::H, 0.1);
  t.set(GateKind::CNOT, 0.2);
  const Circuit c(2, {Gate::one(GateKind::H, 0), Gate::two(GateKind::CNOT, 0, 1), Gate::one(GateKind::H, 1)});
  EXPECT_NEAR(circuit_fidelity(c, t), 0.9 * 0.8 * 0.9, 1e-15);
  const Circuit x(1, {Gate::one(GateKind::X, 0)});
  EXPECT_THROW(circuit_fidelity(x, t), MissingErrorRate);
  // Uncounted operations need no entry.
  Circuit m(1, {Gate::one(GateKind::H, 0), Gate::measure(0, 0), Gate::barrier({0})});
  m.n_clbits = 1;
  EXPECT_NEAR(circuit_fidelity(m, t), 0.9, 1e-15);
  EXPECT_THROW(circuit_fidelity(m, t, {.count_measure = true}), MissingErrorRate);
}

TEST(Fidelity, DecreaseIdentity) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const double fb = 0.01 + 0.99 * rng.uniform();
    const double fa = fb * rng.uniform();
    EXPECT_NEAR(fidelity_decrease(fb, fa), 100.0 * (1.0 - fa / fb), 1e-9);
    EXPECT_GE(fidelity_decrease(fb, fa), 0.0);
    EXPECT_LE(fidelity_decrease(fb, fa), 100.0);
  }
}

TEST(Fidelity, IndependentOfGateOrder) {
  Rng rng(2);
  const ErrorTable t = grid_device(2, 2).error_rates;
  for (int i = 0; i < 100; ++i) {
    Circuit c = generate_random_circuit(4, rng.below(60), rng.uniform(), rng.next());
    const double f = circuit_fidelity(c, t);
    for (std::size_t k = c.gates.size(); k > 1; --k) std::swap(c.gates[k - 1], c.gates[rng.below(k)]);
    EXPECT_NEAR(circuit_fidelity(c, t), f, 1e-14);
    EXPECT_GT(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(Fidelity, StrictlyDecreasingInErrorRate) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Circuit c = generate_random_circuit(3, 1 + rng.below(50), rng.uniform(), rng.next());
    const double e1 = 0.2 * rng.uniform();
    const double e2 = e1 + 0.001 + 0.1 * rng.uniform();
    EXPECT_GT(circuit_fidelity(c, uniform(e1)), circuit_fidelity(c, uniform(e2)));
  }
}

TEST(Fidelity, MoreGatesNeverIncreaseIt) {
  Rng rng(4);
  const ErrorTable t = grid_device(2, 2).error_rates;
  for (int i = 0; i < 100; ++i) {
    Circuit c = generate_random_circuit(4, rng.below(40), 0.5, rng.next());
    const double before = circuit_fidelity(c, t);
    c.gates.push_back(Gate::two(GateKind::CNOT, 0, 1));
    EXPECT_LT(circuit_fidelity(c, t), before);
  }
}

TEST(MappingResultFields, DerivedPercentages) {
  MappingResult r;
  r.g_before = 100;
  r.g_after = 250;
  r.l_before = 40;
  r.l_after = 50;
  r.f_before = 0.8;
  r.f_after = 0.6;
  EXPECT_DOUBLE_EQ(r.gate_overhead(), 150.0);
  EXPECT_DOUBLE_EQ(r.latency_overhead(), 25.0);
  EXPECT_NEAR(r.fidelity_drop(), 25.0, 1e-12);
}
