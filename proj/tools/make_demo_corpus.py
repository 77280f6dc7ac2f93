#!/usr/bin/env python3
# Copyright 2026 The qprof Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates data/demo_corpus and data/devices.

Random circuits come from `qprof generate`; the structured ones (CNOT
chains, ladders and ripple-carry adders) are written here. Usage:

    tools/make_demo_corpus.py build/qprof
"""

import argparse
import pathlib
import random
import subprocess

ROOT = pathlib.Path(__file__).resolve().parent.parent
HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def random_circuits(cli, out, rng, count):
    for i in range(count):
        qubits = rng.randint(4, 16)
        gates = rng.randint(20, 1200)
        twoq = round(rng.uniform(0.1, 0.9), 2)
        seed = rng.randrange(2**32)
        subprocess.run(
            [cli, "generate", "--qubits", str(qubits), "--gates", str(gates), "--twoq", str(twoq),
             "--seed", str(seed), "-o", str(out / f"random_{i:03d}.qasm")],
            check=True)


def chain(n, layers, rng):
    body = []
    for _ in range(layers):
        for q in range(n):
            if rng.random() < 0.5:
                body.append(f"{rng.choice(['h', 't', 's', 'x'])} q[{q}];")
        for q in range(n - 1):
            body.append(f"cx q[{q}],q[{q + 1}];")
    return n, body


def ladder(n, layers, rng):
    # Two rails with rungs: still degree <= 3 and planar.
    half = n // 2
    body = []
    for _ in range(layers):
        for q in range(half - 1):
            body.append(f"cx q[{q}],q[{q + 1}];")
            body.append(f"cx q[{half + q + 1}],q[{half + q}];")
        for q in range(half):
            if rng.random() < 0.5:
                body.append(f"cx q[{q}],q[{half + q}];")
            body.append(f"t q[{q}];")
    return 2 * half, body


def adder(bits, rounds):
    # Cuccaro ripple-carry adder on c0, (b_i, a_i)..., z.
    n = 2 * bits + 2
    c0, z = 0, n - 1
    b = [1 + 2 * i for i in range(bits)]
    a = [2 + 2 * i for i in range(bits)]
    body = []
    for _ in range(rounds):
        body.append(f"maj q[{c0}],q[{b[0]}],q[{a[0]}];")
        for i in range(1, bits):
            body.append(f"maj q[{a[i - 1]}],q[{b[i]}],q[{a[i]}];")
        body.append(f"cx q[{a[-1]}],q[{z}];")
        for i in reversed(range(1, bits)):
            body.append(f"uma q[{a[i - 1]}],q[{b[i]}],q[{a[i]}];")
        body.append(f"uma q[{c0}],q[{b[0]}],q[{a[0]}];")
    return n, body


ADDER_GATES = ("gate maj a,b,c { cx c,b; cx c,a; ccx a,b,c; }\n"
               "gate uma a,b,c { ccx a,b,c; cx c,a; cx a,b; }\n")


def write(path, n, body, extra=""):
    path.write_text("// origin: reversible_arithmetic\n" + HEADER + extra + f"qreg q[{n}];\n" +
                    "\n".join(body) + "\n")


def structured_circuits(out, rng, count):
    for i in range(count):
        kind = i % 3
        if kind == 0:
            n, body = chain(rng.randint(4, 16), rng.randint(1, 60), rng)
            write(out / f"rev_chain_{i:03d}.qasm", n, body)
        elif kind == 1:
            n, body = ladder(2 * rng.randint(2, 8), rng.randint(1, 30), rng)
            write(out / f"rev_ladder_{i:03d}.qasm", n, body)
        else:
            n, body = adder(rng.randint(1, 7), rng.randint(1, 6))
            write(out / f"rev_adder_{i:03d}.qasm", n, body, ADDER_GATES)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("cli", help="path to the qprof executable")
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--random", type=int, default=90)
    ap.add_argument("--structured", type=int, default=30)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = ROOT / "data" / "demo_corpus"
    out.mkdir(parents=True, exist_ok=True)
    for old in out.glob("*.qasm"):
        old.unlink()
    random_circuits(args.cli, out, rng, args.random)
    structured_circuits(out, rng, args.structured)

    devices = ROOT / "data" / "devices"
    devices.mkdir(parents=True, exist_ok=True)
    for name, spec in [("surface97", "surface97"), ("rochester53", "rochester53"), ("aspen16", "aspen16"),
                       ("grid5x5", "grid:5x5")]:
        subprocess.run([args.cli, "device", spec, "-o", str(devices / f"{name}.json")], check=True)


if __name__ == "__main__":
    main()
