#!/usr/bin/env python3
"""Benchmark the jitted kernels against the interpreted fallback.

Runs the same solver workload in two subprocesses, one with
STACKSCHED_NO_NUMBA=1 and one without, and prints per-case timings.  The
jitted pass is warmed first so compilation time is reported separately.

Usage: python benchmarks/compare_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, time
from stacksched import _kernels
from stacksched.harness import parse_dimacs
from stacksched.satgadget import build_block_sequence, flatten_filled
from stacksched.stacked import reduce_aux_to_instance
from stacksched.solve import solve_decision
from stacksched.core import Instance, Task

def stacked(dimacs):
    cnf = parse_dimacs(dimacs)
    return reduce_aux_to_instance(flatten_filled(build_block_sequence(cnf, 3, 2))).instance

def random_instance(rng, n, horizon=60):
    tasks = []
    for k in range(n):
        ln = rng.choice([3, 2])
        r = rng.randint(0, horizon - ln)
        d = rng.randint(r + ln, min(horizon, r + ln + 8))
        tasks.append(Task(f"t{k}", r, d, ln))
    return Instance(tasks)

rng = random.Random(12)
cases = {
    "sat_n2m2": stacked("p cnf 2 2\n1 2 0\n-1 2 0\n"),
    "unsat_n2m2": stacked("p cnf 2 2\n1 0\n-1 0\n"),
    "sat_n3m3": stacked("p cnf 3 3\n1 2 3 0\n-1 -2 0\n2 -3 0\n"),
    "random_25tasks": random_instance(rng, 25, horizon=60),
}

repeat = int(json.loads(open(0).read())["repeat"])
warm = solve_decision(cases["sat_n2m2"])  # compile or load the kernels
out = {"numba": _kernels.NUMBA_ENABLED, "cases": {}}
for name, inst in cases.items():
    best = None
    nodes = 0
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = solve_decision(inst, max_nodes=10_000_000)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
        nodes = res.stats.nodes
    out["cases"][name] = {"seconds": best, "nodes": nodes, "verdict": res.verdict}
print(json.dumps(out))
"""


def run(disable_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable_numba:
        env["STACKSCHED_NO_NUMBA"] = "1"
    else:
        env.pop("STACKSCHED_NO_NUMBA", None)
    proc = subprocess.run(
        [sys.executable, "-c", WORKLOAD],
        input=json.dumps({"repeat": repeat}),
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timed repetitions per case")
    args = parser.parse_args()

    jitted = run(disable_numba=False, repeat=args.repeat)
    plain = run(disable_numba=True, repeat=max(1, args.repeat // 3))
    assert jitted["numba"] and not plain["numba"]

    print(f"{'case':<16} {'nodes':>10} {'jit (s)':>10} {'python (s)':>12} {'speedup':>9}")
    for name, j in jitted["cases"].items():
        p = plain["cases"][name]
        if j["nodes"] != p["nodes"] or j["verdict"] != p["verdict"]:
            print(f"{name:<16} BACKEND MISMATCH: {j} vs {p}")
            return 1
        speed = p["seconds"] / j["seconds"] if j["seconds"] > 0 else float("inf")
        print(f"{name:<16} {j['nodes']:>10} {j['seconds']:>10.4f} {p['seconds']:>12.4f} {speed:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
