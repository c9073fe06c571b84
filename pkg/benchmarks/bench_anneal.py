"""Annealing kernel backend benchmark.

Times the simulated-annealing sweep kernel with the JIT backend against
the pure-Python fallback on one conflict-graph QUBO built through the
regular pipeline. Both backends get the same seed, schedule, and matrix,
so the work is identical; the script also checks that they walk the
exact same trajectory (same best state, energy, and step count). The
first JIT call is a compilation warm-up and is excluded from timing.
If numba is not installed the script still times the fallback path.

Run:

    python3 benchmarks/bench_anneal.py [--requests 120] [--sweeps 300] [--repeats 3]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from probeopt.qubo.anneal import AnnealParams, solve
from probeopt.qubo.conflict import build_conflict_graph
from probeopt.qubo.kernels import HAVE_NUMBA
from probeopt.qubo.model import to_qubo
from probeopt.qubo.problem import SatelliteProblem, generate_geometry


def build_qubo(requests: int, seed: int):
    problem = SatelliteProblem(
        n_satellites=4,
        n_requests=requests,
        view_height=0.8,  # wide bands so most requests load several satellites
        turn_speed=1.0,
        seed=seed,
    )
    graph = build_conflict_graph(generate_geometry(problem), problem)
    return to_qubo(graph, problem.qubo_weights), graph


def time_backend(qubo, params, seed, use_numba, repeats):
    if use_numba:
        # compile outside the timed region
        solve(qubo, AnnealParams(sweeps=2), np.random.default_rng(0), use_numba=True)
    durations = []
    result = None
    for _ in range(repeats):
        rng = np.random.default_rng(seed)  # same stream each repeat: same work
        start = time.perf_counter()
        result = solve(qubo, params, rng, use_numba=use_numba)
        durations.append(time.perf_counter() - start)
    return durations, result


def report(name, durations):
    mean = statistics.mean(durations)
    std = statistics.stdev(durations) if len(durations) > 1 else 0.0
    print(f"{name:>12}: {mean * 1e3:8.2f} ms +- {std * 1e3:6.2f} ms  (n={len(durations)})")
    return mean


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--requests", type=int, default=120)
    parser.add_argument("--sweeps", type=int, default=300)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    qubo, graph = build_qubo(args.requests, args.seed)
    params = AnnealParams(sweeps=args.sweeps)
    print(f"QUBO: {qubo.n} nodes, {len(graph.edges)} conflict edges, {args.sweeps} sweeps")

    py_durs, py_result = time_backend(qubo, params, args.seed, False, args.repeats)
    py_mean = report("pure numpy", py_durs)

    if not HAVE_NUMBA:
        print("numba not installed; fallback path only")
        return 0

    jit_durs, jit_result = time_backend(qubo, params, args.seed, True, args.repeats)
    jit_mean = report("numba jit", jit_durs)

    same = (
        np.array_equal(py_result.state, jit_result.state)
        and py_result.energy == jit_result.energy
        and py_result.steps_taken == jit_result.steps_taken
    )
    print(f"backends agree on state/energy/steps: {same}")
    print(f"speedup: {py_mean / jit_mean:.1f}x")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
