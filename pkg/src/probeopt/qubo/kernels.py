"""Annealer sweep kernel: numba-jitted, with a pure-Python fallback.

Both backends run the exact same function body, so trajectories are
bit-identical regardless of which one executes; the jit only changes
speed. Backend selection: the PROBEOPT_NUMBA environment variable
("0"/"false"/"no"/"off" disables the jit), falling back automatically
when numba is not importable.
"""

from __future__ import annotations

import math
import os
from typing import Callable, Optional


def _sweep_impl(qdiag, coupling, temps, uniforms, state, best_state):
    """Sequential single-flip Metropolis sweeps over a QUBO.

    qdiag: (n,) diagonal of Q. coupling: (n, n) symmetric off-diagonal
    couplings (Q + Q^T with a zeroed diagonal). temps: (sweeps,)
    temperature per sweep. uniforms: (sweeps, n) pre-drawn accept rolls,
    one per flip attempt, so the trajectory is a pure function of the
    inputs. state is mutated in place; best_state receives the lowest
    energy configuration visited. Returns (final_energy, best_energy).
    """
    n = qdiag.shape[0]
    sweeps = temps.shape[0]
    e = 0.0
    for i in range(n):
        if state[i] == 1:
            e += qdiag[i]
            for j in range(i + 1, n):
                if state[j] == 1:
                    e += coupling[i, j]
    best = e
    for i in range(n):
        best_state[i] = state[i]
    for s in range(sweeps):
        t = temps[s]
        for k in range(n):
            acc = 0.0
            for j in range(n):
                acc += coupling[k, j] * state[j]
            delta = (1.0 - 2.0 * state[k]) * (qdiag[k] + acc)
            if delta <= 0.0 or uniforms[s, k] < math.exp(-delta / t):
                state[k] = 1 - state[k]
                e += delta
                if e < best:
                    best = e
                    for i in range(n):
                        best_state[i] = state[i]
    return e, best


try:
    from numba import njit

    HAVE_NUMBA = True
    _sweep_jit = njit(cache=True)(_sweep_impl)
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False
    _sweep_jit = None


def _env_wants_numba() -> bool:
    value = os.environ.get("PROBEOPT_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "no", "off")


def get_sweep_kernel(use_numba: Optional[bool] = None) -> Callable:
    """Pick the sweep backend. None means honor PROBEOPT_NUMBA."""
    if use_numba is None:
        use_numba = _env_wants_numba()
    if use_numba and HAVE_NUMBA:
        return _sweep_jit
    return _sweep_impl


def active_backend() -> str:
    return "numba" if (HAVE_NUMBA and _env_wants_numba()) else "python"
