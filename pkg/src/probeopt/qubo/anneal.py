"""Simulated annealing over a QUBO with a geometric cooling schedule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .kernels import get_sweep_kernel
from .model import QuboMatrix


@dataclass(frozen=True)
class AnnealParams:
    sweeps: int = 200
    t_start: float = 2.0
    t_end: float = 0.05

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise ConfigError("need at least one sweep")
        if not self.t_start >= self.t_end > 0:
            raise ConfigError("temperatures must satisfy t_start >= t_end > 0")


@dataclass(frozen=True)
class AnnealResult:
    state: np.ndarray  # best configuration visited, int64 0/1
    energy: float  # its energy
    steps_taken: int  # flip attempts plus per-run setup overhead


def temperature_schedule(params: AnnealParams) -> np.ndarray:
    """Geometric ladder from t_start down to t_end, one rung per sweep."""
    if params.sweeps == 1:
        return np.array([params.t_start])
    ratio = params.t_end / params.t_start
    exponents = np.arange(params.sweeps) / (params.sweeps - 1)
    return params.t_start * ratio**exponents


def solve(
    qubo: QuboMatrix,
    params: AnnealParams,
    rng: np.random.Generator,
    use_numba: bool | None = None,
) -> AnnealResult:
    """Anneal from the all-zeros state; return the best state visited.

    All randomness (accept rolls, then the small setup-overhead draw that
    models per-run bookkeeping in the step count) comes from ``rng`` in a
    fixed order, so a given generator state fully determines the result.
    """
    n = qubo.n
    temps = temperature_schedule(params)
    uniforms = rng.random((params.sweeps, n))
    qdiag = np.ascontiguousarray(np.diag(qubo.q))
    coupling = qubo.q + qubo.q.T
    np.fill_diagonal(coupling, 0.0)
    state = np.zeros(n, dtype=np.int64)
    best_state = np.zeros(n, dtype=np.int64)
    kernel = get_sweep_kernel(use_numba)
    _, best_energy = kernel(qdiag, coupling, temps, uniforms, state, best_state)
    overhead = int(rng.integers(0, 2 * n + 1))
    return AnnealResult(
        state=best_state,
        energy=float(best_energy),
        steps_taken=params.sweeps * n + overhead,
    )
