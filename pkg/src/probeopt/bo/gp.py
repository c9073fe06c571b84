"""Gaussian-process regression with a squared-exponential kernel.

Fitting factors the Gram matrix once (Cholesky); prediction reuses the
factor through triangular solves. No matrix is ever explicitly inverted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from ..errors import DimensionMismatch, NotPositiveDefinite


@dataclass(frozen=True)
class GPHyper:
    signal_var: float = 1.0
    length_scale: float = 0.2
    noise_var: float = 1e-4

    def __post_init__(self) -> None:
        if self.signal_var <= 0 or self.length_scale <= 0 or self.noise_var < 0:
            raise ValueError("hyperparameters must be positive (noise may be zero)")


def sq_exp_kernel(x: np.ndarray, x2: np.ndarray, hyper: GPHyper) -> float:
    """k(x, x') = signal_var * exp(-|x - x'|^2 / (2 * length_scale^2))."""
    diff = np.asarray(x, dtype=float) - np.asarray(x2, dtype=float)
    return float(hyper.signal_var * np.exp(-diff.dot(diff) / (2.0 * hyper.length_scale**2)))


def kernel_matrix(xa: np.ndarray, xb: np.ndarray, hyper: GPHyper) -> np.ndarray:
    """Pairwise kernel between rows of two (n, d) point sets."""
    xa = np.atleast_2d(np.asarray(xa, dtype=float))
    xb = np.atleast_2d(np.asarray(xb, dtype=float))
    if xa.shape[1] != xb.shape[1]:
        raise DimensionMismatch(f"points have dims {xa.shape[1]} and {xb.shape[1]}")
    sq = (
        np.sum(xa**2, axis=1)[:, None]
        + np.sum(xb**2, axis=1)[None, :]
        - 2.0 * xa @ xb.T
    )
    np.maximum(sq, 0.0, out=sq)
    return hyper.signal_var * np.exp(-sq / (2.0 * hyper.length_scale**2))


@dataclass(frozen=True)
class GPModel:
    hyper: GPHyper
    train_x: np.ndarray  # (n, d)
    train_y: np.ndarray  # (n,)
    chol: np.ndarray  # lower-triangular L with L L^T = K + noise_var * I
    alpha: np.ndarray  # (K + noise_var * I)^-1 y, via the factor

    @property
    def n(self) -> int:
        return self.train_x.shape[0]


def gp_fit(train_x: np.ndarray, train_y: np.ndarray, hyper: GPHyper) -> GPModel:
    x = np.atleast_2d(np.asarray(train_x, dtype=float))
    y = np.asarray(train_y, dtype=float).ravel()
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"{x.shape[0]} points but {y.shape[0]} targets")
    if x.shape[0] == 0:
        raise DimensionMismatch("cannot fit to zero observations")
    gram = kernel_matrix(x, x, hyper)
    gram[np.diag_indices_from(gram)] += hyper.noise_var
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    alpha = cho_solve((chol, True), y, check_finite=False)
    return GPModel(hyper=hyper, train_x=x, train_y=y, chol=chol, alpha=alpha)


def gp_predict(model: GPModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and variance of the latent function at query points.

    Accepts one point (d,) or a batch (m, d); returns matching-shape mean
    and variance arrays (scalars for a single point). Variance is clamped
    at zero: the subtraction can go a hair negative in floating point.
    """
    query = np.asarray(x, dtype=float)
    single = query.ndim == 1
    query = np.atleast_2d(query)
    if query.shape[1] != model.train_x.shape[1]:
        raise DimensionMismatch(
            f"query dim {query.shape[1]} != train dim {model.train_x.shape[1]}"
        )
    kstar = kernel_matrix(model.train_x, query, model.hyper)  # (n, m)
    mean = kstar.T @ model.alpha
    v = solve_triangular(model.chol, kstar, lower=True, check_finite=False)
    var = model.hyper.signal_var - np.sum(v**2, axis=0)
    np.maximum(var, 0.0, out=var)
    if single:
        return float(mean[0]), float(var[0])
    return mean, var
