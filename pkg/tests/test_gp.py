"""GP regression against a dense direct-solve oracle."""

from __future__ import annotations

import numpy as np
import pytest

from probeopt.bo.gp import GPHyper, gp_fit, gp_predict, kernel_matrix, sq_exp_kernel
from probeopt.errors import DimensionMismatch, NotPositiveDefinite
from support import dense_gp_predict


def _random_model(rng, n_max=12, d_max=3):
    n = int(rng.integers(2, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    hyper = GPHyper(
        signal_var=float(rng.uniform(0.5, 2.0)),
        length_scale=float(rng.uniform(0.1, 0.8)),
        noise_var=float(rng.uniform(1e-5, 1e-3)),
    )
    x = rng.uniform(-1.0, 1.0, size=(n, d))
    y = rng.normal(size=n)
    return x, y, hyper


def test_kernel_symmetry_and_diagonal():
    rng = np.random.default_rng(3)
    x = rng.uniform(size=(6, 2))
    hyper = GPHyper(signal_var=1.3, length_scale=0.4)
    k = kernel_matrix(x, x, hyper)
    assert np.allclose(k, k.T)
    assert np.allclose(np.diag(k), 1.3)
    assert np.isclose(sq_exp_kernel(x[0], x[1], hyper), k[0, 1])


def test_cholesky_factor_reconstructs_gram():
    rng = np.random.default_rng(4)
    for _ in range(20):
        x, y, hyper = _random_model(rng)
        model = gp_fit(x, y, hyper)
        gram = kernel_matrix(x, x, hyper) + hyper.noise_var * np.eye(len(y))
        assert np.allclose(model.chol @ model.chol.T, gram, atol=1e-8)


def test_predict_matches_dense_solve_oracle():
    rng = np.random.default_rng(5)
    for _ in range(40):
        x, y, hyper = _random_model(rng)
        model = gp_fit(x, y, hyper)
        queries = rng.uniform(-1.2, 1.2, size=(6, x.shape[1]))
        mean, var = gp_predict(model, queries)
        oracle_mean, oracle_var = dense_gp_predict(
            x, y, hyper.signal_var, hyper.length_scale, hyper.noise_var, queries
        )
        assert np.allclose(mean, oracle_mean, atol=1e-8)
        assert np.allclose(var, oracle_var, atol=1e-8)


def test_interpolation_at_training_points():
    rng = np.random.default_rng(6)
    x, y, hyper = _random_model(rng, n_max=8)
    model = gp_fit(x, y, hyper)
    sigma_n = np.sqrt(hyper.noise_var)
    for i in range(len(y)):
        mean, var = gp_predict(model, x[i])
        assert abs(mean - y[i]) <= 3 * sigma_n + 1e-6
        assert var >= 0.0


def test_prior_reversion_far_from_data():
    hyper = GPHyper(signal_var=1.7, length_scale=0.2, noise_var=1e-4)
    x = np.array([[0.0], [0.1], [0.2]])
    y = np.array([1.0, -1.0, 0.5])
    model = gp_fit(x, y, hyper)
    mean, var = gp_predict(model, np.array([50.0]))
    assert abs(mean) < 1e-6
    assert abs(var - hyper.signal_var) < 1e-6


def test_variance_clamped_nonnegative():
    hyper = GPHyper(noise_var=0.0)
    x = np.array([[0.3], [0.7]])
    model = gp_fit(x, np.array([0.1, 0.2]), hyper)
    _, var = gp_predict(model, x)
    assert np.all(var >= 0.0)


def test_not_positive_definite_on_duplicates_without_noise():
    hyper = GPHyper(noise_var=0.0)
    x = np.array([[0.5], [0.5]])
    with pytest.raises(NotPositiveDefinite):
        gp_fit(x, np.array([1.0, 1.0]), hyper)


def test_dimension_mismatches_raise():
    hyper = GPHyper()
    model = gp_fit(np.array([[0.0, 0.0]]), np.array([1.0]), hyper)
    with pytest.raises(DimensionMismatch):
        gp_predict(model, np.array([1.0, 2.0, 3.0]))
    with pytest.raises(DimensionMismatch):
        gp_fit(np.zeros((3, 2)), np.zeros(2), hyper)
    with pytest.raises(DimensionMismatch):
        gp_fit(np.zeros((0, 2)), np.zeros(0), hyper)
