"""Monte Carlo sampling of correlated complex Wishart eigenvalues.

Draws M = (1/N) X diag(lambda) X* with X an N x n matrix of standard
complex Gaussians (real and imaginary parts independent with variance
1/2), the population eigenvalues listed with multiplicity.  Used to
cross-validate the analytic densities, edge laws, and gap-probability
predictions.

Draws are batched for speed but consumed in replica-major order, so
results depend only on the seed and replica index — never on the batch
size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SimulationRun",
    "empirical_cusp_counts",
    "empirical_smallest_cdf",
    "sample_eigenvalues",
    "sample_smallest",
]


@dataclass(frozen=True, eq=False)
class SimulationRun:
    """Eigenvalue samples of (1/N) X diag(lambda) X* with their provenance."""

    lambdas: tuple[float, ...]
    N: int
    n: int
    reps: int
    seed: int | None
    eigenvalues: np.ndarray  # shape (reps, N), each row ascending


def _eigenvalue_batches(lam: np.ndarray, N: int, reps: int, seed, batch_size: int):
    n = len(lam)
    rng = np.random.default_rng(seed)
    half_lam = np.sqrt(lam / 2.0)
    for start in range(0, reps, batch_size):
        b = min(batch_size, reps - start)
        raw = rng.standard_normal((b, N, n, 2))
        Y = (raw[..., 0] + 1j * raw[..., 1]) * half_lam
        M = Y @ Y.conj().transpose(0, 2, 1) / N
        yield np.linalg.eigvalsh(M)


def _check_args(lambdas, N: int, reps: int) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or len(lam) == 0:
        raise ValueError("lambdas must be a non-empty 1-d sequence")
    if np.any(lam <= 0):
        raise ValueError("population eigenvalues must be positive")
    if N < 1 or reps < 1:
        raise ValueError("N and reps must be positive")
    return lam


def sample_eigenvalues(
    lambdas, N: int, reps: int = 1, seed=None, batch_size: int = 256
) -> SimulationRun:
    """Sample full eigenvalue spectra; rows of the result are ascending.

    ``lambdas`` lists the n population eigenvalues with multiplicity.
    When n < N, each spectrum contains N - n exact zeros.
    """
    lam = _check_args(lambdas, N, reps)
    out = np.empty((reps, N))
    row = 0
    for eigs in _eigenvalue_batches(lam, N, reps, seed, batch_size):
        out[row : row + len(eigs)] = eigs
        row += len(eigs)
    return SimulationRun(
        lambdas=tuple(lam.tolist()),
        N=N,
        n=len(lam),
        reps=reps,
        seed=seed,
        eigenvalues=out,
    )


def sample_smallest(
    lambdas, N: int, reps: int = 1, seed=None, batch_size: int = 256
) -> np.ndarray:
    """Sample only the smallest nonzero eigenvalue of each replica.

    When n < N the spectrum has N - n structural zeros, so the smallest
    nonzero eigenvalue is the (N - n)-th ascending one.
    """
    lam = _check_args(lambdas, N, reps)
    idx = max(0, N - len(lam))
    out = np.empty(reps)
    row = 0
    for eigs in _eigenvalue_batches(lam, N, reps, seed, batch_size):
        out[row : row + len(eigs)] = eigs[:, idx]
        row += len(eigs)
    return out


def empirical_smallest_cdf(values: np.ndarray, grid) -> np.ndarray:
    """Fraction of sampled values at or below each grid point."""
    v = np.sort(np.asarray(values, dtype=float))
    return np.searchsorted(v, np.asarray(grid, dtype=float), side="right") / len(v)


def empirical_cusp_counts(
    run: SimulationRun, center: float, halfwidth: float, bins: int = 20
):
    """Per-replica mean histogram of eigenvalues in a window around a point.

    Returns (edges, mean_counts): ``edges`` has bins + 1 entries covering
    [center - halfwidth, center + halfwidth], ``mean_counts`` the average
    number of eigenvalues per replica in each bin.
    """
    if halfwidth <= 0 or bins < 1:
        raise ValueError("halfwidth must be positive and bins >= 1")
    edges = np.linspace(center - halfwidth, center + halfwidth, bins + 1)
    counts = np.zeros(bins)
    for rowvals in run.eigenvalues:
        counts += np.histogram(rowvals, bins=edges)[0]
    return edges, counts / run.reps
