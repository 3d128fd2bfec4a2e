"""Slow, independent reference computations used to check the bounds.

Nothing here reuses the index machinery of :mod:`concbounds.tensor`; the
point is to have a second code path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .states import pure_concurrence
from .tensor import DensityMatrix, PureState

_SY = np.array([[0, -1j], [1j, 0]])
_SYSY = np.kron(_SY, _SY)


def wootters(rho: DensityMatrix) -> float:
    """Exact two-qubit concurrence.

    The lambdas are the singular values of ``tau_ij = v_i^T (sy x sy) v_j``
    for subnormalized eigenvectors ``v_i`` of rho.  This equals the usual
    square roots of the eigenvalues of ``rho rho~`` but avoids taking square
    roots of round-off on rank-deficient input.
    """
    if tuple(rho.dims) != (2, 2):
        raise ValueError(f"wootters needs a two-qubit state, got dims {rho.dims}")
    w, v = np.linalg.eigh(rho.mat)
    vecs = v * np.sqrt(np.clip(w, 0, None))
    lam = np.linalg.svd(vecs.T @ _SYSY @ vecs, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def minor_sum_concurrence(psi: PureState) -> float:
    """Concurrence from an explicit loop over cuts and 2x2 amplitude minors."""
    dims = psi.dims
    d = dims[0]
    if any(dk != d for dk in dims):
        raise ValueError(f"minor_sum_concurrence needs equal dims, got {dims}")
    n = len(dims)
    amp = psi.amp
    index = {}
    for flat, multi in enumerate(itertools.product(range(d), repeat=n)):
        index[multi] = flat

    cuts = []
    for size in range(1, n):
        for block in itertools.combinations(range(n), size):
            if 0 in block:
                cuts.append((block, tuple(k for k in range(n) if k not in block)))

    def amplitude(block, rest, alpha, beta):
        multi = [0] * n
        for k, v in zip(block, alpha):
            multi[k] = v
        for k, v in zip(rest, beta):
            multi[k] = v
        return amp[index[tuple(multi)]]

    total = 0.0
    for block, rest in cuts:
        rows = list(itertools.product(range(d), repeat=len(block)))
        cols = list(itertools.product(range(d), repeat=len(rest)))
        for a, a2 in itertools.product(rows, repeat=2):
            for b, b2 in itertools.product(cols, repeat=2):
                minor = amplitude(block, rest, a, b) * amplitude(block, rest, a2, b2) - amplitude(
                    block, rest, a, b2
                ) * amplitude(block, rest, a2, b)
                total += abs(minor) ** 2
    m = 2 ** (n - 1) - 1
    return float(np.sqrt(d / (2 * m * (d - 1)) * total))


@dataclass(frozen=True)
class EnsembleEstimate:
    value: float
    num_trials: int
    seed: object
    history: tuple = ()


def _haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def convex_roof_estimate(rho: DensityMatrix, trials: int, seed=None, tol: float = 1e-12) -> EnsembleEstimate:
    """Upper estimate of the convex-roof concurrence by random decompositions.

    Every decomposition of ``rho`` into ``n`` pure states has the form
    ``psi_k = sum_i U[k, i] sqrt(lam_i) e_i`` for an ``n x r`` isometry
    ``U``.  The eigen-decomposition seeds the running minimum, then
    ``trials`` Haar isometries with ``r <= n <= 2r`` are tried.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    lam, vecs = np.linalg.eigh(rho.mat)
    keep = lam > tol
    lam, vecs = lam[keep], vecs[:, keep]
    r = lam.size
    weighted = vecs * np.sqrt(lam)

    def average(states: np.ndarray) -> float:
        probs = np.sum(np.abs(states) ** 2, axis=0)
        total = 0.0
        for k, p in enumerate(probs):
            if p > tol:
                total += p * pure_concurrence(PureState(states[:, k] / np.sqrt(p), rho.dims, tol=1e-8))
        return total

    best = average(weighted)
    history = []
    for _ in range(trials):
        n = int(rng.integers(r, 2 * r + 1))
        u = _haar_isometry(n, r, rng)
        best = min(best, average(weighted @ u.T))
        history.append(best)
    return EnsembleEstimate(float(best), trials, seed, tuple(history))
