"""State families, random samplers and pure-state concurrences."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from .tensor import (
    Bipartition,
    DensityMatrix,
    PureState,
    all_bipartitions,
    check_dims,
    num_bipartitions,
    partial_trace,
    purity,
)


def _basis_index(bits: Sequence[int], dims: Sequence[int]) -> int:
    return int(np.ravel_multi_index(tuple(bits), tuple(dims)))


def generalized_w(coeffs: Sequence[complex], tol: float = 1e-10) -> PureState:
    """Single-excitation qubit state ``a_1|10..0> + ... + a_N|0..01>``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.size
    if n < 2:
        raise ValueError("generalized_w needs at least two coefficients")
    nrm = float(np.sum(np.abs(coeffs) ** 2))
    if abs(nrm - 1) > tol:
        raise ValueError(f"coefficients not normalized: sum |a|^2 = {nrm:.12g}")
    dims = (2,) * n
    amp = np.zeros(2**n, dtype=complex)
    for k, a in enumerate(coeffs):
        bits = [0] * n
        bits[k] = 1
        amp[_basis_index(bits, dims)] = a
    return PureState(amp, dims)


def w_state(n: int) -> PureState:
    if n < 2:
        raise ValueError(f"w_state needs n >= 2, got {n}")
    return generalized_w(np.full(n, 1 / np.sqrt(n)))


def generalized_ghz(n: int, theta: float) -> PureState:
    """``cos(theta)|0...0> + sin(theta)|1...1>`` on ``n`` qubits."""
    if n < 2:
        raise ValueError(f"generalized_ghz needs n >= 2, got {n}")
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = np.cos(theta)
    amp[-1] = np.sin(theta)
    return PureState(amp, (2,) * n)


def ghz_state(n: int) -> PureState:
    return generalized_ghz(n, np.pi / 4)


def dct_basis() -> dict[tuple[int, str], np.ndarray]:
    """Three-qubit GHZ basis ``(|j>_12|0>_3 +- |3-j>_12|1>_3)/sqrt(2)``, j = 0..3."""
    out = {}
    for j in range(4):
        lo = np.zeros(8)
        hi = np.zeros(8)
        lo[2 * j] = 1  # |j>_12 |0>_3
        hi[2 * (3 - j) + 1] = 1  # |3-j>_12 |1>_3
        out[(j, "+")] = (lo + hi) / np.sqrt(2)
        out[(j, "-")] = (lo - hi) / np.sqrt(2)
    return out


def dct_state(l0p: float, l0m: float, l1: float, l2: float, l3: float, tol: float = 1e-10) -> DensityMatrix:
    """Three-qubit state diagonal in the GHZ basis.

    ``l0p`` and ``l0m`` weight the two GHZ states with ``j = 0``; each of
    ``l1, l2, l3`` weights both ``+`` and ``-`` states for that ``j``.
    """
    weights = np.array([l0p, l0m, l1, l2, l3], dtype=float)
    if np.any(weights < 0):
        raise ValueError(f"weights must be nonnegative, got {weights.tolist()}")
    total = l0p + l0m + 2 * (l1 + l2 + l3)
    if abs(total - 1) > tol:
        raise ValueError(f"weights must satisfy l0p + l0m + 2(l1+l2+l3) = 1, got {total:.12g}")
    basis = dct_basis()
    mat = l0p * np.outer(basis[(0, "+")], basis[(0, "+")]) + l0m * np.outer(basis[(0, "-")], basis[(0, "-")])
    for j, lj in zip((1, 2, 3), (l1, l2, l3)):
        for s in "+-":
            mat = mat + lj * np.outer(basis[(j, s)], basis[(j, s)])
    return DensityMatrix(mat.astype(complex), (2, 2, 2))


def mix_with_noise(rho: DensityMatrix, x: float) -> DensityMatrix:
    """``(1 - x) I/D + x rho``."""
    if not 0 <= x <= 1:
        raise ValueError(f"noise parameter must lie in [0, 1], got {x}")
    d = rho.side
    return DensityMatrix((1 - x) * np.eye(d) / d + x * rho.mat, rho.dims, validate=False)


def w_noise(n: int, p: float) -> DensityMatrix:
    return mix_with_noise(w_state(n).dm(), p)


def ghz_noise(n: int, p: float) -> DensityMatrix:
    return mix_with_noise(ghz_state(n).dm(), p)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pure(dims: Sequence[int], seed=None) -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    dims = check_dims(dims)
    rng = _rng(seed)
    d = int(np.prod(dims))
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z), dims)


def random_mixed(dims: Sequence[int], rank: int, seed=None) -> DensityMatrix:
    """Mixed state from tracing a ``rank``-dimensional environment off a Haar pure state."""
    dims = check_dims(dims)
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    rng = _rng(seed)
    d = int(np.prod(dims))
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    g /= np.linalg.norm(g)
    mat = g @ g.conj().T
    mat = (mat + mat.conj().T) / 2
    return DensityMatrix(mat, dims, validate=False)


def random_separable(dims: Sequence[int], terms: int, seed=None) -> DensityMatrix:
    """Convex mixture of ``terms`` random fully-product pure projectors."""
    dims = check_dims(dims)
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    d = int(np.prod(dims))
    mat = np.zeros((d, d), dtype=complex)
    for w in weights:
        v = np.ones(1, dtype=complex)
        for dk in dims:
            z = rng.standard_normal(dk) + 1j * rng.standard_normal(dk)
            v = np.kron(v, z / np.linalg.norm(z))
        mat += w * np.outer(v, v.conj())
    return DensityMatrix((mat + mat.conj().T) / 2, dims, validate=False)


def random_local_unitary(dims: Sequence[int], seed=None) -> np.ndarray:
    """Tensor product of independent Haar unitaries, one per subsystem."""
    rng = _rng(seed)
    u = np.ones((1, 1), dtype=complex)
    for dk in check_dims(dims):
        u = np.kron(u, unitary_group.rvs(dk, random_state=rng))
    return u


def apply_unitary(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    mat = u @ rho.mat @ u.conj().T
    return DensityMatrix((mat + mat.conj().T) / 2, rho.dims, validate=False)


def _proper_marginal_purities(rho: DensityMatrix) -> list[float]:
    """Purities of all ``2**N - 2`` reduced states on proper nonempty subsets."""
    n = rho.n
    out = []
    for size in range(1, n):
        for keep in itertools.combinations(range(1, n + 1), size):
            out.append(purity(partial_trace(rho, keep)))
    return out


def marginal_purity_sum(rho: DensityMatrix) -> float:
    return float(sum(_proper_marginal_purities(rho)))


def pure_concurrence(psi: PureState) -> float:
    """Multipartite concurrence of a pure state from its marginal purities."""
    n = psi.n
    rad = (2**n - 2) - marginal_purity_sum(psi.dm())
    return 2 ** (1 - n / 2) * np.sqrt(max(rad, 0.0))


def _minor_square_sum(a: np.ndarray) -> float:
    # sum over all ordered (r, r', c, c') of |a_rc a_r'c' - a_rc' a_r'c|^2
    #   = 2 (||a||_F^4 - ||a a^dagger||_F^2)
    g = a @ a.conj().T
    fro2 = np.trace(g).real
    return float(2 * (fro2**2 - np.vdot(g, g).real))


def pure_concurrence_cd(psi: PureState) -> float:
    """Concurrence built from 2x2 minors of the amplitude tensor, summed over cuts.

    Requires all subsystems to share one dimension ``d``.
    """
    dims = psi.dims
    d = dims[0]
    if any(dk != d for dk in dims):
        raise ValueError(f"pure_concurrence_cd needs equal subsystem dimensions, got {dims}")
    n = psi.n
    m = num_bipartitions(n)
    t = psi.tensor()
    total = 0.0
    for cut in all_bipartitions(n):
        axes = [k - 1 for k in cut.part1 + cut.part2]
        d1, d2 = cut.block_dims(dims)
        total += _minor_square_sum(t.transpose(axes).reshape(d1, d2))
    return float(np.sqrt(max(d / (2 * m * (d - 1)) * total, 0.0)))


def bipartite_pure_concurrence(psi: PureState, cut: Bipartition) -> float:
    """``sqrt(2 (1 - Tr rho_A^2))`` with ``A = cut.part1``.

    Evaluated from the Schmidt coefficients as ``2 sqrt(sum_{i<j} s_i^2 s_j^2)``,
    which equals the purity form but stays at round-off level (rather than
    its square root) on product states.
    """
    if cut.n != psi.n:
        raise ValueError(f"cut {cut} does not match a {psi.n}-partite state")
    d1, d2 = cut.block_dims(psi.dims)
    order = [k - 1 for k in cut.part1 + cut.part2]
    amp = psi.tensor().transpose(order).reshape(d1, d2)
    w = np.linalg.svd(amp, compute_uv=False) ** 2
    cross = np.triu(np.outer(w, w), k=1).sum()
    return float(2 * np.sqrt(cross))
