"""Dense linear-algebra and tensor-index primitives for multipartite states.

Subsystems are numbered from 1 throughout the public API, matching the way
cuts such as ``1|23`` are usually written.  Matrices are plain complex
``numpy`` arrays; the only wrapper types are :class:`DensityMatrix` and
:class:`PureState`, which carry the subsystem dimensions next to the data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

TOL_HERM = 1e-8
TOL_TRACE = 1e-8
TOL_PSD = 1e-8


class ValidationError(ValueError):
    """A state failed one of its construction invariants."""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}")


class NumericalFailure(RuntimeError):
    """An SVD or eigenvalue routine failed or produced inconsistent output."""


def check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("dims must contain at least one subsystem")
    if any(d < 2 for d in dims):
        raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
    return dims


def num_bipartitions(n: int) -> int:
    """Number of distinct two-block splits of ``n`` subsystems."""
    return 2 ** (n - 1) - 1


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


class DensityMatrix:
    """A density matrix together with its subsystem dimensions.

    Hermiticity, unit trace and positivity are checked once, here, within the
    given tolerances.  Operations in this package preserve these invariants
    and build their outputs with ``validate=False``.

    Parameters
    ----------
    mat : array_like
        Square complex matrix of side ``prod(dims)``.
    dims : sequence of int
        Subsystem dimensions, each at least 2.
    """

    __slots__ = ("_mat", "_dims")

    def __init__(
        self,
        mat,
        dims: Sequence[int],
        *,
        tol_herm: float = TOL_HERM,
        tol_trace: float = TOL_TRACE,
        tol_psd: float = TOL_PSD,
        validate: bool = True,
    ):
        dims = check_dims(dims)
        mat = np.asarray(mat, dtype=complex)
        side = int(np.prod(dims))
        if mat.shape != (side, side):
            raise ValidationError(
                "shape", f"expected a {side}x{side} matrix for dims {dims}, got {mat.shape}"
            )
        if validate:
            herm_err = np.abs(mat - mat.conj().T).max()
            if herm_err > tol_herm:
                raise ValidationError("hermitian", f"max |rho - rho^dagger| = {herm_err:.3g}")
            tr = np.trace(mat)
            if abs(tr - 1) > tol_trace:
                raise ValidationError("trace", f"trace = {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
            lo = np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0]
            if lo < -tol_psd:
                raise ValidationError("positive", f"smallest eigenvalue {lo:.3g}")
        self._mat = _readonly(mat)
        self._dims = dims

    @property
    def mat(self) -> np.ndarray:
        return self._mat

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def n(self) -> int:
        return len(self._dims)

    @property
    def side(self) -> int:
        return self._mat.shape[0]

    def is_pure(self, tol: float = 1e-10) -> bool:
        return purity(self) > 1 - tol

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self._dims})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self._dims == other._dims and np.array_equal(self._mat, other._mat)

    __hash__ = None


class PureState:
    """Normalized amplitude vector in row-major index order."""

    __slots__ = ("_amp", "_dims")

    def __init__(self, amp, dims: Sequence[int], *, tol: float = 1e-10):
        dims = check_dims(dims)
        amp = np.asarray(amp, dtype=complex).reshape(-1)
        if amp.size != int(np.prod(dims)):
            raise ValueError(f"expected {int(np.prod(dims))} amplitudes for dims {dims}, got {amp.size}")
        nrm = np.vdot(amp, amp).real
        if abs(nrm - 1) > tol:
            raise ValueError(f"amplitudes not normalized: sum |a|^2 = {nrm:.12g}")
        self._amp = _readonly(amp)
        self._dims = dims

    @property
    def amp(self) -> np.ndarray:
        return self._amp

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def n(self) -> int:
        return len(self._dims)

    def tensor(self) -> np.ndarray:
        return self._amp.reshape(self._dims)

    def dm(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self._amp, self._amp.conj()), self._dims, validate=False)

    def __repr__(self) -> str:
        return f"PureState(dims={self._dims})"


@dataclass(frozen=True, order=True)
class Bipartition:
    """Split of subsystems ``1..n`` into two blocks; ``part1`` holds subsystem 1."""

    part1: tuple[int, ...]
    part2: tuple[int, ...]

    def __post_init__(self):
        p1, p2 = tuple(sorted(self.part1)), tuple(sorted(self.part2))
        if not p1 or not p2:
            raise ValueError("both blocks of a bipartition must be nonempty")
        if set(p1) & set(p2):
            raise ValueError(f"blocks overlap: {p1} and {p2}")
        n = len(p1) + len(p2)
        if set(p1) | set(p2) != set(range(1, n + 1)):
            raise ValueError(f"blocks {p1}, {p2} do not cover 1..{n}")
        if 1 not in p1:
            p1, p2 = p2, p1
        object.__setattr__(self, "part1", p1)
        object.__setattr__(self, "part2", p2)

    @classmethod
    def of(cls, block: Iterable[int], n: int) -> "Bipartition":
        block = set(block)
        return cls(tuple(block), tuple(k for k in range(1, n + 1) if k not in block))

    @property
    def n(self) -> int:
        return len(self.part1) + len(self.part2)

    def block_dims(self, dims: Sequence[int]) -> tuple[int, int]:
        d1 = int(np.prod([dims[k - 1] for k in self.part1]))
        d2 = int(np.prod([dims[k - 1] for k in self.part2]))
        return d1, d2

    def __str__(self) -> str:
        return "".join(map(str, self.part1)) + "|" + "".join(map(str, self.part2))


def all_bipartitions(n: int) -> Iterator[Bipartition]:
    """All ``2**(n-1) - 1`` cuts, ordered by size of the block holding 1."""
    rest = range(2, n + 1)
    for size in range(0, n - 1):
        for extra in itertools.combinations(rest, size):
            yield Bipartition.of((1,) + extra, n)


@dataclass(frozen=True)
class GptSpec:
    """Generalized partial transposition: which row and column indices move.

    ``row_transposed`` lists subsystems whose row index moves to the column
    group; ``col_transposed`` lists subsystems whose column index moves to
    the row group.
    """

    row_transposed: frozenset = frozenset()
    col_transposed: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "row_transposed", frozenset(self.row_transposed))
        object.__setattr__(self, "col_transposed", frozenset(self.col_transposed))

    def label(self) -> str:
        def block(s):
            return "".join(str(k) for k in sorted(s)) or "-"

        return f"c{block(self.col_transposed)},r{block(self.row_transposed)}"


# Tripartite classes with A, B, C = 1, 2, 3.
Y_CLASSES: dict[str, GptSpec] = {
    "y1": GptSpec({1}, {1}),
    "y2": GptSpec({2}, {2}),
    "y3": GptSpec({3}, {3}),
    "y4": GptSpec({2, 3}, {1}),
    "y5": GptSpec({3}, {1, 2}),
    "y6": GptSpec({2}, {1, 3}),
    "y7": GptSpec({2}, {1}),
    "y8": GptSpec({3}, {1}),
    "y9": GptSpec({3}, {2}),
}


def _check_subset(sub: Iterable[int], n: int) -> tuple[int, ...]:
    sub = tuple(sorted(set(int(k) for k in sub)))
    if any(k < 1 or k > n for k in sub):
        raise ValueError(f"subsystem indices must lie in 1..{n}, got {sub}")
    return sub


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the subsystems in ``keep`` (1-based)."""
    n = rho.n
    keep = _check_subset(keep, n)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if len(keep) == n:
        return rho
    dims = rho.dims
    drop = [k for k in range(1, n + 1) if k not in keep]
    t = rho.mat.reshape(dims + dims)
    kept_axes = [k - 1 for k in keep]
    # move kept row/col axes to the front and traced ones to the back
    order = kept_axes + [n + a for a in kept_axes] + [k - 1 for k in drop] + [n + k - 1 for k in drop]
    dk = int(np.prod([dims[k - 1] for k in keep]))
    dd = int(np.prod([dims[k - 1] for k in drop]))
    t = t.transpose(order).reshape(dk, dk, dd, dd)
    red = np.einsum("abcc->ab", t)
    return DensityMatrix(red, [dims[k - 1] for k in keep], validate=False)


def purity(rho: DensityMatrix) -> float:
    m = rho.mat
    return float(np.vdot(m, m).real)


def gpt(rho: DensityMatrix, spec: GptSpec) -> np.ndarray:
    """Regroup the row/column tensor indices of ``rho`` according to ``spec``.

    Row group: untouched row indices, then moved column indices.  Column
    group: untouched column indices, then moved row indices.  Each part is
    ordered by subsystem number.
    """
    n = rho.n
    rows_t = _check_subset(spec.row_transposed, n)
    cols_t = _check_subset(spec.col_transposed, n)
    dims = rho.dims
    row_axes = [k - 1 for k in range(1, n + 1) if k not in rows_t] + [n + k - 1 for k in cols_t]
    col_axes = [n + k - 1 for k in range(1, n + 1) if k not in cols_t] + [k - 1 for k in rows_t]
    full = dims + dims
    r = int(np.prod([full[a] for a in row_axes]))
    c = int(np.prod([full[a] for a in col_axes]))
    return rho.mat.reshape(full).transpose(row_axes + col_axes).reshape(r, c)


def partial_transpose(rho: DensityMatrix, block: Iterable[int]) -> np.ndarray:
    """Partial transpose on ``block``, kept in the original index order."""
    n = rho.n
    block = _check_subset(block, n)
    axes = list(range(2 * n))
    for k in block:
        axes[k - 1], axes[n + k - 1] = axes[n + k - 1], axes[k - 1]
    return rho.mat.reshape(rho.dims + rho.dims).transpose(axes).reshape(rho.side, rho.side)


def realignment(rho: DensityMatrix, cut: Bipartition) -> np.ndarray:
    """Realigned matrix ``R[(i,j),(k,l)] = rho[ik, jl]`` across ``cut``."""
    t = gpt(rho, GptSpec(cut.part2, cut.part1))
    # gpt gives columns ordered (j_B, i_B); swap to (i_B, j_B)
    d1, d2 = cut.block_dims(rho.dims)
    return t.reshape(d1 * d1, d2, d2).transpose(0, 2, 1).reshape(d1 * d1, d2 * d2)


def trace_norm(m: np.ndarray) -> float:
    try:
        s = np.linalg.svd(np.asarray(m), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return float(s.sum())


def general_eigenvalues(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"eigenvalues need a square matrix, got shape {m.shape}")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue iteration did not converge: {exc}") from exc


def so_generators(n: int) -> list[np.ndarray]:
    """Real antisymmetric generators ``|j><k| - |k><j|``, ``j < k``."""
    if n < 2:
        raise ValueError(f"so_generators needs n >= 2, got {n}")
    out = []
    for j, k in itertools.combinations(range(n), 2):
        g = np.zeros((n, n), dtype=complex)
        g[j, k] = 1
        g[k, j] = -1
        out.append(g)
    return out


def gell_mann_basis(d: int) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices, normalized to ``Tr(l_m l_n) = 2 delta_mn``.

    Order: symmetric off-diagonal, antisymmetric off-diagonal, then diagonal.
    For ``d = 2`` this gives ``sigma_x, sigma_y, sigma_z``.
    """
    if d < 2:
        raise ValueError(f"gell_mann_basis needs d >= 2, got {d}")
    sym, asym, diag = [], [], []
    for j, k in itertools.combinations(range(d), 2):
        s = np.zeros((d, d), dtype=complex)
        s[j, k] = s[k, j] = 1
        sym.append(s)
        a = np.zeros((d, d), dtype=complex)
        a[j, k] = -1j
        a[k, j] = 1j
        asym.append(a)
    for l in range(1, d):
        v = np.zeros(d)
        v[:l] = 1
        v[l] = -l
        diag.append(np.diag(v * np.sqrt(2 / (l * (l + 1)))).astype(complex))
    return sym + asym + diag


def permute_subsystems(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder subsystems so that new subsystem ``k`` is old subsystem ``perm[k-1]``."""
    n = rho.n
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    axes = [p - 1 for p in perm]
    dims = rho.dims
    t = rho.mat.reshape(dims + dims).transpose(axes + [n + a for a in axes])
    return DensityMatrix(t.reshape(rho.side, rho.side), [dims[a] for a in axes], validate=False)


def as_bipartite(rho: DensityMatrix, cut: Bipartition) -> tuple[np.ndarray, int, int]:
    """Matrix of ``rho`` with ``cut.part1`` moved to the front, plus block sizes."""
    perm = list(cut.part1) + list(cut.part2)
    d1, d2 = cut.block_dims(rho.dims)
    if perm == sorted(perm):
        return rho.mat, d1, d2
    return permute_subsystems(rho, perm).mat, d1, d2
