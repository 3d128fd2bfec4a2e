"""Lower and upper bounds on the multipartite concurrence of a density matrix.

Every bound has a public function returning a clamped float, plus an
internal evaluator returning a :class:`BoundValue` that also keeps the
unclamped value and the cut or transposition that achieved it.  Threshold
scans bisect on the unclamped value, so it is defined to change sign exactly
where the clamped bound leaves zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .states import bipartite_pure_concurrence, marginal_purity_sum, pure_concurrence
from .tensor import (
    Y_CLASSES,
    Bipartition,
    DensityMatrix,
    GptSpec,
    NumericalFailure,
    PureState,
    all_bipartitions,
    as_bipartite,
    gell_mann_basis,
    general_eigenvalues,
    gpt,
    num_bipartitions,
    partial_transpose,
    purity,
    realignment,
    so_generators,
    trace_norm,
)

LOWER_IDS = ("purity_lower", "tau_n", "gpt_tripartite", "b1", "b2", "b3", "thm3", "thm6", "thm7_wclass")
UPPER_IDS = ("purity_upper", "decomp_upper")
ALL_IDS = LOWER_IDS + UPPER_IDS


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical cut-offs shared by the bound evaluators.

    In the tau_N evaluation ``eig_zero_tol`` and ``imag_tol`` are relative
    to the larger of ``||rho rho~||_F`` and ``||rho||_F^2``; the second term
    keeps round-off on an all-but-vanishing product from counting as signal.  ``clamp_tol`` is the absolute level at
    or below which a bound counts as zero.
    """

    eig_zero_tol: float = 1e-10
    imag_tol: float = 1e-8
    clamp_tol: float = 1e-12
    pure_tol: float = 1e-10

    def __post_init__(self):
        for name in ("eig_zero_tol", "imag_tol", "clamp_tol", "pure_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOL = ToleranceConfig()


@dataclass
class BoundValue:
    value: float
    raw: float
    kind: str = "lower"
    witness: object = None
    clamped: bool = False
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, GptSpec):
            w = w.label()
        elif w is not None:
            w = str(w)
        out = {"value": self.value, "raw": self.raw, "kind": self.kind, "witness": w, "clamped": self.clamped}
        out.update(self.notes)
        return out


def _lower(raw: float, witness=None, cfg: ToleranceConfig = DEFAULT_TOL, **notes) -> BoundValue:
    clamped = raw <= cfg.clamp_tol
    return BoundValue(0.0 if clamped else float(raw), float(raw), "lower", witness, clamped, notes)


def _signed_sqrt(x: float) -> float:
    return math.copysign(math.sqrt(abs(x)), x)


# ---------------------------------------------------------------- purity based


def _purity_lower(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    n = rho.n
    rad = (4 - 2 ** (3 - n)) * purity(rho) - 2 ** (2 - n) * marginal_purity_sum(rho)
    return _lower(_signed_sqrt(rad), cfg=cfg)


def purity_lower(rho: DensityMatrix) -> float:
    return _purity_lower(rho).value


def _purity_upper(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    n = rho.n
    rad = 2 ** (2 - n) * ((2**n - 2) - marginal_purity_sum(rho))
    v = math.sqrt(max(rad, 0.0))
    return BoundValue(v, v, "upper")


def purity_upper(rho: DensityMatrix) -> float:
    return _purity_upper(rho).value


def _decomposition_upper(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    # any orthonormal eigenbasis is a valid decomposition; degenerate
    # eigenspaces make the value basis dependent
    lam, vecs = np.linalg.eigh(rho.mat)
    total = 0.0
    for l, v in zip(lam, vecs.T):
        if l > cfg.eig_zero_tol:
            total += l * pure_concurrence(PureState(v / np.linalg.norm(v), rho.dims))
    return BoundValue(float(total), float(total), "upper")


def decomposition_upper(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    return _decomposition_upper(rho, cfg).value


# ---------------------------------------------------------------------- tau_N


def tau_prefactor(d: int, n: int) -> float:
    return d / (2 * num_bipartitions(n) * (d - 1))


@dataclass
class PairSpectrum:
    cut: Bipartition
    pair: tuple[int, int]
    eigenvalues: np.ndarray
    scale: float
    floor: float = 0.0


def generator_pair_spectra(rho: DensityMatrix) -> Iterator[PairSpectrum]:
    """Eigenvalues of ``rho rho~`` for every cut and every generator pair.

    ``rho~ = S rho* S`` with ``S = L_a (x) L_b``, ``L`` running over the
    antisymmetric generators on each side of the cut.
    """
    for cut in all_bipartitions(rho.n):
        mat, d1, d2 = as_bipartite(rho, cut)
        conj = mat.conj()
        # round-off in the eigenvalues is of order eps * ||rho||_F^2
        floor = float(np.linalg.norm(mat) ** 2)
        gen2 = np.array(so_generators(d2)).real
        for a, la in enumerate(so_generators(d1)):
            s = np.einsum("ij,bkl->bikjl", la.real, gen2).reshape(len(gen2), d1 * d2, d1 * d2)
            prods = mat @ s @ conj @ s
            for b, prod in enumerate(prods):
                yield PairSpectrum(cut, (a, b), general_eigenvalues(prod), float(np.linalg.norm(prod)), floor)


def pair_lambdas(spec: PairSpectrum, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Four decreasing square roots of the nonzero eigenvalues, zero padded."""
    if spec.scale == 0.0:
        return np.zeros(4)
    ev = spec.eigenvalues
    scale = max(spec.scale, spec.floor)
    worst_imag = np.abs(ev.imag).max()
    if worst_imag >= cfg.imag_tol * scale:
        raise NumericalFailure(
            f"rho rho~ on cut {spec.cut}, pair {spec.pair}: imaginary part {worst_imag:.3g} "
            f"exceeds {cfg.imag_tol:g} x scale {scale:.3g}"
        )
    re = np.clip(ev.real, 0.0, None)
    re = np.sort(re[re > cfg.eig_zero_tol * scale])[::-1][:4]
    lam = np.zeros(4)
    lam[: re.size] = np.sqrt(re)
    return lam


def _tau_n(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    d = rho.dims[0]
    if any(dk != d for dk in rho.dims):
        raise ValueError(f"tau_n needs equal subsystem dimensions, got {rho.dims}")
    if rho.n < 2:
        raise ValueError("tau_n needs at least two subsystems")
    total = 0.0
    best_raw, best_cut = -math.inf, None
    for spec in generator_pair_spectra(rho):
        lam = pair_lambdas(spec, cfg)
        c = lam[0] - lam[1] - lam[2] - lam[3]
        if c > best_raw:
            best_raw, best_cut = c, spec.cut
        if c > 0:
            total += c * c
    tau = tau_prefactor(d, rho.n) * total
    value = math.sqrt(tau)
    raw = value if best_raw > cfg.clamp_tol else float(best_raw)
    return _lower(raw, best_cut, cfg, tau=tau)


def tau_n(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Square root of the generator-pair lower bound on the squared concurrence."""
    return _tau_n(rho, cfg).value


# ------------------------------------------------------- generalized transpose


def gpt_norms(rho: DensityMatrix) -> dict[str, float]:
    """Trace norms of the nine tripartite index regroupings."""
    if rho.n != 3:
        raise ValueError(f"tripartite classes need N = 3, got N = {rho.n}")
    return {name: trace_norm(gpt(rho, spec)) for name, spec in Y_CLASSES.items()}


def _gpt_tripartite(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    if rho.n != 3:
        raise ValueError(f"gpt_tripartite_bound needs N = 3, got N = {rho.n}")
    m, n, p = rho.dims
    if m > min(n, p):
        raise ValueError(f"gpt_tripartite_bound needs dims (m, n, p) with m <= n, p; got {rho.dims}")
    q, r = min(n, m * p), min(p, m * n)
    norms = gpt_norms(rho)
    terms = []
    for size, group in ((m, ("y1", "y4")), (q, ("y2", "y6")), (r, ("y3", "y5"))):
        y = max(group, key=lambda k: norms[k])
        terms.append((math.sqrt(1 / (size * (size - 1))) * (norms[y] - 1), Y_CLASSES[y]))
    raw, witness = max(terms, key=lambda t: t[0])
    return _lower(raw, witness, cfg)


def gpt_tripartite_bound(rho: DensityMatrix) -> float:
    return _gpt_tripartite(rho).value


# ------------------------------------------------------------ bipartite cuts


def _check_cut(rho: DensityMatrix, cut: Bipartition):
    if cut.n != rho.n:
        raise ValueError(f"cut {cut} does not match a {rho.n}-partite state")


def _b1_raw(rho: DensityMatrix, cut: Bipartition) -> float:
    _check_cut(rho, cut)
    d1, d2 = cut.block_dims(rho.dims)
    m = min(d1, d2)
    norm = max(trace_norm(partial_transpose(rho, cut.part1)), trace_norm(realignment(rho, cut)))
    return math.sqrt(2 / (m * (m - 1))) * (norm - 1)


def _local_expectations(mat, d1, d2, ops1, ops2):
    t = mat.reshape(d1, d2, d1, d2)
    joint = np.einsum("iajb,mji,nba->mn", t, ops1, ops2).real
    rho_a = np.einsum("iaja->ij", t)
    rho_b = np.einsum("iaib->ab", t)
    ea = np.einsum("ij,mji->m", rho_a, ops1).real
    eb = np.einsum("ab,nba->n", rho_b, ops2).real
    return joint, ea, eb, rho_a, rho_b


def _b2_raw(rho: DensityMatrix, cut: Bipartition) -> float:
    _check_cut(rho, cut)
    mat, d1, d2 = as_bipartite(rho, cut)
    m = min(d1, d2)
    # orthonormal local observables: Gell-Mann / sqrt(2)
    ops1 = np.array(gell_mann_basis(d1)) / math.sqrt(2)
    ops2 = np.array(gell_mann_basis(d2)) / math.sqrt(2)
    joint, ea, eb, rho_a, rho_b = _local_expectations(mat, d1, d2, ops1, ops2)
    cov = joint - np.outer(ea, eb)
    lin_a = 1 - float(np.vdot(rho_a, rho_a).real)
    lin_b = 1 - float(np.vdot(rho_b, rho_b).real)
    return (2 * trace_norm(cov) - lin_a - lin_b) / math.sqrt(2 * m * (m - 1))


def _b3_raw(rho: DensityMatrix, cut: Bipartition) -> float:
    _check_cut(rho, cut)
    mat, d1, d2 = as_bipartite(rho, cut)
    m, nx = min(d1, d2), max(d1, d2)
    ops1 = np.array(gell_mann_basis(d1))
    ops2 = np.array(gell_mann_basis(d2))
    joint = _local_expectations(mat, d1, d2, ops1, ops2)[0]
    corr = (d1 * d2 / 4) * joint
    offset = math.sqrt(m * nx * (m - 1) * (nx - 1)) / 2
    return math.sqrt(8 / (m**3 * nx**2 * (m - 1))) * (trace_norm(corr) - offset)


_B_RAW: dict[str, Callable[[DensityMatrix, Bipartition], float]] = {"b1": _b1_raw, "b2": _b2_raw, "b3": _b3_raw}


def b1(rho: DensityMatrix, cut: Bipartition) -> float:
    """Partial-transpose / realignment lower bound on the concurrence across ``cut``."""
    return max(0.0, _b1_raw(rho, cut))


def b2(rho: DensityMatrix, cut: Bipartition) -> float:
    """Covariance-matrix lower bound on the concurrence across ``cut``."""
    return max(0.0, _b2_raw(rho, cut))


def b3(rho: DensityMatrix, cut: Bipartition) -> float:
    """Correlation-tensor lower bound on the concurrence across ``cut``."""
    return max(0.0, _b3_raw(rho, cut))


def bipartite_estimate(rho: DensityMatrix, cut: Bipartition, exact_for_pure: bool = False,
                       cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[float, str]:
    """Best available (unclamped) lower estimate of the concurrence across ``cut``.

    With ``exact_for_pure`` and a pure ``rho`` the exact value
    ``sqrt(2 (1 - Tr rho_A^2))`` is returned instead.
    """
    if exact_for_pure and rho.is_pure(cfg.pure_tol):
        v = np.linalg.eigh(rho.mat)[1][:, -1]
        return bipartite_pure_concurrence(PureState(v, rho.dims), cut), "exact"
    return max((f(rho, cut), name) for name, f in _B_RAW.items())


def theorem3_coefficient(n: int) -> float:
    return 2 ** ((3 - n) / 2)


def theorem6_coefficient(n: int, m: int) -> float:
    return 2 ** ((1 - n) / 2) * math.sqrt(2 ** (n - m) + 2**m - 2)


def _require_multipartite(rho: DensityMatrix, name: str):
    if rho.n < 3:
        raise ValueError(f"{name} needs N >= 3, got N = {rho.n}")


def _best_b(rho: DensityMatrix, which: str, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    """One of B1/B2/B3 maximized over cuts, scaled to bound the N-partite concurrence."""
    coef = theorem3_coefficient(rho.n) if rho.n >= 3 else 1.0
    raw, cut = max((_B_RAW[which](rho, c), c) for c in all_bipartitions(rho.n))
    return _lower(coef * raw, cut, cfg)


def _theorem3(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    _require_multipartite(rho, "theorem3_bound")
    best = max((bipartite_estimate(rho, c, cfg=cfg), c) for c in all_bipartitions(rho.n))
    (raw, source), cut = best
    return _lower(theorem3_coefficient(rho.n) * raw, cut, cfg, source=source)


def theorem3_bound(rho: DensityMatrix) -> float:
    return _theorem3(rho).value


def _theorem6(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    _require_multipartite(rho, "theorem6_bound")
    n = rho.n
    best = None
    for cut in all_bipartitions(n):
        est, source = bipartite_estimate(rho, cut, exact_for_pure=True, cfg=cfg)
        val = theorem6_coefficient(n, len(cut.part1)) * est
        if best is None or val > best[0]:
            best = (val, cut, source)
    raw, cut, source = best
    return _lower(raw, cut, cfg, source=source)


def theorem6_bound(rho: DensityMatrix) -> float:
    return _theorem6(rho).value


def _theorem7(rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    if any(dk != 2 for dk in rho.dims):
        raise ValueError(f"theorem7_wclass_bound needs qubits, got dims {rho.dims}")
    n = rho.n
    if n < 2:
        raise ValueError("theorem7_wclass_bound needs at least two qubits")
    terms = []
    for cut in all_bipartitions(n):
        terms.append((trace_norm(partial_transpose(rho, cut.part1)) - 1, cut))
        m = len(cut.part1)
        coef = math.sqrt((2 ** (n - m) + 2**m - 2) / 4)
        terms.append((coef * (trace_norm(realignment(rho, cut)) - 1), cut))
    raw, cut = max(terms)
    return _lower(2 ** (1 - n / 2) * raw, cut, cfg, assumes_w_class=True)


def theorem7_wclass_bound(rho: DensityMatrix) -> float:
    """Lower bound valid for mixtures of generalized W states only.

    The W-class assumption is not checked.
    """
    return _theorem7(rho).value


# --------------------------------------------------------------------- report

_EVALUATORS: dict[str, Callable[[DensityMatrix, ToleranceConfig], BoundValue]] = {
    "purity_lower": _purity_lower,
    "tau_n": _tau_n,
    "gpt_tripartite": _gpt_tripartite,
    "b1": lambda rho, cfg: _best_b(rho, "b1", cfg),
    "b2": lambda rho, cfg: _best_b(rho, "b2", cfg),
    "b3": lambda rho, cfg: _best_b(rho, "b3", cfg),
    "thm3": _theorem3,
    "thm6": _theorem6,
    "thm7_wclass": _theorem7,
    "purity_upper": _purity_upper,
    "decomp_upper": _decomposition_upper,
}


def applicability(bound_id: str, rho: DensityMatrix) -> str | None:
    """Reason why ``bound_id`` cannot be evaluated on ``rho``, or None."""
    if bound_id not in _EVALUATORS:
        raise ValueError(f"unknown bound id {bound_id!r}; choose from {', '.join(ALL_IDS)}")
    dims, n = rho.dims, rho.n
    if n < 2:
        return "needs at least two subsystems"
    if bound_id == "tau_n" and len(set(dims)) != 1:
        return "needs equal subsystem dimensions"
    if bound_id == "gpt_tripartite" and (n != 3 or dims[0] > min(dims[1:])):
        return "needs N = 3 with dims (m, n, p), m <= n, p"
    if bound_id in ("thm3", "thm6") and n < 3:
        return "needs N >= 3"
    if bound_id == "thm7_wclass" and any(d != 2 for d in dims):
        return "needs qubits"
    return None


def evaluate(bound_id: str, rho: DensityMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> BoundValue:
    reason = applicability(bound_id, rho)
    if reason is not None:
        raise ValueError(f"{bound_id} {reason}")
    return _EVALUATORS[bound_id](rho, cfg)


@dataclass
class BoundReport:
    dims: tuple
    entries: dict
    skipped: dict
    best_lower: float | None
    best_lower_id: str | None
    best_upper: float | None
    best_upper_id: str | None

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "best_lower": self.best_lower,
            "best_lower_id": self.best_lower_id,
            "best_upper": self.best_upper,
            "best_upper_id": self.best_upper_id,
            "bounds": {k: v.to_dict() for k, v in self.entries.items()},
            "skipped": dict(self.skipped),
        }


def full_report(
    rho: DensityMatrix,
    cfg: ToleranceConfig = DEFAULT_TOL,
    bounds: Iterable[str] | None = None,
    assume_w_class: bool = False,
) -> BoundReport:
    """Evaluate every applicable bound and pick the tightest pair.

    ``thm7_wclass`` only counts towards ``best_lower`` when
    ``assume_w_class`` is set, since it is not valid for general states.
    """
    ids = ALL_IDS if bounds is None else tuple(bounds)
    entries, skipped = {}, {}
    for bid in ids:
        reason = applicability(bid, rho)
        if reason is not None:
            skipped[bid] = reason
            continue
        entries[bid] = _EVALUATORS[bid](rho, cfg)

    lowers = {k: v.value for k, v in entries.items() if v.kind == "lower"}
    if not assume_w_class:
        lowers.pop("thm7_wclass", None)
    uppers = {k: v.value for k, v in entries.items() if v.kind == "upper"}
    lo_id = max(lowers, key=lowers.get) if lowers else None
    up_id = min(uppers, key=uppers.get) if uppers else None
    return BoundReport(
        rho.dims,
        entries,
        skipped,
        lowers[lo_id] if lo_id else None,
        lo_id,
        uppers[up_id] if up_id else None,
        up_id,
    )
