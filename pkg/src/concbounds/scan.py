"""Parameter sweeps over state families and detection-threshold bisection."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import DEFAULT_TOL, ToleranceConfig, evaluate
from .tensor import DensityMatrix


@dataclass
class Threshold:
    value: float | None
    iterations: int = 0
    bracket: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "threshold": self.value,
            "iterations": self.iterations,
            "bracket": list(self.bracket) if self.bracket else None,
        }


@dataclass
class ScanResult:
    param: str
    grid: np.ndarray
    values: dict[str, np.ndarray]
    thresholds: dict[str, Threshold] = field(default_factory=dict)
    tol: float = 1e-4

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        ids = list(self.values)
        w.writerow([self.param] + ids)
        for i, x in enumerate(self.grid):
            w.writerow([repr(float(x))] + [repr(float(self.values[b][i])) for b in ids])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "param": self.param,
            "range": [float(self.grid[0]), float(self.grid[-1])],
            "grid_points": int(self.grid.size),
            "tol": self.tol,
            "thresholds": {k: t.to_dict() for k, t in self.thresholds.items()},
        }


def find_threshold(
    f: Callable[[float], float],
    grid: Sequence[float],
    values: Sequence[float],
    tol: float = 1e-4,
    zero_tol: float = DEFAULT_TOL.clamp_tol,
) -> Threshold:
    """Bisect the first change from ``f <= zero_tol`` to ``f > zero_tol`` along ``grid``.

    No threshold is reported when the bound is positive everywhere except
    (possibly) the first grid point, i.e. when bisection cannot move the
    lower bracket off the start of the range.
    """
    detected = [v > zero_tol for v in values]
    for i in range(1, len(detected)):
        if detected[i] and not detected[i - 1]:
            break
    else:
        return Threshold(None)
    lo, hi = float(grid[i - 1]), float(grid[i])
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > zero_tol:
            hi = mid
        else:
            lo = mid
        it += 1
    if i == 1 and lo == float(grid[0]):
        return Threshold(None, it)
    return Threshold(0.5 * (lo + hi), it, (lo, hi))


def scan_family(
    build: Callable[[float], DensityMatrix],
    param: str,
    lo: float,
    hi: float,
    bound_ids: Sequence[str],
    grid_points: int = 201,
    tol: float = 1e-4,
    cfg: ToleranceConfig = DEFAULT_TOL,
    threads: int = 1,
) -> ScanResult:
    """Evaluate unclamped bounds on a uniform grid and locate thresholds."""
    if grid_points < 2:
        raise ValueError("grid needs at least two points")
    grid = np.linspace(lo, hi, grid_points)

    def point(x):
        rho = build(float(x))
        return [evaluate(b, rho, cfg).raw for b in bound_ids]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(point, grid))
    else:
        rows = [point(x) for x in grid]
    table = np.array(rows, dtype=float).reshape(grid_points, len(bound_ids))
    values = {b: table[:, j] for j, b in enumerate(bound_ids)}

    result = ScanResult(param, grid, values, tol=tol)
    for b in bound_ids:
        result.thresholds[b] = find_threshold(
            lambda x, b=b: evaluate(b, build(x), cfg).raw, grid, values[b], tol, cfg.clamp_tol
        )
    return result
