"""Built-in consistency suites run by ``concbounds selftest``."""

from __future__ import annotations

import sys
import time

from . import bounds, oracle, states
from .scan import scan_family
from .tensor import Bipartition

TWO_QUBIT_CUT = Bipartition((1,), (2,))


def check_two_qubit_oracle(samples: int = 100):
    for seed in range(samples):
        rho = states.random_mixed((2, 2), 4, seed=seed)
        w = oracle.wootters(rho)
        t = bounds.tau_n(rho)
        assert abs(t - w) < 1e-8, f"seed {seed}: sqrt(tau_2) = {t}, wootters = {w}"
        for name in ("b1", "b2", "b3"):
            b = getattr(bounds, name)(rho, TWO_QUBIT_CUT)
            assert b <= w + 1e-8, f"seed {seed}: {name} = {b} > wootters = {w}"


def check_minor_sum_oracle(samples: int = 10):
    for seed in range(samples):
        for dims in ((2, 2, 2), (3, 3)):
            psi = states.random_pure(dims, seed=seed)
            a, b = states.pure_concurrence_cd(psi), oracle.minor_sum_concurrence(psi)
            assert abs(a - b) < 1e-12, f"dims {dims} seed {seed}: {a} vs {b}"


def check_pure_collapse(samples: int = 20):
    for seed in range(samples):
        psi = states.random_pure((2, 2, 2), seed=seed)
        rho = psi.dm()
        c = states.pure_concurrence(psi)
        for f in (bounds.purity_lower, bounds.purity_upper, bounds.decomposition_upper):
            v = f(rho)
            assert abs(v - c) <= 1e-10 * c, f"seed {seed}: {f.__name__} = {v}, pure concurrence = {c}"


def check_sandwich(samples: int = 20):
    for seed in range(samples):
        rho = states.random_mixed((2, 2, 2), 2 + seed % 7, seed=seed)
        rep = bounds.full_report(rho)
        up = rep.entries["decomp_upper"].value
        lo_pur, up_pur = rep.entries["purity_lower"].value, rep.entries["purity_upper"].value
        assert lo_pur <= min(up_pur, up) + 1e-8, f"seed {seed}: purity sandwich violated"
        for bid, v in rep.entries.items():
            if v.kind == "lower" and bid != "thm7_wclass":
                assert v.value <= up + 1e-8, f"seed {seed}: {bid} = {v.value} > decomp_upper = {up}"


def check_separable_zero(samples: int = 20):
    for seed in range(samples):
        rho = states.random_separable((2, 2, 2), 4, seed=seed)
        for f in (bounds.tau_n, bounds.gpt_tripartite_bound, bounds.theorem6_bound):
            v = f(rho)
            assert v == 0.0, f"seed {seed}: {f.__name__} = {v} on a separable state"


def check_thresholds():
    cases = (("w-noise", states.w_noise, 3 / 11), ("ghz-noise", states.ghz_noise, 0.2))
    for name, family, expected in cases:
        res = scan_family(lambda p: family(3, p), "p", 0.1, 0.4, ["tau_n"], grid_points=7)
        thr = res.thresholds["tau_n"].value
        assert thr is not None and abs(thr - expected) < 5e-4, f"{name}: threshold {thr}, expected {expected}"


def check_coefficients():
    for n in range(3, 13):
        for m in range(1, n):
            c6, c3 = bounds.theorem6_coefficient(n, m), bounds.theorem3_coefficient(n)
            assert c6 >= c3, f"N={n}, M={m}: {c6} < {c3}"


SUITES = (
    ("two-qubit oracle", check_two_qubit_oracle),
    ("minor-sum oracle", check_minor_sum_oracle),
    ("pure-state collapse", check_pure_collapse),
    ("upper/lower sandwich", check_sandwich),
    ("separable zeroing", check_separable_zero),
    ("detection thresholds", check_thresholds),
    ("coefficient dominance", check_coefficients),
)


def run(out=None) -> bool:
    out = sys.stdout if out is None else out
    ok = True
    width = max(len(name) for name, _ in SUITES)
    for name, suite in SUITES:
        t0 = time.perf_counter()
        try:
            suite()
            status, msg = "PASS", ""
        except Exception as exc:  # report every failure kind, keep going
            ok = False
            status, msg = "FAIL", f"  {type(exc).__name__}: {exc}"
        print(f"{name:<{width}}  {status}  {time.perf_counter() - t0:6.2f}s{msg}", file=out)
    print("selftest " + ("passed" if ok else "FAILED"), file=out)
    return ok
