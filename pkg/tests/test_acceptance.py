"""Acceptance criteria, one test each; every test logs a PASS/FAIL line."""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from concbounds import bounds, oracle, states
from concbounds.tensor import Bipartition, Y_CLASSES, gpt, trace_norm

from conftest import ACCEPTANCE_LINES


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def scan_threshold(family):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "concbounds", "scan", "--family", family, "--bounds", "tau_n"],
        capture_output=True, text=True, check=True,
    )
    elapsed = time.perf_counter() - t0
    return json.loads(proc.stderr)["thresholds"]["tau_n"]["threshold"], elapsed


def test_01_w_noise_threshold():
    th, elapsed = scan_threshold("w-noise")
    ok = th is not None and abs(th - 0.2727) <= 5e-4 and elapsed < 60
    record(1, "W-noise tau_3 threshold", ok, f"threshold {th:.6f} (target 0.2727 +/- 0.0005), {elapsed:.1f}s (< 60s)")


def test_02_ghz_noise_threshold():
    th, elapsed = scan_threshold("ghz-noise")
    ok = th is not None and abs(th - 0.2) <= 5e-4
    record(2, "GHZ-noise tau_3 threshold", ok, f"threshold {th:.6f} (target 0.2000 +/- 0.0005)")


def test_03_generalized_ghz_n4():
    worst = dict(pure=0.0, thm6=0.0, thm3=0.0)
    ordered = True
    for theta in np.linspace(0.01, math.pi / 2 - 0.01, 50):
        sc = abs(math.sin(theta) * math.cos(theta))
        psi = states.generalized_ghz(4, theta)
        rho = psi.dm()
        c, t6, t3 = states.pure_concurrence(psi), bounds.theorem6_bound(rho), bounds.theorem3_bound(rho)
        worst["pure"] = max(worst["pure"], abs(c / (math.sqrt(7) * sc) - 1))
        worst["thm6"] = max(worst["thm6"], abs(t6 / (2 * sc) - 1))
        worst["thm3"] = max(worst["thm3"], abs(t3 / (math.sqrt(2) * sc) - 1))
        ordered &= t6 > t3
    ok = worst["pure"] < 1e-10 and worst["thm6"] < 1e-8 and worst["thm3"] < 1e-8 and ordered
    record(3, "generalized GHZ N=4", ok,
           f"max rel err pure {worst['pure']:.1e} (< 1e-10), thm6 {worst['thm6']:.1e}, thm3 {worst['thm3']:.1e} "
           f"(< 1e-8), thm6 > thm3 at all 50 angles: {ordered}")


def test_04_two_qubit_oracle():
    cut = Bipartition((1,), (2,))
    worst_tau, worst_b = 0.0, -np.inf
    for seed in range(500):
        rho = states.random_mixed((2, 2), 4, seed=seed)
        w = oracle.wootters(rho)
        worst_tau = max(worst_tau, abs(bounds.tau_n(rho) - w))
        worst_b = max(worst_b, *(f(rho, cut) - w for f in (bounds.b1, bounds.b2, bounds.b3)))
    ok = worst_tau < 1e-8 and worst_b <= 1e-8
    record(4, "two-qubit oracle equivalence", ok,
           f"max |sqrt(tau_2) - wootters| {worst_tau:.1e} (< 1e-8), max b_i - wootters {worst_b:.2e} (<= 1e-8)")


def test_05_sandwich_and_collapse():
    worst_sandwich = -np.inf
    worst_lower = -np.inf
    for seed in range(200):
        rho = states.random_mixed((2, 2, 2), 1 + seed % 8, seed=seed)
        rep = bounds.full_report(rho)
        e = rep.entries
        upper = min(e["purity_upper"].value, e["decomp_upper"].value)
        worst_sandwich = max(worst_sandwich, e["purity_lower"].value - upper)
        for v in e.values():
            if v.kind == "lower":
                worst_lower = max(worst_lower, v.value - e["decomp_upper"].value)
    worst_pure = 0.0
    for seed in range(50):
        psi = states.random_pure((2, 2, 2), seed=1000 + seed)
        c = states.pure_concurrence(psi)
        rho = psi.dm()
        for v in (bounds.purity_lower(rho), bounds.purity_upper(rho), bounds.decomposition_upper(rho)):
            worst_pure = max(worst_pure, abs(v / c - 1))
    ok = worst_sandwich <= 1e-8 and worst_lower <= 1e-8 and worst_pure < 1e-10
    record(5, "sandwich and pure collapse", ok,
           f"max purity_lower - min(upper) {worst_sandwich:.2e}, max lower - decomp_upper {worst_lower:.2e} "
           f"(<= 1e-8) on 200 states; pure max rel err {worst_pure:.1e} (< 1e-10) on 50 states")


def test_06_separability_zeroing():
    worst_bound, worst_norm = 0.0, 0.0
    for seed in range(50):
        rho = states.random_separable((2, 2, 2), 1 + seed % 10, seed=seed)
        worst_bound = max(worst_bound, bounds.tau_n(rho), bounds.gpt_tripartite_bound(rho), bounds.theorem6_bound(rho))
        worst_norm = max(worst_norm, max(trace_norm(gpt(rho, spec)) for spec in Y_CLASSES.values()))
    ok = worst_bound == 0 and worst_norm <= 1 + 1e-8
    record(6, "separability zeroing", ok,
           f"max of tau_3/gpt/thm6 {worst_bound:.1e} (== 0), max GPT trace norm {worst_norm:.12f} (<= 1 + 1e-8)")


def test_07_rank_four_structure():
    worst_fifth, worst_imag = 0.0, 0.0
    for seed in range(20):
        rho = states.random_mixed((2, 2, 2), 1 + seed % 8, seed=seed)
        for spec in bounds.generator_pair_spectra(rho):
            mags = np.sort(np.abs(spec.eigenvalues))[::-1]
            worst_fifth = max(worst_fifth, mags[4] / spec.scale)
            worst_imag = max(worst_imag, np.abs(spec.eigenvalues.imag).max() / spec.scale)
    ok = worst_fifth < 1e-8 and worst_imag < 1e-8
    record(7, "rank-4 spectrum of rho rho~", ok,
           f"max fifth |eigenvalue| / ||rho rho~|| {worst_fifth:.1e}, max |Im| / ||rho rho~|| {worst_imag:.1e} (< 1e-8)")


def test_08_theorem6_dominance():
    coeff_ok = all(
        bounds.theorem6_coefficient(n, m) >= bounds.theorem3_coefficient(n)
        for n in range(3, 13) for m in range(1, n)
    )
    worst = -np.inf
    for seed in range(100):
        dims = [(2, 2, 2), (2, 2, 2, 2), (3, 3, 3), (2, 3, 2)][seed % 4]
        rho = states.random_mixed(dims, 1 + seed % 3, seed=seed)
        worst = max(worst, bounds.theorem3_bound(rho) - bounds.theorem6_bound(rho))
    ok = coeff_ok and worst <= 1e-12
    record(8, "theorem 6 dominates theorem 3", ok,
           f"coefficients N=3..12 all M: {coeff_ok}; max thm3 - thm6 on 100 states {worst:.1e} (<= 1e-12)")


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_09_minor_sum_proportionality(n, d):
    ratios = []
    for seed in range(100):
        psi = states.random_pure((d,) * n, seed=seed)
        ratios.append(states.pure_concurrence_cd(psi) / states.pure_concurrence(psi))
    spread = np.std(ratios) / np.mean(ratios)
    record(9, f"minor-sum / purity ratio constant (N={n}, d={d})", spread < 1e-8,
           f"std/mean {spread:.1e} (< 1e-8), ratio {np.mean(ratios):.12f}")


@pytest.mark.parametrize("weights", [(0.6, 0.4, 0, 0, 0), (0.6, 0.1, 0.05, 0.05, 0.05), (0.4, 0.0, 0.1, 0.1, 0.1)])
def test_10_dct_noise_sandwich(weights):
    # substitute criterion: the exact DCT weights behind the reference curves are not published
    worst = -np.inf
    for x in np.linspace(0, 1, 41):
        rho = states.mix_with_noise(states.dct_state(*weights), x)
        e = bounds.full_report(rho).entries
        upper = min(e["purity_upper"].value, e["decomp_upper"].value)
        worst = max(worst, e["purity_lower"].value - upper)
        worst = max(worst, max(v.value for v in e.values() if v.kind == "lower") - e["decomp_upper"].value)
    record(10, f"DCT-noise sandwich (substitute), weights {weights}", worst <= 1e-8,
           f"max lower - upper over 41 mixing values {worst:.2e} (<= 1e-8)")
