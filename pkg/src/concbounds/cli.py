"""Command-line interface: ``compute``, ``scan`` and ``selftest``.

Exit codes: 0 success, 1 validation or parse error, 2 numerical failure,
3 selftest failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import selftest, states
from .bounds import ALL_IDS, ToleranceConfig, full_report
from .scan import scan_family
from .statefile import StateFileError, read_state
from .tensor import DensityMatrix, NumericalFailure, PureState

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_SELFTEST = 0, 1, 2, 3


@dataclass(frozen=True)
class Family:
    build: Callable[[argparse.Namespace, float | None], DensityMatrix]
    param: str | None = None
    default_range: tuple[float, float] = (0.0, 1.0)


def _weights(args) -> list[float]:
    if args.weights is None:
        raise ValueError("this family needs --weights l0p,l0m,l1,l2,l3")
    w = [float(x) for x in args.weights.split(",")]
    if len(w) != 5:
        raise ValueError(f"--weights needs 5 values, got {len(w)}")
    return w


def _coeffs(args) -> list[float]:
    if args.coeffs is None:
        raise ValueError("gen-w needs --coeffs a1,a2,...")
    return [float(x) for x in args.coeffs.split(",")]


def _pick(value, fallback):
    return fallback if value is None else value


FAMILIES: dict[str, Family] = {
    "ghz": Family(lambda a, v: states.ghz_state(a.n).dm()),
    "w": Family(lambda a, v: states.w_state(a.n).dm()),
    "w-noise": Family(lambda a, v: states.w_noise(a.n, _pick(v, a.p)), "p"),
    "ghz-noise": Family(lambda a, v: states.ghz_noise(a.n, _pick(v, a.p)), "p"),
    "gen-ghz": Family(lambda a, v: states.generalized_ghz(a.n, _pick(v, a.theta)).dm(), "theta", (0.0, math.pi / 2)),
    "gen-w": Family(lambda a, v: states.generalized_w(_coeffs(a)).dm()),
    "dct": Family(lambda a, v: states.dct_state(*_weights(a))),
    "dct-noise": Family(lambda a, v: states.mix_with_noise(states.dct_state(*_weights(a)), _pick(v, a.x)), "x"),
    "random": Family(lambda a, v: states.random_mixed((2,) * a.n, 2**a.n, seed=a.seed)),
}


def _parse_bounds(text: str) -> list[str]:
    if text == "all":
        return list(ALL_IDS)
    ids = [t.strip() for t in text.split(",") if t.strip()]
    unknown = [t for t in ids if t not in ALL_IDS]
    if unknown:
        raise ValueError(f"unknown bound ids {unknown}; choose from {', '.join(ALL_IDS)}")
    return ids


def _cfg(args) -> ToleranceConfig:
    return ToleranceConfig(eig_zero_tol=args.eig_zero_tol, imag_tol=args.imag_tol, clamp_tol=args.clamp_tol)


def _load(args) -> DensityMatrix:
    if (args.state is None) == (args.family is None):
        raise ValueError("give exactly one of --state or --family")
    if args.state is not None:
        st = read_state(args.state)
        return st.dm() if isinstance(st, PureState) else st
    fam = FAMILIES[args.family]
    if fam.param is not None and getattr(args, fam.param) is None:
        raise ValueError(f"family {args.family} needs --{fam.param}")
    return fam.build(args, None)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    rho = _load(args)
    report = full_report(rho, _cfg(args), _parse_bounds(args.bounds), assume_w_class=args.assume_w_class)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bound", "kind", "value", "raw", "clamped", "witness"])
        for bid, v in report.entries.items():
            d = v.to_dict()
            w.writerow([bid, d["kind"], repr(d["value"]), repr(d["raw"]), d["clamped"], d["witness"] or ""])
        w.writerow(["best_lower", report.best_lower_id or "", repr(report.best_lower), "", "", ""])
        w.writerow(["best_upper", report.best_upper_id or "", repr(report.best_upper), "", "", ""])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.family is None:
        raise ValueError("scan needs --family")
    fam = FAMILIES[args.family]
    if fam.param is None:
        raise ValueError(f"family {args.family} has no scan parameter")
    lo, hi = fam.default_range
    if args.range:
        lo, hi = (float(x) for x in args.range.split(","))
    ids = _parse_bounds(args.bounds)
    result = scan_family(
        lambda v: fam.build(args, v), fam.param, lo, hi, ids,
        grid_points=args.grid, tol=args.tol, cfg=_cfg(args), threads=args.threads,
    )
    summary = dict(family=args.family, **result.summary())
    if args.format == "json":
        doc = dict(summary, grid=result.grid.tolist(), values={k: v.tolist() for k, v in result.values.items()})
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(result.to_csv(), args.out)
        text = json.dumps(summary, indent=2) + "\n"
        if args.out:
            Path(args.out).with_suffix(".summary.json").write_text(text)
        else:
            sys.stderr.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if selftest.run() else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="concbounds", description="Bounds on multipartite concurrence.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state", help="JSON state file")
    common.add_argument("--family", choices=sorted(FAMILIES))
    common.add_argument("--n", type=int, default=3, help="number of parties")
    common.add_argument("--p", type=float, help="noise mixing weight for w-noise / ghz-noise")
    common.add_argument("--x", type=float, help="noise mixing weight for dct-noise")
    common.add_argument("--theta", type=float, help="angle for gen-ghz")
    common.add_argument("--weights", help="DCT weights l0p,l0m,l1,l2,l3")
    common.add_argument("--coeffs", help="gen-w amplitudes a1,...,aN")
    common.add_argument("--bounds", default="all", help="comma list of bound ids or 'all'")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--eig-zero-tol", type=float, default=ToleranceConfig.eig_zero_tol)
    common.add_argument("--imag-tol", type=float, default=ToleranceConfig.imag_tol)
    common.add_argument("--clamp-tol", type=float, default=ToleranceConfig.clamp_tol)
    common.add_argument("--assume-w-class", action="store_true",
                        help="let thm7_wclass count towards best_lower")

    p = sub.add_parser("compute", parents=[common], help="bound report for one state")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("scan", parents=[common], help="sweep a family parameter and find thresholds")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--range", help="lo,hi (default: family range)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("selftest", help="run built-in consistency suites")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StateFileError as exc:
        print(f"parse-error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as exc:
        print(f"numerical-failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"validation-error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
