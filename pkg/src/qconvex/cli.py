"""Command-line interface: ``certify``, ``torus-scan``, ``sweep``, ``spectrum``.

Exit codes: 0 success, 2 validation failure, 3 parse failure, 4 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import asdict
import numpy as np

from . import __version__
from .convexity_bounds import qconvex_margin, rigidity_check, tmin, tmin_lower_bound
from .errors import DomainError, ScenarioParseError, ScenarioValidationError
from .exterior_operators import PrincipalSpectrum, closed_form_spectrum, dense_spectrum, weitzenbock_extension
from .reports import Report, render, run_scenario
from .sphere_lab import sharpness_scan, torus_qconvexity_threshold
from .sweeps import SUITES, random_orthogonal, random_sweep

log = logging.getLogger("qconvex")

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE, EXIT_INTERNAL = 0, 2, 3, 4


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_output(sp):
    sp.add_argument("--format", choices=("text", "structured"), default="text")
    sp.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qconvex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("certify", help="Betti certificate for a scenario file")
    sp.add_argument("scenario", help="path to a JSON scenario")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--epsilon", type=float, default=None,
                    help="assumed epsilon: kappa*D^2 >= -epsilon caps the bound at binom(n,i)")
    _add_output(sp)

    sp = sub.add_parser("torus-scan", help="sharpness table along a family of tori")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--r", type=float, action="append", help="radius (repeatable)")
    sp.add_argument("--grid", type=int, default=11,
                    help="points from sqrt(p/q) to 0.99 when no --r is given")
    sp.add_argument("--tol", type=float, default=1e-12)
    _add_output(sp)

    sp = sub.add_parser("sweep", help="seeded randomized property sweep")
    sp.add_argument("--suite", choices=sorted(SUITES), default="tmin_bound")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--n-min", type=int, default=3)
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--workers", type=int, default=1)
    _add_output(sp)

    sp = sub.add_parser("spectrum", help="closed-form vs dense spectrum of T^[p]")
    sp.add_argument("--k", type=_floats, required=True, help="principal curvatures, comma separated")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None,
                    help="rotate diag(k) by a random orthogonal frame before the dense solve")
    sp.add_argument("--tol", type=float, default=1e-9)
    _add_output(sp)
    return parser


def _torus_report(args) -> Report:
    if args.r:
        grid = args.r
    else:
        lo = torus_qconvexity_threshold(args.p, args.q)
        grid = [float(r) for r in np.linspace(lo, 0.99, args.grid)] if args.grid > 1 else [lo]
    rows = sharpness_scan(args.n, args.p, args.q, grid, c=args.c)
    return Report("torus_scan", {"n": args.n, "p": args.p, "q": args.q, "c": args.c,
                                 "rows": [asdict(r) for r in rows]}, tolerance=args.tol)


def _spectrum_report(args) -> Report:
    k = PrincipalSpectrum(args.k)
    A = np.diag(k.values)
    if args.seed is not None:
        Q = random_orthogonal(np.random.default_rng(args.seed), k.n)
        A = Q @ A @ Q.T
        A = (A + A.T) / 2
    pairs = closed_form_spectrum(k, args.p)
    dense = dense_spectrum(weitzenbock_extension(A, args.p))
    closed_sorted = np.sort([lam for _, lam in pairs])
    dev = float(np.max(np.abs(closed_sorted - dense))) / (1 + k.trace**2)
    data = {
        "k": list(k.values), "p": args.p, "trace": k.trace,
        "closed_form": [{"index": list(a.elements), "lambda": lam} for a, lam in pairs],
        "dense": [float(v) for v in dense],
        "normalized_deviation": dev,
        "match": dev <= args.tol,
    }
    if args.q is not None:
        m = qconvex_margin(k, args.q)
        data["q"] = args.q
        data["q_margin"] = m.margin
        data["margin_status"] = m.status.value
        if args.p <= min(args.q, k.n - args.q):
            data["tmin"] = tmin(k, args.p)
            data["tmin_bound"] = tmin_lower_bound(k.n, args.p, args.q, k.trace)
            data["rigidity"] = rigidity_check(k, args.p, args.q).value
    return Report("spectrum", data, tolerance=args.tol)


def _emit(report: Report, args) -> None:
    text = render(report, "structured" if args.format == "structured" else "text")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "certify":
            report = run_scenario(args.scenario, tol=args.tol, epsilon=args.epsilon)
        elif args.command == "torus-scan":
            report = _torus_report(args)
        elif args.command == "sweep":
            report = random_sweep(args.suite, args.seed, args.samples, args.n_min, args.n_max,
                                  args.tol, workers=args.workers)
        else:
            report = _spectrum_report(args)
        _emit(report, args)
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ScenarioValidationError, DomainError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception:  # noqa: BLE001
        log.exception("internal error")
        return EXIT_INTERNAL
    if report.kind == "sweep" and report.data["failed"]:
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
