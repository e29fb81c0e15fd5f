"""Seeded randomized property sweeps.

Every sample draws from its own generator, seeded from a
``SeedSequence(seed)``, so a sweep is a pure function of its arguments and
can be split into shards evaluated in any order.  A failing sample is
replayed with :func:`run_sample` and its reported seed.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb, sqrt
from typing import Callable

import numpy as np
from scipy.stats import ortho_group

from .betti_engine import HypersurfaceSample, Status, certify
from .convexity_bounds import (
    MarginStatus,
    Rigidity,
    bochner_pointwise_bound,
    qconvex_margin,
    rigidity_check,
    tmin_lower_bound,
)
from .curvature_bochner import (
    AmbientModel,
    TwoVectorOperator,
    bochner_contract,
    compress_ambient,
    extrinsic_operator,
    kyfan_average,
)
from .errors import DomainError
from .exterior_operators import closed_form_values, dense_spectrum, weitzenbock_extension
from .reports import Report
from .betti_engine import pinching_threshold
from .sphere_lab import TorusParams, torus_mean_curvature, torus_spectrum


# -- random models ----------------------------------------------------------

def random_symmetric(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    G = rng.normal(size=(n, n)) * scale
    return (G + G.T) / 2


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    return ortho_group.rvs(n, random_state=rng) if n > 1 else np.ones((1, 1))


def random_qnonnegative(rng: np.random.Generator, n: int, q: int, mode: str = "strict") -> np.ndarray:
    """Sorted spectrum with ``k_1 + ... + k_q >= 0``.

    ``mode`` is ``"strict"`` (margin bounded away from 0) or ``"boundary"``
    (margin 0 up to rounding).
    """
    k = np.sort(rng.normal(size=n) * rng.uniform(0.1, 5.0))
    margin = k[:q].sum()
    if mode == "boundary":
        shift = -margin / q
    else:
        shift = (-margin + rng.uniform(0.01, 1.0) * (1 + np.abs(k).max())) / q
    return np.sort(k + shift)


def random_ambient(rng: np.random.Generator, n: int, p: int, c: float) -> np.ndarray:
    """Curvature operator on ``Lambda^2 R^(n+1)`` with Ky Fan average ``c``.

    The mean of its ``n - p`` smallest eigenvalues equals ``c`` exactly up
    to rounding; the eigenbasis is Haar-random.
    """
    N = comb(n + 1, 2)
    ev = np.sort(rng.normal(size=N) * rng.uniform(0.1, 3.0))
    ev = ev - ev[: n - p].mean() + c
    U = random_orthogonal(rng, N)
    R = U @ np.diag(ev) @ U.T
    return (R + R.T) / 2


# -- suites -----------------------------------------------------------------

@dataclass
class Outcome:
    deviation: float
    ok: bool
    extra: dict


def _pick_n(rng, n_min, n_max):
    return int(rng.integers(n_min, n_max + 1))


def _spectrum_equivalence(rng, n_min, n_max, tol):
    n = _pick_n(rng, n_min, n_max)
    A = random_symmetric(rng, n, rng.uniform(0.1, 5.0))
    tr = np.trace(A)
    k = np.linalg.eigvalsh(A)
    dev = 0.0
    for p in range(1, n):
        closed = np.sort(closed_form_values(k, p))
        dense = dense_spectrum(weitzenbock_extension(A, p))
        dev = max(dev, float(np.max(np.abs(closed - dense))) / (1 + tr**2))
    return Outcome(dev, dev <= tol, {})


def _tmin_bound(rng, n_min, n_max, tol):
    n = _pick_n(rng, n_min, n_max)
    q = int(rng.integers(1, n))
    p = int(rng.integers(1, min(q, n - q) + 1))
    k = random_qnonnegative(rng, n, q, mode="boundary" if rng.random() < 0.3 else "strict")
    tr = float(k.sum())
    lam = float(np.min(closed_form_values(k, p)))
    bound = tmin_lower_bound(n, p, q, tr)
    dev = (bound - lam) / (1 + tr**2)
    extra = {}
    if p < q and qconvex_margin(k, q).status is MarginStatus.STRICT:
        extra["strict_gap"] = (lam - bound) / (1 + tr**2)
    return Outcome(dev, dev <= tol, extra)


def _contraction_identity(rng, n_min, n_max, tol):
    n = _pick_n(rng, n_min, n_max)
    A = random_symmetric(rng, n, rng.uniform(0.1, 3.0))
    R = extrinsic_operator(A)
    dev = 0.0
    for p in range(1, n):
        diff = bochner_contract(R, p).entries - weitzenbock_extension(A, p).entries
        dev = max(dev, float(np.max(np.abs(diff))))
    return Outcome(dev, dev <= tol, {})


def _bres_bound(rng, n_min, n_max, tol):
    n = _pick_n(rng, n_min, n_max)
    p = int(rng.integers(1, n // 2 + 1))
    c = float(rng.uniform(-2.0, 2.0))
    R_amb = TwoVectorOperator(n + 1, random_ambient(rng, n, p, c))
    frame = random_orthogonal(rng, n + 1)[:, :n]
    R_res = compress_ambient(R_amb, frame)
    dev = c - kyfan_average(R_res, n - p)  # Ky Fan: compression cannot lower the average
    for ell in range(1, p + 1):
        lam = float(dense_spectrum(bochner_contract(R_res, ell))[0])
        dev = max(dev, c * ell * (n - ell) - lam)
    return Outcome(dev, dev <= tol, {})


def _torus_sharpness(rng, n_min, n_max, tol):
    n = _pick_n(rng, max(n_min, 3), n_max)
    # admissible: 1 <= p <= min(q - 1, n - q)
    pairs = [(p, q) for q in range(2, n) for p in range(1, min(q - 1, n - q) + 1)]
    if not pairs:
        return Outcome(0.0, True, {})
    p, q = pairs[int(rng.integers(len(pairs)))]
    r0 = sqrt(p / q)
    at_threshold = rng.random() < 0.5
    r = r0 if at_threshold else float(rng.uniform(r0, 0.99))
    t = TorusParams(n, p, r)
    k = torus_spectrum(t)
    H = torus_mean_curvature(t)
    res = [abs(k.trace / n - H) / (1 + abs(H))]
    ok = True
    if at_threshold:
        bound = tmin_lower_bound(n, p, q, k.trace)
        lam = float(np.min(closed_form_values(k, p)))
        res += [
            abs(qconvex_margin(k, q).margin) / (1 + abs(k.values[-1])),
            abs(H - pinching_threshold(n, q, p, 1.0)),
            abs(bochner_pointwise_bound(1.0, n, q, p, H)) / (p * (n - p)),
            abs(lam - bound) / (1 + abs(bound)),
        ]
        ok = rigidity_check(k, p, q) is Rigidity.BOUNDARY_RIGID
    sample = HypersurfaceSample(n, (k,), q)
    for pe in range(1, n // 2 + 1):
        cert = certify(sample, AmbientModel.unit_sphere(n, pe))
        if cert[p].status is Status.VANISHES or cert[n - p].status is Status.VANISHES:
            ok = False
    dev = max(res)
    return Outcome(dev, ok and dev <= tol, {})


@dataclass(frozen=True)
class Suite:
    run: Callable
    tol: float
    n_max: int


SUITES: dict[str, Suite] = {
    "spectrum_equivalence": Suite(_spectrum_equivalence, 1e-9, 8),
    "tmin_bound": Suite(_tmin_bound, 1e-9, 8),
    "contraction_identity": Suite(_contraction_identity, 1e-10, 6),
    "bres_bound": Suite(_bres_bound, 1e-9, 6),
    "torus_sharpness": Suite(_torus_sharpness, 1e-12, 8),
}


def sample_seeds(seed: int, samples: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(samples, dtype=np.uint64)]


def run_sample(suite: str, sample_seed: int, n_min: int = 3, n_max: int | None = None,
               tol: float | None = None) -> Outcome:
    cfg = _suite(suite)
    return cfg.run(np.random.default_rng(sample_seed), n_min,
                    cfg.n_max if n_max is None else n_max, cfg.tol if tol is None else tol)


def _suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise DomainError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None


def _run_shard(args):
    suite, seeds, offset, n_min, n_max, tol = args
    failed, first, max_dev, min_gap, strict_count = 0, None, -np.inf, np.inf, 0
    for j, s in enumerate(seeds):
        out = run_sample(suite, s, n_min, n_max, tol)
        max_dev = max(max_dev, out.deviation)
        if "strict_gap" in out.extra:
            strict_count += 1
            gap = out.extra["strict_gap"]
            min_gap = min(min_gap, gap)
            if not gap > 0:
                out = Outcome(out.deviation, False, out.extra)
        if not out.ok:
            failed += 1
            if first is None:
                first = (offset + j, s)
    return failed, first, max_dev, min_gap, strict_count


def random_sweep(suite: str, seed: int = 0, samples: int = 1000, n_min: int = 3,
                 n_max: int | None = None, tol: float | None = None, workers: int = 1,
                 shard_size: int = 2000) -> Report:
    """Run one property suite on ``samples`` seeded random instances.

    The report holds pass/fail counts, the largest measured deviation, the
    largest violation beyond tolerance, and the seed of the first failing
    sample.  Results do not depend on ``workers``.
    """
    cfg = _suite(suite)
    n_max = cfg.n_max if n_max is None else int(n_max)
    tol = cfg.tol if tol is None else float(tol)
    if samples < 1:
        raise DomainError("samples must be positive")
    if not 3 <= n_min <= n_max:
        raise DomainError(f"need 3 <= n_min <= n_max, got {n_min}, {n_max}")
    seeds = sample_seeds(seed, samples)
    shards = [(suite, seeds[i:i + shard_size], i, n_min, n_max, tol) for i in range(0, samples, shard_size)]
    if workers > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_shard, shards))
    else:
        results = [_run_shard(s) for s in shards]

    failed = sum(r[0] for r in results)
    firsts = [r[1] for r in results if r[1] is not None]
    first = min(firsts) if firsts else None
    max_dev = max(r[2] for r in results)
    data = {
        "suite": suite,
        "seed": seed,
        "samples": samples,
        "n_range": [n_min, n_max],
        "passed": samples - failed,
        "failed": failed,
        "max_deviation": float(max_dev),
        "max_violation": float(max(0.0, max_dev - tol)),
        "first_counterexample": None if first is None else {"index": first[0], "seed": first[1]},
    }
    strict = sum(r[4] for r in results)
    if strict:
        data["strict_samples"] = strict
        data["min_strict_gap"] = float(min(r[3] for r in results))
    return Report("sweep", data, tolerance=tol)
