"""Generalized Clifford tori ``S^p(r) x S^(n-p)(sqrt(1 - r^2))`` in the unit sphere.

These are the extremal examples: at ``r = sqrt(p/q)`` the torus is exactly
q-convex, attains the pinching threshold at ``c = 1`` and the ``T^[p]``
bound, and has ``b_p = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Iterable

import numpy as np

from .betti_engine import pinching_threshold
from .convexity_bounds import (
    bochner_pointwise_bound,
    qconvex_margin,
    rigidity_check,
    tmin,
    tmin_lower_bound,
)
from .curvature_bochner import TwoVectorOperator, gauss_split
from .errors import DomainError
from .exterior_operators import PrincipalSpectrum, dense_spectrum

#: Default distance kept from sqrt(p/n) and from 1 when building grids.
R_MARGIN = 1e-6


@dataclass(frozen=True)
class TorusParams:
    n: int
    p: int
    r: float

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"need n >= 3, got {self.n}")
        if not 1 <= self.p <= self.n - 1:
            raise DomainError(f"need 1 <= p <= n - 1, got p={self.p}")
        if not 0 < self.r < 1:
            raise DomainError(f"radius must lie in (0, 1), got {self.r}")


def torus_spectrum(t: TorusParams) -> PrincipalSpectrum:
    s = sqrt(1 - t.r**2)
    return PrincipalSpectrum([-s / t.r] * t.p + [t.r / s] * (t.n - t.p))


def torus_mean_curvature(t: TorusParams) -> float:
    n, p, r = t.n, t.p, t.r
    return (n * r**2 - p) / (n * r * sqrt(1 - r**2))


def torus_qconvexity_threshold(p: int, q: int) -> float:
    """Smallest radius at which the torus is q-convex."""
    if q <= p:
        raise DomainError(f"the torus is never {q}-convex for p={p} >= q")
    return sqrt(p / q)


def default_r_bounds(n: int, p: int) -> tuple[float, float]:
    return sqrt(p / n) + R_MARGIN, 1 - R_MARGIN


@dataclass(frozen=True)
class ScanRow:
    r: float
    q_margin: float
    margin_status: str
    H: float
    pinching_threshold: float
    pinching_slack: float
    lambda_min: float
    tmin_bound: float
    bochner_bound: float
    bochner_min: float
    rigidity: str


def sharpness_scan(n: int, p: int, q: int, r_grid: Iterable[float], c: float = 1.0) -> list[ScanRow]:
    """Evaluate every bound along a family of tori.

    ``bochner_min`` is the smallest eigenvalue of the full Bochner operator
    on ``p``-forms with the unit-sphere ambient operator scaled by ``c``.
    """
    grid = [float(r) for r in r_grid]
    if not grid:
        raise DomainError("empty radius grid")
    if not 1 <= p <= min(q - 1, n - q):
        raise DomainError(f"need 1 <= p <= min(q - 1, n - q), got p={p}, q={q}, n={n}")
    lo = sqrt(p / n)
    for r in grid:
        if not lo < r < 1:
            raise DomainError(f"radius {r} outside ({lo:.6g}, 1)")

    R = TwoVectorOperator(n + 1, c * TwoVectorOperator.identity(n + 1).entries)
    frame = np.eye(n + 1)[:, :n]
    thr = pinching_threshold(n, q, p, c)
    rows = []
    for r in grid:
        t = TorusParams(n, p, r)
        k = torus_spectrum(t)
        H = torus_mean_curvature(t)
        m = qconvex_margin(k, q)
        *_, B = gauss_split(R, frame, np.diag(k.values), p)
        rows.append(
            ScanRow(
                r=r,
                q_margin=m.margin,
                margin_status=m.status.value,
                H=H,
                pinching_threshold=thr,
                pinching_slack=H - thr,
                lambda_min=tmin(k, p),
                tmin_bound=tmin_lower_bound(n, p, q, k.trace),
                bochner_bound=bochner_pointwise_bound(c, n, q, p, max(H, 0.0)),
                bochner_min=float(dense_spectrum(B)[0]),
                rigidity=rigidity_check(k, p, q).value,
            )
        )
    return rows
