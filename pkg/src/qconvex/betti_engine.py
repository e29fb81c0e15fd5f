"""Betti-number certificates for sampled q-convex hypersurface data.

Each degree ``1 <= i <= p`` is classified by the strongest available rule,
then mirrored to ``n - i`` (Poincare duality):

1. ``c >= 0`` and ``q <= i``: the Bochner operator on ``i``-forms is
   nonnegative, so ``b_i <= binom(n, i)``; it vanishes when the lower bound
   is strict somewhere (``c > 0``, a strictly q-convex sample, or an asserted
   strict ambient point).
2. ``c > 0`` and ``i <= min(p, q - 1, n - q)``: nonnegativity holds when the
   mean curvature is pinched, ``H <= (n-q)/n * sqrt(i/(q-i)) * c``; strict
   pinching (or strictness as above) at some sample gives vanishing.
3. Otherwise a lower bound ``B >= i(n-i) kappa`` with ``kappa < 0`` plus a
   diameter bound gives ``binom(n, i) * exp(C * sqrt(-kappa D^2 i(n-i)))``.
   The constant ``C`` is not explicit, so only the exponent is certified.
4. Anything else: no conclusion.

Degrees 0 and n are always ``no_conclusion`` (they equal 1 for a closed,
connected, oriented manifold, which is not something these rules decide).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from math import comb, sqrt
from typing import Callable, Sequence

import numpy as np

from .convexity_bounds import (
    MarginStatus,
    bochner_pointwise_bound,
    qconvex_margin,
    rigidity_check,
)
from .curvature_bochner import AmbientModel
from .errors import DomainError, ScenarioValidationError
from .exterior_operators import PrincipalSpectrum


class Status(str, Enum):
    VANISHES = "vanishes"
    BOUNDED_BINOMIAL = "bounded_binomial"
    EXPONENTIAL_BOUND = "exponential_bound"
    NO_CONCLUSION = "no_conclusion"


class Rule(str, Enum):
    NONNEGATIVE_AMBIENT = "nonnegative-ambient"
    PINCHED_MEAN_CURVATURE = "pinched-mean-curvature"
    NEGATIVE_LOWER_BOUND = "negative-lower-bound"
    OUTSIDE_RANGE = "outside-range"
    TOPOLOGICAL = "topological"


_RANK = {
    Status.NO_CONCLUSION: 0,
    Status.EXPONENTIAL_BOUND: 1,
    Status.BOUNDED_BINOMIAL: 2,
    Status.VANISHES: 3,
}


@dataclass(frozen=True)
class HypersurfaceSample:
    """Principal curvatures sampled at points of a q-convex hypersurface."""

    n: int
    points: tuple[PrincipalSpectrum, ...]
    q: int
    diameter: float | None = None

    def __post_init__(self):
        pts = tuple(k if isinstance(k, PrincipalSpectrum) else PrincipalSpectrum(k) for k in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise DomainError("a sample needs at least one point")
        if not 1 <= self.q <= self.n - 1:
            raise DomainError(f"need 1 <= q <= n - 1, got q={self.q}, n={self.n}")
        if self.diameter is not None and not self.diameter > 0:
            raise DomainError(f"diameter must be positive, got {self.diameter}")
        for idx, k in enumerate(pts):
            if k.n != self.n:
                raise DomainError(f"point {idx} has {k.n} curvatures, expected {self.n}")
            m = qconvex_margin(k, self.q)
            if m.status is MarginStatus.VIOLATED:
                raise ScenarioValidationError(
                    f"point {idx} is not {self.q}-convex (margin {m.margin:.6g})",
                    point_index=idx,
                    margin=m.margin,
                )

    @property
    def mean_curvatures(self) -> np.ndarray:
        return np.array([k.mean_curvature for k in self.points])

    @property
    def H_max(self) -> float:
        return float(self.mean_curvatures.max())

    @property
    def strict_somewhere(self) -> bool:
        return any(qconvex_margin(k, self.q).status is MarginStatus.STRICT for k in self.points)


@dataclass(frozen=True)
class DegreeStatus:
    degree: int
    status: Status
    rule: Rule
    binomial: int
    reason: str
    exponent: float | None = None
    capped: bool = False
    bound_value: float | None = None
    rigid: bool = False

    def stronger_than(self, other: "DegreeStatus") -> bool:
        return _strength(self) > _strength(other)


def _strength(d: DegreeStatus) -> tuple[int, float]:
    # Among exponential bounds a smaller exponent is stronger.
    tie = -d.exponent if d.status is Status.EXPONENTIAL_BOUND and d.exponent is not None else 0.0
    return (_RANK[d.status], tie)


def at_least_as_strong(a: DegreeStatus, b: DegreeStatus, tol: float = 1e-12) -> bool:
    ra, rb = _strength(a), _strength(b)
    return ra[0] > rb[0] or (ra[0] == rb[0] and ra[1] >= rb[1] - tol)


@dataclass(frozen=True)
class BettiCertificate:
    n: int
    p: int
    q: int
    c: float
    degrees: tuple[DegreeStatus, ...]
    notes: tuple[str, ...] = field(default=())

    def __getitem__(self, i: int) -> DegreeStatus:
        return self.degrees[i]

    def statuses(self) -> list[Status]:
        return [d.status for d in self.degrees]


def pinching_threshold(n: int, q: int, ell: int, c: float) -> float:
    """Largest mean curvature for which ``ell``-forms see a nonnegative operator."""
    if not 1 <= ell < q <= n - 1:
        raise DomainError(f"need 1 <= ell < q <= n - 1, got ell={ell}, q={q}, n={n}")
    if not c > 0:
        raise DomainError(f"pinching needs c > 0, got {c}")
    return (n - q) / n * sqrt(ell / (q - ell)) * c


def kappa(c: float, n: int, q: int, ell: int, H_max: float) -> float:
    """Effective curvature lower bound ``c - (q-ell)/ell (n/(n-q))^2 H_max^2``."""
    return bochner_pointwise_bound(c, n, q, ell, H_max) / (ell * (n - ell))


@dataclass(frozen=True)
class ExponentBound:
    exponent: float
    capped: bool


def exponent_bound(n: int, i: int, kappa_value: float, D: float, epsilon: float | None = None) -> ExponentBound:
    """Exponent ``sqrt(-kappa D^2 i (n - i))`` of the Betti bound.

    ``capped`` is set when a user-supplied ``epsilon`` satisfies
    ``kappa D^2 >= -epsilon``; the bound then drops to ``binom(n, i)``.
    """
    if kappa_value >= 0:
        raise DomainError("kappa >= 0: use the nonnegative-operator bound instead")
    if not D > 0:
        raise DomainError(f"diameter must be positive, got {D}")
    kd2 = kappa_value * D * D
    capped = epsilon is not None and kd2 >= -epsilon
    return ExponentBound(sqrt(-kd2 * i * (n - i)), capped)


def _resolve_epsilon(epsilon, n, i):
    return epsilon(n, i) if callable(epsilon) else epsilon


def _classify(
    i: int,
    sample: HypersurfaceSample,
    c: float,
    p: int,
    ambient_strict: bool,
    tol: float,
    epsilon,
    constant,
) -> DegreeStatus:
    n, q = sample.n, sample.q
    binom = comb(n, i)
    H = sample.mean_curvatures
    H_max = float(H.max())
    strict_q = sample.strict_somewhere

    # rule 1
    if q <= i and c >= 0:
        why = []
        if c > 0:
            why.append("c > 0")
        if strict_q:
            why.append("a sampled point is strictly q-convex")
        if ambient_strict:
            why.append("ambient bound asserted strict at a point")
        if why:
            return DegreeStatus(i, Status.VANISHES, Rule.NONNEGATIVE_AMBIENT, binom,
                                f"B^[{i}] >= 0 and positive somewhere ({'; '.join(why)})")
        return DegreeStatus(i, Status.BOUNDED_BINOMIAL, Rule.NONNEGATIVE_AMBIENT, binom,
                            f"B^[{i}] >= 0 since c >= 0 and q <= {i}")

    bound_applies = i >= q or i <= min(q - 1, n - q)
    if not bound_applies:
        return DegreeStatus(i, Status.NO_CONCLUSION, Rule.OUTSIDE_RANGE, binom,
                            f"degree {i} lies in (n - q, q); the extrinsic bound does not apply")

    # rule 2
    if c > 0 and i < q:
        thr = pinching_threshold(n, q, i, c)
        htol = tol * (1.0 + thr)
        if H_max <= thr + htol:
            why = []
            if np.any(H < thr - htol):
                why.append("strict pinching at a sampled point")
            if strict_q:
                why.append("a sampled point is strictly q-convex")
            if ambient_strict:
                why.append("ambient bound asserted strict at a point")
            if why:
                return DegreeStatus(i, Status.VANISHES, Rule.PINCHED_MEAN_CURVATURE, binom,
                                    f"H <= {thr:.12g} everywhere and B^[{i}] > 0 somewhere ({'; '.join(why)})")
            return DegreeStatus(
                i, Status.BOUNDED_BINOMIAL, Rule.PINCHED_MEAN_CURVATURE, binom,
                f"H = {thr:.12g} at every sample (pinching equality); a nonzero harmonic "
                f"{i}-form would be parallel and force rigid principal curvatures",
                rigid=True,
            )

    # rule 3
    k_val = c if i >= q else kappa(c, n, q, i, H_max)
    if k_val >= 0:
        return DegreeStatus(i, Status.BOUNDED_BINOMIAL, Rule.NEGATIVE_LOWER_BOUND, binom,
                            f"B^[{i}] >= {i * (n - i)} * {k_val:.12g} >= 0")
    if sample.diameter is None:
        return DegreeStatus(i, Status.NO_CONCLUSION, Rule.NEGATIVE_LOWER_BOUND, binom,
                            f"B^[{i}] >= {i * (n - i)} * ({k_val:.12g}) but no diameter bound given")
    D = sample.diameter
    eb = exponent_bound(n, i, k_val, D, _resolve_epsilon(epsilon, n, i))
    if eb.capped:
        return DegreeStatus(i, Status.BOUNDED_BINOMIAL, Rule.NEGATIVE_LOWER_BOUND, binom,
                            f"kappa D^2 = {k_val * D * D:.12g} is above the supplied -epsilon",
                            exponent=eb.exponent, capped=True)
    value = None
    if constant is not None:
        value = binom * float(np.exp(constant(n, k_val * D * D) * eb.exponent))
    return DegreeStatus(i, Status.EXPONENTIAL_BOUND, Rule.NEGATIVE_LOWER_BOUND, binom,
                        f"B^[{i}] >= {i * (n - i)} * ({k_val:.12g}), diam <= {D:.12g}; "
                        f"b_{i} <= binom({n},{i}) * exp(C(n, kappa D^2) * {eb.exponent:.12g})",
                        exponent=eb.exponent, bound_value=value)


def certify(
    sample: HypersurfaceSample,
    ambient: AmbientModel,
    p: int | None = None,
    *,
    tol: float = 1e-10,
    epsilon: float | Callable[[int, int], float] | None = None,
    constant: Callable[[int, float], float] | None = None,
) -> BettiCertificate:
    """Per-degree Betti certificate.

    Parameters
    ----------
    sample : HypersurfaceSample
        Principal curvatures at sampled points, all q-nonnegative.
    ambient : AmbientModel
        Lower bound ``c`` on the average of the ``n - p`` smallest ambient
        curvature-operator eigenvalues.
    p : int, optional
        Defaults to ``ambient.p``; must agree with it and satisfy
        ``1 <= p <= n // 2``.
    tol : float
        Relative tolerance for the pinching comparison.
    epsilon, constant : optional
        User-supplied stand-ins for the non-explicit constants of the
        exponential bound.  ``epsilon`` may be a number or ``f(n, i)``;
        ``constant`` is ``C(n, kappa D^2)``.
    """
    n = sample.n
    p = ambient.p if p is None else int(p)
    if ambient.n != n:
        raise DomainError(f"ambient model is for n={ambient.n}, sample has n={n}")
    if p != ambient.p:
        raise DomainError(f"ambient bound refers to p={ambient.p}, certificate asked for p={p}")
    if not 1 <= p <= n // 2:
        raise DomainError(f"need 1 <= p <= n // 2, got p={p}, n={n}")
    c = float(ambient.c)

    low = {i: _classify(i, sample, c, p, ambient.strict_at_point, tol, epsilon, constant) for i in range(1, p + 1)}
    degrees = []
    for i in range(n + 1):
        if i in (0, n):
            degrees.append(DegreeStatus(i, Status.NO_CONCLUSION, Rule.TOPOLOGICAL, 1,
                                        "equals 1 for a closed connected oriented manifold"))
        elif i in low:
            degrees.append(low[i])
        elif n - i in low:
            dual = low[n - i]
            degrees.append(replace(dual, degree=i, binomial=comb(n, i),
                                   reason=f"dual of degree {n - i}: {dual.reason}"))
        else:
            degrees.append(DegreeStatus(i, Status.NO_CONCLUSION, Rule.OUTSIDE_RANGE, comb(n, i),
                                        f"degree {i} is outside [1, p] and its dual range"))

    notes = []
    for idx, k in enumerate(sample.points):
        for d in low.values():
            if d.rigid and d.degree <= min(sample.q, n - sample.q):
                r = rigidity_check(k, d.degree, sample.q)
                notes.append(f"point {idx}: rigidity at degree {d.degree} is {r.value}")
    if any(d.status is Status.BOUNDED_BINOMIAL for d in degrees):
        notes.append("where a Betti number may be positive, harmonic forms of that degree are parallel")
    return BettiCertificate(n, p, sample.q, c, tuple(degrees), tuple(notes))
