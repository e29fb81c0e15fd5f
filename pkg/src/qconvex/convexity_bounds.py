"""q-convexity margins and the sharp lower bounds they imply.

For a q-nonnegative spectrum and ``p <= min(q, n - q)`` the smallest
eigenvalue of ``T_A^[p]`` is at least
``-(n - p)(q - p) / (n - q)^2 * (tr A)^2``; equality forces the rigid
shape ``k_{p+1} = ... = k_n = tr A / (n - q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._validation import check_degree
from .errors import DomainError
from .exterior_operators import PrincipalSpectrum, closed_form_values


class MarginStatus(str, Enum):
    STRICT = "strict"
    NONNEGATIVE = "nonnegative"
    VIOLATED = "violated"


class Rigidity(str, Enum):
    INTERIOR = "interior"
    BOUNDARY_RIGID = "boundary_rigid"
    INVALID = "invalid"


def default_margin_tol(k: PrincipalSpectrum) -> float:
    return 1e-10 * (1.0 + max(abs(v) for v in k.values))


def default_rigidity_tol(trace: float) -> float:
    return 1e-10 * (1.0 + abs(trace))


@dataclass(frozen=True)
class ConvexityMargin:
    q: int
    margin: float
    status: MarginStatus
    tol: float

    @property
    def nonnegative(self) -> bool:
        return self.status is not MarginStatus.VIOLATED

    def implies(self, q_other: int) -> bool:
        """q-nonnegativity carries over to every larger order."""
        return self.nonnegative and q_other >= self.q


def _spectrum(k) -> PrincipalSpectrum:
    return k if isinstance(k, PrincipalSpectrum) else PrincipalSpectrum(k)


def qconvex_margin(k, q: int, tol: float | None = None) -> ConvexityMargin:
    """Sum of the ``q`` smallest principal curvatures, classified."""
    k = _spectrum(k)
    q = check_degree(q, k.n, name="q")
    tol = default_margin_tol(k) if tol is None else float(tol)
    margin = float(np.sum(k.values[:q]))
    if margin > tol:
        status = MarginStatus.STRICT
    elif margin < -tol:
        status = MarginStatus.VIOLATED
    else:
        status = MarginStatus.NONNEGATIVE
    return ConvexityMargin(q, margin, status, tol)


def tmin_lower_bound(n: int, p: int, q: int, trace: float) -> float:
    """Lower bound on the smallest eigenvalue of ``T_A^[p]``.

    For ``p >= q`` the bound is 0: a q-nonnegative operator is also
    p-nonnegative, and the bound at convexity order ``p`` vanishes.
    """
    if p < 1 or q < 1 or q > n - 1 or p > n - 1:
        raise DomainError(f"need 1 <= p, q <= n - 1, got p={p}, q={q}, n={n}")
    if p >= q:
        if p > n - p:
            raise DomainError(f"p={p} exceeds n/2 for n={n}")
        return 0.0
    if p > n - q:
        raise DomainError(f"p={p} > n - q = {n - q}: the bound needs p <= min(q, n - q)")
    return -(n - p) * (q - p) / (n - q) ** 2 * trace**2


def tmin(k, p: int) -> float:
    """Smallest eigenvalue of ``T^[p]`` from the closed form."""
    return float(np.min(closed_form_values(k, p)))


def rigidity_check(k, p: int, q: int, tol: float | None = None) -> Rigidity:
    """Whether ``k`` has the extremal shape of the ``T^[p]`` bound.

    Returns ``invalid`` when ``k`` is not q-nonnegative.  Only for ``p < q``
    does equality in the bound force this shape; at ``p = q`` the bound is
    0 and is attained by any spectrum with ``k_1 + ... + k_p = 0``.
    """
    k = _spectrum(k)
    n = k.n
    if not 1 <= p <= min(q, n - q):
        raise DomainError(f"need 1 <= p <= min(q, n - q), got p={p}, q={q}, n={n}")
    if not qconvex_margin(k, q).nonnegative:
        return Rigidity.INVALID
    tr = k.trace
    tol = default_rigidity_tol(tr) if tol is None else float(tol)
    head = float(np.sum(k.values[:p]))
    level = tr / (n - q)
    if abs(head + (q - p) / (n - q) * tr) > tol:
        return Rigidity.INTERIOR
    if np.max(np.abs(np.asarray(k.values[p:]) - level)) > tol:
        return Rigidity.INTERIOR
    return Rigidity.BOUNDARY_RIGID


def bochner_pointwise_bound(c: float, n: int, q: int, ell: int, H: float) -> float:
    """Pointwise lower bound for the Bochner operator on ``ell``-forms.

    ``ell (n - ell) (c - (q - ell)/ell * (n/(n - q))^2 H^2)`` for
    ``ell < q``; for ``ell >= q`` the extrinsic part is nonnegative and the
    bound is ``ell (n - ell) c``.
    """
    if q >= n:
        raise DomainError(f"q must be at most n - 1, got q={q}, n={n}")
    if ell < 1:
        raise DomainError(f"ell must be positive, got {ell}")
    if H < 0:
        raise DomainError(f"mean curvature must be oriented so H >= 0, got {H}")
    base = ell * (n - ell)
    if ell >= q:
        return base * c
    return base * (c - (q - ell) / ell * (n / (n - q)) ** 2 * H**2)


def rigid_spectrum(n: int, p: int, q: int, trace: float, weights=None) -> PrincipalSpectrum:
    """A spectrum of the extremal shape for given ``(n, p, q)`` and trace.

    The last ``n - p`` values equal ``trace / (n - q)`` and the first ``p``
    split ``-(q - p) trace / (n - q)`` in proportion to ``weights``
    (nonnegative, default uniform).
    """
    if not 1 <= p <= min(q, n - q):
        raise DomainError(f"need 1 <= p <= min(q, n - q), got p={p}, q={q}, n={n}")
    if trace < 0:
        raise DomainError("a q-nonnegative spectrum has nonnegative trace")
    w = np.ones(p) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (p,) or np.any(w < 0) or w.sum() <= 0:
        raise DomainError("weights must be p nonnegative numbers with positive sum")
    head = -(q - p) * trace / (n - q) * w / w.sum()
    return PrincipalSpectrum(list(head) + [trace / (n - q)] * (n - p))
