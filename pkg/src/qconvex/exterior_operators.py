"""Induced operators on ``Lambda^p V*`` and their spectra.

The wedge basis ``Theta_a = theta_{a_1} ^ ... ^ theta_{a_p}`` is orthonormal
and ordered by :func:`~qconvex.exterior_basis.enumerate_basis`.  Operators
are kept dense so that arbitrary (non-diagonal) frames go through the same
code as diagonal ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from ._validation import check_degree, check_symmetric, as_square
from .errors import DomainError
from .exterior_basis import (
    MultiIndex,
    basis_position,
    enumerate_basis,
    index_sum,
    star_complement,
)


@dataclass(frozen=True)
class PrincipalSpectrum:
    """Sorted eigenvalues ``k_1 <= ... <= k_n`` of a shape operator."""

    values: tuple[float, ...]

    def __init__(self, values: Sequence[float]):
        vals = tuple(sorted(float(v) for v in values))
        if not vals:
            raise DomainError("a spectrum needs at least one value")
        if not all(np.isfinite(vals)):
            raise DomainError("spectrum values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def trace(self) -> float:
        return float(np.sum(self.values))

    @property
    def mean_curvature(self) -> float:
        """Normalized mean curvature ``H = trace / n``."""
        return self.trace / self.n

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    @classmethod
    def of(cls, A) -> "PrincipalSpectrum":
        """Spectrum of a symmetric matrix."""
        return cls(np.linalg.eigvalsh(check_symmetric(A, "A")))


@dataclass(frozen=True, eq=False)
class ExteriorOperator:
    """Dense operator on ``Lambda^p`` of an ``n``-dimensional space."""

    n: int
    p: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        dim = comb(self.n, self.p)
        if arr.shape != (dim, dim):
            raise DomainError(f"expected a {dim}x{dim} array, got {arr.shape}")
        object.__setattr__(self, "entries", arr)

    @property
    def basis(self) -> list[MultiIndex]:
        return enumerate_basis(self.n, self.p)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __add__(self, other: "ExteriorOperator") -> "ExteriorOperator":
        if (self.n, self.p) != (other.n, other.p):
            raise DomainError("cannot add operators on different exterior powers")
        return ExteriorOperator(self.n, self.p, self.entries + other.entries)


def _sorted_with_sign(t: list[int]) -> tuple[tuple[int, ...], int]:
    inversions = sum(1 for i in range(len(t)) for j in range(i + 1, len(t)) if t[i] > t[j])
    return tuple(sorted(t)), (-1 if inversions % 2 else 1)


def induced_derivation(B, p: int) -> np.ndarray:
    """Matrix of ``omega -> sum_i omega(.., B v_i, ..)`` on ``Lambda^p V*``.

    ``B`` is any square matrix (not necessarily symmetric).  Column ``a``
    holds the coordinates of the image of ``Theta_a``.  Since
    ``theta_m o B = sum_j B[m, j] theta_j``, each factor of ``Theta_a`` is
    replaced in turn and the result re-sorted with its permutation sign.
    """
    B = as_square(B, "B")
    n = B.shape[0]
    p = check_degree(p, n)
    basis = enumerate_basis(n, p)
    pos = basis_position(n, p)
    M = np.zeros((len(basis), len(basis)))
    for col, a in enumerate(basis):
        els = list(a.elements)
        for k, m in enumerate(els):
            M[col, col] += B[m - 1, m - 1]
            for j in range(1, n + 1):
                if j in a.elements:
                    continue
                coeff = B[m - 1, j - 1]
                if coeff == 0.0:
                    continue
                t = els.copy()
                t[k] = j
                key, sign = _sorted_with_sign(t)
                M[pos[key], col] += sign * coeff
    return M


def extend(A, p: int) -> ExteriorOperator:
    """The derivation extension ``A^[p]`` of a symmetric ``A``.

    For diagonal ``A = diag(k)`` the result is diagonal with ``K_a`` at
    position ``a``.
    """
    A = check_symmetric(A, "A")
    M = induced_derivation(A, p)
    return ExteriorOperator(A.shape[0], int(p), 0.5 * (M + M.T))


def weitzenbock_extension(A, p: int) -> ExteriorOperator:
    """``T_A^[p] = (tr A) A^[p] - A^[p] A^[p]``."""
    A = check_symmetric(A, "A")
    E = extend(A, p).entries
    T = np.trace(A) * E - E @ E
    return ExteriorOperator(A.shape[0], int(p), 0.5 * (T + T.T))


def closed_form_spectrum(k, p: int) -> list[tuple[MultiIndex, float]]:
    """Pairs ``(a, K_a * K_{*a})`` over the lexicographic basis.

    For ``p = n`` the complement is empty and every value is 0.
    """
    k = k if isinstance(k, PrincipalSpectrum) else PrincipalSpectrum(k)
    p = check_degree(p, k.n)
    out = []
    for a in enumerate_basis(k.n, p):
        Ka = index_sum(a, k)
        Kstar = index_sum(star_complement(a), k)
        out.append((a, Ka * Kstar))
    return out


@lru_cache(maxsize=None)
def _membership(n: int, p: int) -> np.ndarray:
    rows = np.zeros((comb(n, p), n))
    for r, a in enumerate(enumerate_basis(n, p)):
        rows[r, [i - 1 for i in a.elements]] = 1.0
    rows.setflags(write=False)
    return rows


def closed_form_values(k, p: int) -> np.ndarray:
    """Vectorized ``K_a * K_{*a}`` in basis order.

    ``k`` is used in the order given (no sorting), so index ``i`` of the
    basis refers to ``k[i - 1]``.
    """
    k = np.asarray(getattr(k, "values", k), dtype=float)
    p = check_degree(p, k.shape[-1])
    K = _membership(k.shape[-1], p) @ k
    return K * (k.sum() - K)


def dense_spectrum(T) -> np.ndarray:
    """All eigenvalues of a symmetric operator, ascending (LAPACK ``syevd``)."""
    arr = T.entries if isinstance(T, ExteriorOperator) else T
    arr = check_symmetric(arr, "operator")
    return np.linalg.eigvalsh(0.5 * (arr + arr.T))


def spectra_match(first, second, rtol: float = 1e-9) -> bool:
    """Multiset comparison of two spectra.

    Both sides are sorted and compared with an absolute tolerance of
    ``rtol * (1 + max |value|)``, so repeated eigenvalues cannot be
    mis-paired.
    """
    a = np.sort(np.asarray(first, dtype=float))
    b = np.sort(np.asarray(second, dtype=float))
    if a.shape != b.shape:
        return False
    scale = 1.0 + max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
    return bool(np.all(np.abs(a - b) <= rtol * scale))
