"""Curvature operators on ``Lambda^2`` and their Bochner contractions.

Conventions
-----------
* ``Lambda^2`` uses the increasing pair basis ``e_i ^ e_j`` (``i < j``),
  declared orthonormal, in lexicographic order.
* ``e_i ^ e_j`` acts on vectors by ``(e_i ^ e_j) e_k = d_ik e_j - d_jk e_i``.
* A skew ``L`` acts on forms by ``(L w)(X_1..X_p) = -sum_i w(.., L X_i, ..)``.
* Signs are fixed so that the round unit sphere has the identity as its
  curvature operator, and the extrinsic operator of ``diag(k)`` is
  ``diag(k_i k_j)``.

With these choices ``<B w, phi> = sum_b <R w^(e_b), phi^(e_b)>`` summed over
increasing ``p``-tuples ``b`` reproduces ``T_A^[p]`` exactly for the
extrinsic operator of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from ._validation import (
    as_square,
    check_degree,
    check_orthonormal_columns,
    check_skew,
    check_symmetric,
)
from .errors import DomainError
from .exterior_basis import MultiIndex, enumerate_basis
from .exterior_operators import ExteriorOperator, induced_derivation


def pair_basis(n: int) -> list[MultiIndex]:
    return enumerate_basis(n, 2)


def _dimension_from_pairs(m: int) -> int:
    n = int(round((1 + np.sqrt(1 + 8 * m)) / 2))
    if comb(n, 2) != m:
        raise DomainError(f"{m} is not binom(n, 2) for any n")
    return n


@dataclass(frozen=True, eq=False)
class TwoVectorOperator:
    """Symmetric operator on ``Lambda^2`` of an ``n``-dimensional space."""

    n: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = check_symmetric(self.entries, "two-vector operator")
        if arr.shape[0] != comb(self.n, 2):
            raise DomainError(f"expected size binom({self.n},2), got {arr.shape[0]}")
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_array(cls, entries) -> "TwoVectorOperator":
        arr = as_square(entries)
        return cls(_dimension_from_pairs(arr.shape[0]), arr)

    @classmethod
    def identity(cls, n: int) -> "TwoVectorOperator":
        """Curvature operator of the unit sphere (sectional curvature 1)."""
        return cls(n, np.eye(comb(n, 2)))

    @property
    def basis(self) -> list[MultiIndex]:
        return pair_basis(self.n)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class HatTensor:
    """Components ``((e_i ^ e_j) w)(e_b)`` of the ``Lambda^2``-valued tensor.

    ``components[P, c]`` is indexed by the pair ``P`` and the increasing
    ``p``-tuple ``c`` (both lexicographic).
    """

    n: int
    p: int
    components: np.ndarray = field(repr=False)

    def component(self, pair: Sequence[int], b: Sequence[int]) -> float:
        P = pair_basis(self.n).index(MultiIndex(tuple(pair), self.n))
        c = enumerate_basis(self.n, self.p).index(MultiIndex(tuple(b), self.n))
        return float(self.components[P, c])


@dataclass(frozen=True)
class AmbientModel:
    """Curvature data of an ``(n+1)``-dimensional ambient manifold.

    Either the full sorted curvature-operator spectrum is given, or only
    the lower bound ``c`` on the average of its ``n - p`` smallest values.
    ``strict_at_point`` records the (asserted, not computed) hypothesis
    that this bound is strict somewhere on the image of the hypersurface.
    """

    n: int
    p: int
    c: float | None = None
    eigenvalues: tuple[float, ...] | None = None
    strict_at_point: bool = False

    def __post_init__(self):
        if self.eigenvalues is None and self.c is None:
            raise DomainError("ambient model needs either c or eigenvalues")
        check_degree(self.p, self.n, 1, self.n - 1)
        if self.eigenvalues is not None:
            ev = tuple(float(v) for v in self.eigenvalues)
            if len(ev) != comb(self.n + 1, 2):
                raise DomainError(
                    f"ambient spectrum needs binom({self.n + 1},2)={comb(self.n + 1, 2)} values, got {len(ev)}"
                )
            if any(b < a for a, b in zip(ev, ev[1:])):
                raise DomainError("ambient eigenvalues must be sorted ascending")
            object.__setattr__(self, "eigenvalues", ev)
            derived = float(np.mean(ev[: self.n - self.p]))
            if self.c is not None and abs(self.c - derived) > 1e-12 * (1 + abs(derived)):
                raise DomainError(f"c={self.c} disagrees with the spectrum average {derived}")
            object.__setattr__(self, "c", derived)
        else:
            object.__setattr__(self, "c", float(self.c))

    @classmethod
    def unit_sphere(cls, n: int, p: int) -> "AmbientModel":
        return cls(n, p, eigenvalues=(1.0,) * comb(n + 1, 2))


def wedge_endomorphism(i: int, j: int, n: int) -> np.ndarray:
    """Skew matrix of ``e_i ^ e_j``: ``e_i -> e_j``, ``e_j -> -e_i`` (1-based)."""
    if not 1 <= i < j <= n:
        raise DomainError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    L = np.zeros((n, n))
    L[j - 1, i - 1] = 1.0
    L[i - 1, j - 1] = -1.0
    return L


def form_derivation(L, omega, p: int) -> np.ndarray:
    """Coefficients of ``L w`` in the wedge basis, for skew ``L``."""
    L = check_skew(L, "L")
    omega = np.asarray(omega, dtype=float)
    n = L.shape[0]
    if omega.shape != (comb(n, p),):
        raise DomainError(f"form has {omega.shape} coefficients, expected ({comb(n, p)},)")
    return -induced_derivation(L, p) @ omega


@lru_cache(maxsize=64)
def _derivation_stack(n: int, p: int) -> np.ndarray:
    # D[P] is the matrix of the form derivation by the P-th basis wedge.
    stack = np.stack([-induced_derivation(wedge_endomorphism(*P, n), p) for P in pair_basis(n)])
    stack.setflags(write=False)
    return stack


def hat(omega, n: int, p: int) -> HatTensor:
    """The ``Lambda^2``-valued tensor paired with a ``p``-form."""
    p = check_degree(p, n)
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (comb(n, p),):
        raise DomainError(f"form has {omega.shape} coefficients, expected ({comb(n, p)},)")
    return HatTensor(n, p, _derivation_stack(n, p) @ omega)


def bochner_contract(R, p: int) -> ExteriorOperator:
    """Operator ``B`` on ``p``-forms with ``<B w, phi> = <R(w^), phi^>``."""
    R = R if isinstance(R, TwoVectorOperator) else TwoVectorOperator.from_array(R)
    n = R.n
    p = check_degree(p, n, 1, n - 1)
    D = _derivation_stack(n, p)
    B = np.einsum("pq,pca,qcb->ab", R.entries, D, D, optimize=True)
    return ExteriorOperator(n, p, 0.5 * (B + B.T))


def second_compound(M) -> np.ndarray:
    """Matrix of ``x ^ y -> Mx ^ My`` in the pair bases (``M`` may be rectangular)."""
    M = np.asarray(M, dtype=float)
    rows = [(a.elements[0] - 1, a.elements[1] - 1) for a in pair_basis(M.shape[0])]
    cols = [(a.elements[0] - 1, a.elements[1] - 1) for a in pair_basis(M.shape[1])]
    ri, rj = (np.array(x, dtype=int) for x in zip(*rows))
    ck, cl = (np.array(x, dtype=int) for x in zip(*cols))
    return (
        M[np.ix_(ri, ck)] * M[np.ix_(rj, cl)] - M[np.ix_(ri, cl)] * M[np.ix_(rj, ck)]
    )


def extrinsic_operator(A) -> TwoVectorOperator:
    """Gauss-equation term ``<AX,Z><AY,W> - <AX,W><AY,Z>`` of a shape operator."""
    A = check_symmetric(A, "A")
    C = second_compound(A)
    return TwoVectorOperator(A.shape[0], 0.5 * (C + C.T))


def compress_ambient(R_ambient, tangent_frame) -> TwoVectorOperator:
    """Restriction of an ambient curvature operator to tangent wedges.

    ``tangent_frame`` holds the ``n`` orthonormal tangent vectors as the
    columns of an ``(n+1) x n`` array, in ambient coordinates.  Mixed
    tangent-normal wedges are discarded.
    """
    R = R_ambient if isinstance(R_ambient, TwoVectorOperator) else TwoVectorOperator.from_array(R_ambient)
    F = check_orthonormal_columns(tangent_frame)
    if F.shape[0] != R.n:
        raise DomainError(f"frame lives in R^{F.shape[0]}, operator in R^{R.n}")
    C = second_compound(F)
    out = C.T @ R.entries @ C
    return TwoVectorOperator(F.shape[1], 0.5 * (out + out.T))


def kyfan_average(R, m: int) -> float:
    """Mean of the ``m`` smallest eigenvalues."""
    entries = R.entries if isinstance(R, TwoVectorOperator) else check_symmetric(R)
    m = check_degree(m, entries.shape[0], name="m")
    return float(np.mean(np.linalg.eigvalsh(entries)[:m]))


def gauss_split(R_ambient, tangent_frame, A, p: int):
    """``(B_res, B_ext, B)`` for the ambient and extrinsic curvature parts."""
    res = bochner_contract(compress_ambient(R_ambient, tangent_frame), p)
    ext = bochner_contract(extrinsic_operator(A), p)
    if res.n != ext.n:
        raise DomainError("shape operator and frame have different dimensions")
    return res, ext, res + ext
