"""Multi-indices for the wedge basis of the p-th exterior power.

Multi-indices are 1-based and enumerated in lexicographic order, which is
the ordering used for the rows and columns of every operator built on
``Lambda^p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .errors import DomainError

#: Largest ambient dimension accepted by the dense machinery.
MAX_DIMENSION = 16


@dataclass(frozen=True, order=True)
class MultiIndex:
    """A strictly increasing p-subset of ``{1, ..., n}``."""

    elements: tuple[int, ...]
    n: int

    def __post_init__(self):
        els = tuple(int(e) for e in self.elements)
        object.__setattr__(self, "elements", els)
        if any(b <= a for a, b in zip(els, els[1:])):
            raise DomainError(f"multi-index {els} is not strictly increasing")
        if els and (els[0] < 1 or els[-1] > self.n):
            raise DomainError(f"multi-index {els} not contained in [1, {self.n}]")

    @property
    def p(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, i):
        return i in self.elements

    def __str__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"


def _check_dimension(n: int) -> None:
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    if n > MAX_DIMENSION:
        raise DomainError(f"dimension {n} exceeds the dense cap {MAX_DIMENSION}")


@lru_cache(maxsize=None)
def _basis(n: int, p: int) -> tuple[MultiIndex, ...]:
    return tuple(MultiIndex(c, n) for c in combinations(range(1, n + 1), p))


def enumerate_basis(n: int, p: int) -> list[MultiIndex]:
    """All p-multi-indices of ``{1..n}`` in lexicographic order.

    Raises
    ------
    DomainError
        If ``p < 1`` or ``p > n``.
    """
    _check_dimension(n)
    if p < 1 or p > n:
        raise DomainError(f"need 1 <= p <= n, got p={p}, n={n}")
    return list(_basis(n, p))


@lru_cache(maxsize=None)
def basis_position(n: int, p: int) -> dict[tuple[int, ...], int]:
    """Map from the element tuple of a multi-index to its ordinal."""
    return {a.elements: i for i, a in enumerate(_basis(n, p))}


def star_complement(a: MultiIndex, n: int | None = None) -> MultiIndex:
    """Complement ``{1..n} \\ a``; an involution."""
    n = a.n if n is None else n
    if n != a.n:
        MultiIndex(a.elements, n)  # validates containment
    present = set(a.elements)
    return MultiIndex(tuple(i for i in range(1, n + 1) if i not in present), n)


def index_sum(a: MultiIndex, k: Sequence[float]) -> float:
    """``K_a``: sum of the values of ``k`` over the positions in ``a``.

    ``k`` may be a :class:`~qconvex.exterior_operators.PrincipalSpectrum` or
    any sequence of length ``a.n``.
    """
    values = getattr(k, "values", k)
    if len(values) != a.n:
        raise DomainError(f"spectrum has length {len(values)}, multi-index expects {a.n}")
    return float(sum(values[i - 1] for i in a.elements))
