from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from oracles import count_subsets
from qconvex.errors import DomainError
from qconvex.exterior_basis import MultiIndex, enumerate_basis, index_sum, star_complement


def els(indices):
    return [a.elements for a in indices]


def test_enumerate_small():
    assert els(enumerate_basis(3, 2)) == [(1, 2), (1, 3), (2, 3)]
    assert els(enumerate_basis(4, 1)) == [(1,), (2,), (3,), (4,)]


def test_enumerate_cardinality_matches_subset_count():
    assert len(enumerate_basis(8, 4)) == count_subsets(8, 4) == 70


@pytest.mark.parametrize("n", range(1, 11))
def test_enumerate_sorted_distinct(n):
    for p in range(1, n + 1):
        basis = els(enumerate_basis(n, p))
        assert len(basis) == count_subsets(n, p)
        assert len(set(basis)) == len(basis)
        assert basis == sorted(basis)


@pytest.mark.parametrize("p", [0, -1, 5])
def test_enumerate_rejects_bad_degree(p):
    with pytest.raises(DomainError):
        enumerate_basis(4, p)


def test_enumerate_rejects_huge_dimension():
    with pytest.raises(DomainError):
        enumerate_basis(17, 2)


def test_multiindex_invariants():
    with pytest.raises(DomainError):
        MultiIndex((2, 1), 3)
    with pytest.raises(DomainError):
        MultiIndex((1, 4), 3)


def test_star_complement_examples():
    assert star_complement(MultiIndex((1, 3), 4)).elements == (2, 4)
    assert star_complement(MultiIndex((1, 2, 3), 7)).elements == (4, 5, 6, 7)


def test_star_is_involution_exhaustive():
    basis = enumerate_basis(6, 3)
    assert len(basis) == 20
    for a in basis:
        assert star_complement(star_complement(a)) == a


def test_index_sum_examples():
    k = (-1, 1, 2, 3)
    assert index_sum(MultiIndex((1, 2), 4), k) == -1 + 1
    assert index_sum(MultiIndex((2, 3), 4), k) == 1 + 2
    assert index_sum(MultiIndex((1, 2, 3, 4), 4), k) == sum(k)


def test_index_sum_dimension_mismatch():
    with pytest.raises(DomainError):
        index_sum(MultiIndex((1,), 3), (1.0, 2.0))


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=9), st.data())
def test_complement_sums_to_trace(values, data):
    n = len(values)
    p = data.draw(st.integers(1, n))
    for a in enumerate_basis(n, p):
        assert index_sum(a, values) + index_sum(star_complement(a), values) == sum(values)
