from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import ortho_group

from oracles import brute_tmin
from qconvex.convexity_bounds import (
    MarginStatus,
    Rigidity,
    bochner_pointwise_bound,
    qconvex_margin,
    rigid_spectrum,
    rigidity_check,
    tmin,
    tmin_lower_bound,
)
from qconvex.curvature_bochner import TwoVectorOperator, gauss_split, kyfan_average
from qconvex.errors import DomainError
from qconvex.exterior_operators import PrincipalSpectrum, dense_spectrum
from qconvex.sweeps import random_ambient, random_qnonnegative


def test_margin_examples():
    m = qconvex_margin((-1, 1, 1, 1), 2)
    assert m.margin == 0 and m.status is MarginStatus.NONNEGATIVE
    assert qconvex_margin((0.5, 1, 2), 1).status is MarginStatus.STRICT
    assert qconvex_margin((0.5, 1, 2), 3).status is MarginStatus.STRICT
    m = qconvex_margin((-2, 1, 1, 1), 2)
    assert m.margin == -1 and m.status is MarginStatus.VIOLATED
    with pytest.raises(DomainError):
        qconvex_margin((1, 2), 3)


def test_margin_implies_larger_orders():
    m = qconvex_margin((-1, 1, 1, 1), 2)
    assert m.implies(3) and not m.implies(1)
    for q in (3, 4):
        assert qconvex_margin((-1, 1, 1, 1), q).nonnegative


def test_tmin_bound_examples():
    assert tmin_lower_bound(4, 1, 2, 2.0) == pytest.approx(-3.0)
    assert tmin((-1, 1, 1, 1), 1) == -3.0
    assert tmin_lower_bound(6, 3, 3, 7.0) == 0.0
    assert tmin_lower_bound(6, 2, 3, 0.0) == 0.0
    with pytest.raises(DomainError):
        tmin_lower_bound(6, 2, 5, 1.0)  # p > n - q


def test_tmin_matches_enumeration(rng):
    for _ in range(200):
        n = int(rng.integers(3, 9))
        k = np.sort(rng.normal(size=n))
        p = int(rng.integers(1, n + 1))
        assert tmin(k, p) == pytest.approx(brute_tmin(k, p), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 8), st.data())
def test_bound_validity(n, data):
    q = data.draw(st.integers(1, n - 1))
    p = data.draw(st.integers(1, min(q, n - q)))
    seed = data.draw(st.integers(0, 2**32 - 1))
    mode = data.draw(st.sampled_from(["strict", "boundary"]))
    k = random_qnonnegative(np.random.default_rng(seed), n, q, mode)
    tr = k.sum()
    lam = brute_tmin(k, p)
    assert lam >= tmin_lower_bound(n, p, q, tr) - 1e-9 * (1 + tr**2)
    if mode == "strict" and p < q:
        assert lam > tmin_lower_bound(n, p, q, tr)


def test_rigidity_examples():
    assert rigidity_check((-1, 1, 1, 1), 1, 2) is Rigidity.BOUNDARY_RIGID
    assert rigidity_check((0, 1, 1, 1), 1, 2) is Rigidity.INTERIOR
    assert tmin((0, 1, 1, 1), 1) == 0 > tmin_lower_bound(4, 1, 2, 3.0)
    assert rigidity_check((-2, 1, 1, 1), 1, 2) is Rigidity.INVALID


@pytest.mark.parametrize("seed", range(30))
def test_q_positive_never_rigid(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 9))
    q = int(rng.integers(2, n))
    if min(q - 1, n - q) < 1:
        return
    p = int(rng.integers(1, min(q - 1, n - q) + 1))
    k = random_qnonnegative(rng, n, q, "strict")
    assert rigidity_check(k, p, q) is Rigidity.INTERIOR


@pytest.mark.parametrize("n,p,q", [(4, 1, 2), (6, 1, 3), (6, 2, 3), (7, 2, 4), (8, 3, 5), (8, 1, 7)])
def test_rigid_family_attains_bound(rng, n, p, q):
    for t in (0.25, 1.0, 3.0):
        k = rigid_spectrum(n, p, q, t, rng.dirichlet(np.ones(p)))
        assert qconvex_margin(k, q).margin == pytest.approx(0.0, abs=1e-12)
        assert rigidity_check(k, p, q) is Rigidity.BOUNDARY_RIGID
        assert tmin(k, p) == pytest.approx(tmin_lower_bound(n, p, q, t), abs=1e-12)


def test_perturbations_leave_the_boundary(rng):
    n, p, q = 6, 1, 3
    k0 = np.array(rigid_spectrum(n, p, q, 1.0).values)
    for _ in range(200):
        v = np.sort(k0 + rng.normal(size=n) * 1e-3)
        margin = v[:q].sum()
        if margin < 0:
            v = v + (-margin / q + 1e-4)
        k = PrincipalSpectrum(v)
        assert rigidity_check(k, p, q) is Rigidity.INTERIOR
        assert tmin(k, p) - tmin_lower_bound(n, p, q, k.trace) > 1e-12


def test_pointwise_bound_examples():
    assert bochner_pointwise_bound(0.7, 6, 2, 2, 3.0) == pytest.approx(2 * 4 * 0.7)
    # 3 * (1 - 1 * 4 * 1/4)
    assert bochner_pointwise_bound(1.0, 4, 2, 1, 0.5) == 0.0
    assert bochner_pointwise_bound(-0.3, 7, 3, 2, 0.0) == pytest.approx(2 * 5 * -0.3)
    with pytest.raises(DomainError):
        bochner_pointwise_bound(1.0, 4, 4, 1, 0.5)


@pytest.mark.parametrize("seed", range(60))
def test_pointwise_bound_below_full_operator(seed):
    rng = np.random.default_rng(5000 + seed)
    n = int(rng.integers(3, 7))
    p = int(rng.integers(1, n // 2 + 1))
    q = int(rng.integers(1, n))
    c = float(rng.uniform(-2, 2))
    R = TwoVectorOperator(n + 1, random_ambient(rng, n, p, c))
    assert kyfan_average(R, n - p) >= c - 1e-12
    k = random_qnonnegative(rng, n, q, "boundary" if seed % 3 == 0 else "strict")
    Q = ortho_group.rvs(n, random_state=rng)
    A = Q @ np.diag(k) @ Q.T
    H = k.sum() / n
    F = ortho_group.rvs(n + 1, random_state=rng)[:, :n]
    ells = [l for l in range(1, p + 1) if l <= min(q, n - q) or l >= q]
    for ell in ells:
        *_, B = gauss_split(R, F, (A + A.T) / 2, ell)
        bound = bochner_pointwise_bound(c, n, q, ell, H)
        assert bound <= dense_spectrum(B)[0] + 1e-9 * (1 + abs(bound))
