from math import sqrt

import numpy as np
import pytest

from qconvex.betti_engine import pinching_threshold
from qconvex.convexity_bounds import (
    MarginStatus,
    bochner_pointwise_bound,
    qconvex_margin,
    tmin,
)
from qconvex.curvature_bochner import TwoVectorOperator, gauss_split
from qconvex.errors import DomainError
from qconvex.exterior_operators import dense_spectrum
from qconvex.sphere_lab import (
    TorusParams,
    sharpness_scan,
    torus_mean_curvature,
    torus_qconvexity_threshold,
    torus_spectrum,
)

ADMISSIBLE = [(n, p, q) for n in range(3, 9) for q in range(2, n) for p in range(1, min(q - 1, n - q) + 1)]


def test_torus_spectrum_anchor():
    k = torus_spectrum(TorusParams(4, 1, 1 / sqrt(2)))
    np.testing.assert_allclose(k.values, [-1, 1, 1, 1], atol=1e-15)


def test_torus_limits():
    k = torus_spectrum(TorusParams(5, 2, 1 - 1e-9))
    assert -1e-3 < k.values[0] < 0 and k.values[-1] > 1e3
    with pytest.raises(DomainError):
        TorusParams(4, 1, 1.0)
    with pytest.raises(DomainError):
        TorusParams(4, 4, 0.5)


@pytest.mark.parametrize("n,p", [(3, 1), (5, 2), (8, 3)])
def test_trace_matches_mean_curvature(n, p):
    for r in np.linspace(sqrt(p / n) + 1e-3, 0.99, 40):
        t = TorusParams(n, p, float(r))
        assert torus_spectrum(t).trace / n == pytest.approx(torus_mean_curvature(t), rel=1e-12, abs=1e-12)


def test_mean_curvature_examples():
    assert torus_mean_curvature(TorusParams(4, 1, 1 / sqrt(2))) == pytest.approx(0.5, abs=1e-15)
    assert torus_mean_curvature(TorusParams(6, 2, sqrt(2 / 6))) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n,p,q", ADMISSIBLE)
def test_mean_curvature_at_threshold_equals_pinching(n, p, q):
    H = torus_mean_curvature(TorusParams(n, p, sqrt(p / q)))
    assert H == pytest.approx((n - q) / n * sqrt(p / (q - p)), rel=1e-12)
    assert H == pytest.approx(pinching_threshold(n, q, p, 1.0), rel=1e-12)


def test_qconvexity_threshold():
    assert torus_qconvexity_threshold(1, 2) == pytest.approx(1 / sqrt(2))
    with pytest.raises(DomainError):
        torus_qconvexity_threshold(2, 2)


@pytest.mark.parametrize("n,p,q", ADMISSIBLE)
def test_margin_vanishes_at_threshold_and_grows(n, p, q):
    r0 = torus_qconvexity_threshold(p, q)
    margin = lambda r: qconvex_margin(torus_spectrum(TorusParams(n, p, r)), q).margin
    assert margin(r0) == pytest.approx(0.0, abs=1e-12)
    h = 1e-6
    assert (margin(r0 + h) - margin(r0 - h)) / (2 * h) > 0
    assert qconvex_margin(torus_spectrum(TorusParams(n, p, r0 + 1e-3)), q).status is MarginStatus.STRICT


def test_scan_anchor_row():
    rows = sharpness_scan(4, 1, 2, [1 / sqrt(2), 0.8, 0.95])
    first = rows[0]
    assert first.q_margin == pytest.approx(0, abs=1e-12)
    assert first.H == pytest.approx(0.5, abs=1e-12)
    assert first.pinching_slack == pytest.approx(0, abs=1e-12)
    assert first.lambda_min == pytest.approx(-3, abs=1e-12)
    assert first.tmin_bound == pytest.approx(-3, abs=1e-12)
    assert first.rigidity == "boundary_rigid"
    assert all(r.margin_status == "strict" and r.rigidity == "interior" for r in rows[1:])


def test_scan_rejects_bad_input():
    with pytest.raises(DomainError):
        sharpness_scan(4, 1, 2, [])
    with pytest.raises(DomainError):
        sharpness_scan(4, 1, 2, [0.4])
    with pytest.raises(DomainError):
        sharpness_scan(4, 2, 2, [0.9])


@pytest.mark.parametrize("n,p,q", [(n, p, q) for n, p, q in ADMISSIBLE if p > 1])
def test_lower_torus_is_strictly_pinched(n, p, q):
    H = torus_mean_curvature(TorusParams(n, p - 1, sqrt((p - 1) / q)))
    assert H < pinching_threshold(n, q, p, 1.0)


@pytest.mark.parametrize("n,p,q", ADMISSIBLE)
def test_exact_sharpness(n, p, q):
    H = torus_mean_curvature(TorusParams(n, p, sqrt(p / q)))
    assert bochner_pointwise_bound(1.0, n, q, p, H) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n,p,q", [(4, 1, 2), (6, 2, 3), (7, 1, 3)])
def test_sphere_ambient_bochner(n, p, q):
    for r in (sqrt(p / q), 0.9):
        k = torus_spectrum(TorusParams(n, p, r))
        *_, B = gauss_split(TwoVectorOperator.identity(n + 1), np.eye(n + 1)[:, :n], np.diag(k.values), p)
        assert dense_spectrum(B)[0] == pytest.approx(p * (n - p) + tmin(k, p), abs=1e-10)
