from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperode import geometry as gm
from hyperode.errors import DegeneracyError, DomainError
from hyperode.expr import HFunction
from hyperode.suite import random_point

from cases import random_hs


def fd_riemann(h, p: gm.MhPoint, step=1e-4):
    """R^a_{bcd} by differencing the connection; independent of the closed forms."""
    def gamma(x, phi):
        return gm.christoffel(h, gm.MhPoint(x, phi)).as_array()

    dG = np.zeros((2, 2, 2, 2))  # dG[c] = d_c Gamma
    for c, (dx, dp) in enumerate(((step, 0.0), (0.0, step))):
        plus = gamma(p.x + dx, p.phi + dp)
        minus = gamma(p.x - dx, p.phi - dp)
        plus2 = gamma(p.x + 2 * dx, p.phi + 2 * dp)
        minus2 = gamma(p.x - 2 * dx, p.phi - 2 * dp)
        dG[c] = (8 * (plus - minus) - (plus2 - minus2)) / (12 * step)
    G = gamma(p.x, p.phi)
    R = np.zeros((2, 2, 2, 2))
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    R[a, b, c, d] = (dG[c][a, d, b] - dG[d][a, c, b]
                                     + G[a, c, :] @ G[:, d, b] - G[a, d, :] @ G[:, c, b])
    return R


def well_separated_points(h, n, seed):
    rng = np.random.default_rng(seed)
    return [random_point(h, rng, margin=0.2) for _ in range(n)]


@pytest.mark.parametrize("text", random_hs(6, seed=21) + ["0", "-1", "x^2 - 1"])
def test_fd_riemann_contracts_to_minus_metric(text):
    h = HFunction.parse(text)
    for p in well_separated_points(h, 8, seed=5):
        R = fd_riemann(h, p)
        g = gm.metric(h, p).as_array()
        ricci = np.einsum("abad->bd", R)
        scale = 1 + np.abs(g).max()
        assert np.max(np.abs(ricci + g)) <= 1e-6 * scale
        # sectional curvature from the lowered component
        R_low = np.einsum("ae,ebcd->abcd", g, R)
        K = R_low[0, 1, 0, 1] / np.linalg.det(g)
        assert K == pytest.approx(-1.0, abs=1e-6)
        # closed form agrees with the finite-difference tensor
        assert gm.riemann_xphixphi(h, p) == pytest.approx(R_low[0, 1, 0, 1],
                                                          rel=1e-6, abs=1e-8)
        assert gm.ricci(h, p).as_array() == pytest.approx(ricci, rel=1e-6, abs=1e-8)


@pytest.mark.parametrize("text", random_hs(8, seed=22))
def test_closed_form_curvature(text):
    h = HFunction.parse(text)
    for p in well_separated_points(h, 25, seed=6):
        assert gm.sectional_curvature(h, p) == pytest.approx(-1.0, abs=1e-12)
        g = gm.metric(h, p).as_array()
        R = gm.ricci(h, p).as_array()
        assert np.max(np.abs(R + g) / (1 + np.abs(g))) <= 1e-12


@pytest.mark.parametrize("text", random_hs(6, seed=23) + ["sin(3*x)", "exp(x)"])
def test_christoffel_matches_fd(text):
    h = HFunction.parse(text)
    for p in well_separated_points(h, 10, seed=7):
        a = gm.christoffel(h, p).as_array()
        b = gm.fd_christoffel(h, p).as_array()
        assert np.max(np.abs(a - b) / (1 + np.abs(a))) <= 1e-7


def test_metric_components():
    h = HFunction.parse("x")
    g = gm.metric(h, gm.MhPoint(2.0, 0.5))
    assert g.g_xx == pytest.approx((2.0 - 0.25) ** 2 / 0.25)
    assert g.g_phiphi == pytest.approx(4.0)
    assert g.g_xphi == 0.0
    assert g.det == pytest.approx(g.g_xx * g.g_phiphi)


def test_locus_is_rejected():
    h = HFunction.parse("x")
    with pytest.raises(DegeneracyError):
        gm.christoffel(h, gm.MhPoint(4.0, 2.0))
    with pytest.raises(DegeneracyError):
        gm.sectional_curvature(h, gm.MhPoint(1.0, 1.0 + 1e-12))
    with pytest.raises(DomainError):
        gm.MhPoint(0.0, -1.0)


def test_metric_is_degenerate_on_locus():
    h = HFunction.parse("x^2")
    g = gm.metric(h, gm.MhPoint(1.5, 1.5))
    assert g.det == 0.0


@given(st.floats(-3, 3), st.floats(0.05, 4), st.floats(-4, 4))
def test_constant_h_curvature_property(x, phi, c):
    h = HFunction.constant(c)
    if abs(phi * phi - c) < 1e-3 * (1 + abs(c)):
        return
    p = gm.MhPoint(x, phi)
    assert gm.sectional_curvature(h, p) == pytest.approx(-1.0, abs=1e-12)
