from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperode import halfplane as hp
from hyperode.errors import PreconditionError
from hyperode.expr import HFunction
from hyperode.geodesic import MinusOmega2, closed_form_geodesic, integrate_explicit, integrate_geodesic
from hyperode.geometry import MhPoint
from hyperode.solutions import FunctionSolution, build_solution_pair, direct_solve, wronskian
from hyperode.suite import _unit_state, random_initial_data, random_point

from cases import random_hs


def oracle_spec(h, x0, span, rng, X0=0.0, sign=1):
    u1 = direct_solve(h, x0, 1.0, float(rng.uniform(0.3, 1.5)), span)
    u2 = direct_solve(h, x0, 1.0, -float(rng.uniform(0.3, 1.5)), span)
    return hp.DiffeoSpec(u1, u2, float(wronskian(u1, u2, x0)), X0, sign)


def xho(omega, xbar, x, phi):
    """Closed-form image of the oscillator chart written with zeta = cos^2."""
    z = np.cos(omega * (x - xbar)) ** 2
    den = phi * phi * z + omega * omega * (1 - z)
    X = (omega * omega - phi * phi) * np.sqrt(z * (1 - z)) / (omega * den)
    return X, phi / den


@pytest.mark.parametrize("text", random_hs(6, seed=51) + ["0", "-1", "x"])
@pytest.mark.parametrize("sign", [1, -1])
def test_chart_is_a_local_isometry(text, sign):
    h = HFunction.parse(text)
    rng = np.random.default_rng(3)
    spec = oracle_spec(h, 0.0, (-0.5, 0.5), rng, X0=float(rng.normal()), sign=sign)
    for _ in range(10):
        p = random_point(h, rng, x_range=(-0.45, 0.45), margin=0.2)
        assert hp.pullback_check(spec, h, p) <= 1e-7
        J = hp.jacobian(spec, h, p)
        F = hp.fd_jacobian(spec, p)
        assert np.max(np.abs(J - F)) <= 1e-6 * (1 + np.max(np.abs(J)))
        dj = hp.jacobian_det(spec, h, p)
        assert np.linalg.det(J) == pytest.approx(dj, rel=1e-9)
        assert abs(np.linalg.det(F) - dj) <= 1e-6 * abs(dj)


@pytest.mark.parametrize("text", random_hs(4, seed=52) + ["x^2 - 3"])
@pytest.mark.parametrize("mode", ["closed", "fd"])
def test_pde_complete_integral(text, mode):
    h = HFunction.parse(text)
    rng = np.random.default_rng(4)
    spec = oracle_spec(h, 0.0, (-0.5, 0.5), rng)
    for _ in range(8):
        p = random_point(h, rng, x_range=(-0.45, 0.45), margin=0.2)
        A, B = rng.normal(size=2)
        assert hp.pde_residual(spec, h, p, A, B, mode=mode) <= 1e-7


def test_pde_residual_detects_a_non_solution():
    h = HFunction.parse("x")
    u1 = FunctionSolution(lambda x: 1 + x * x, lambda x: 2 * x)  # not a solution
    u2 = FunctionSolution(lambda x: x + 0 * x, lambda x: 1 + 0 * x)
    spec = hp.DiffeoSpec(u1, u2, float(wronskian(u1, u2, 0.3)))
    assert hp.pde_residual(spec, h, MhPoint(0.3, 1.5), mode="fd") > 1e-3


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
def test_exponential_chart_closed_form_and_inverse(omega):
    spec = hp.exponential_spec(omega)
    xs, phis = np.meshgrid(np.linspace(-1, 1, 20), np.linspace(0.1, 3, 20))
    X, Y = hp.map_points(spec, xs.ravel(), phis.ravel())
    Xc, Yc = hp.exponential_map(omega, xs.ravel(), phis.ravel())
    assert np.max(np.abs(X - Xc) / (1 + np.abs(Xc))) <= 1e-12
    assert np.max(np.abs(Y - Yc) / Yc) <= 1e-12
    x_back, phi_back = hp.exponential_inverse(omega, Xc, Yc)
    assert np.max(np.abs(x_back - xs.ravel())) <= 1e-12
    assert np.max(np.abs(phi_back / phis.ravel() - 1)) <= 1e-12


@pytest.mark.parametrize("omega,phi", [(1.0, 0.5), (1.0, 1.7), (2.0, 0.8), (0.5, 0.2)])
def test_oscillator_fixed_phi_image_is_circle(omega, phi):
    spec = hp.trig_spec(omega)
    xs = np.linspace(0, math.pi / (2 * omega), 60)[1:-1]
    X, Y = hp.map_points(spec, xs, phi)
    Xc, Yc = xho(omega, 0.0, xs, phi)
    assert np.max(np.abs(X - Xc)) <= 1e-12 and np.max(np.abs(Y - Yc)) <= 1e-12
    (cx, cy), r, res = hp.fit_circle(X, Y)
    (ex, ey), er = hp.trig_fixed_phi_circle(omega, phi)
    assert (cx, cy, r) == pytest.approx((ex, ey, er), abs=1e-10)
    assert res <= 1e-12
    side = np.sign(X)
    assert np.all(side == (1 if phi < omega else -1))
    # Y is monotonic along the line
    assert np.all(np.diff(Y) > 0) or np.all(np.diff(Y) < 0)


@pytest.mark.parametrize("text", random_hs(5, seed=53) + ["0", "sin(x) + 2"])
def test_geodesic_maps_to_vertical_line_under_own_chart(text):
    h = HFunction.parse(text)
    rng = np.random.default_rng(5)
    x0, phi0, dphi0 = random_initial_data(h, rng)
    geo = integrate_explicit(h, x0, phi0, dphi0)
    pair = build_solution_pair(h, geo)
    X0 = float(rng.normal())
    spec = hp.spec_from_pair(pair, X0=X0, sign=int(rng.choice([-1, 1])))
    xs = np.linspace(*geo.interior(0.02), 41)
    X, _ = hp.map_points(spec, xs, geo.phi(xs))
    assert np.max(np.abs(X - X0)) <= 1e-8
    img = hp.geodesic_image(spec, geo)
    assert isinstance(img, hp.VerticalLine)
    assert img.X0 == pytest.approx(X0, abs=1e-8)


@pytest.mark.parametrize("text", ["0", "x^2 - 3", "1 + 0.5*sin(x)"])
def test_other_geodesic_maps_to_semicircle(text):
    h = HFunction.parse(text)
    rng = np.random.default_rng(6)
    spec = oracle_spec(h, 0.0, (-0.6, 0.6), rng)
    geo = integrate_explicit(h, 0.0, math.sqrt(abs(h(0.0)) + 1.3), 0.35)
    lo, hi = geo.interior(0.02)
    xs = np.linspace(max(lo, -0.55), min(hi, 0.55), 41)
    img = hp.geodesic_image(spec, geo, xs=xs)
    assert isinstance(img, hp.Semicircle)
    assert img.residual <= 1e-7


@pytest.mark.parametrize("text", random_hs(5, seed=54) + ["-1", "x"])
def test_killing_charges(text):
    h = HFunction.parse(text)
    rng = np.random.default_rng(8)
    x0, phi0, dphi0 = random_initial_data(h, rng)
    span = (x0 - 0.5, x0 + 0.5)
    spec = oracle_spec(h, x0, span, rng, X0=float(rng.normal()), sign=int(rng.choice([-1, 1])))
    traj = integrate_geodesic(h, _unit_state(h, x0, phi0, dphi0), (-1.0, 1.0))
    inside = (traj.states[:, 0] > span[0] + 0.02) & (traj.states[:, 0] < span[1] - 0.02)
    i = np.flatnonzero(inside)
    sub = type(traj)(h, traj.s[i], traj.states[i], traj.derivs[i], traj.termination,
                     int(np.argmin(np.abs(traj.s[i]))))
    kc = hp.killing_charges(spec, h, sub)
    assert kc.drift <= 1e-8
    r, skipped = hp.eq21_residual(spec, kc, sub.states[:, 0], sub.states[:, 1])
    assert r <= 1e-6
    assert skipped < len(i)


def test_charges_of_a_vertical_line():
    # the geodesic X = 0, Y = e^s has A2 = 1 and A1 = A3 = 0
    s = np.linspace(-1, 1, 5)
    A1, A2, A3 = hp.charges_at(0 * s, np.exp(s), 0 * s, np.exp(s))
    assert np.allclose(A1, 0) and np.allclose(A2, 1) and np.allclose(A3, 0)


@pytest.mark.parametrize("text", ["x", "-1 + 0.3*x^2"])
def test_inverse_by_newton(text):
    h = HFunction.parse(text)
    rng = np.random.default_rng(10)
    spec = oracle_spec(h, 0.0, (-0.5, 0.5), rng)
    for _ in range(5):
        p = random_point(h, rng, x_range=(-0.4, 0.4), margin=0.3)
        q = hp.to_halfplane(spec, p)
        guess = MhPoint(p.x + 0.02, p.phi * 1.02)
        back = hp.from_halfplane(spec, h, q, guess)
        assert back.x == pytest.approx(p.x, abs=1e-10)
        assert back.phi == pytest.approx(p.phi, rel=1e-10)


def test_spec_validation_and_with_u1():
    u1 = FunctionSolution(np.exp, np.exp)
    with pytest.raises(PreconditionError):
        hp.DiffeoSpec(u1, u1, 0.0)
    with pytest.raises(ValueError):
        hp.DiffeoSpec(u1, u1, 1.0, sign=2)
    spec = hp.exponential_spec(1.0)
    s = spec.with_u1(2.0, 1.0)
    assert s.W == pytest.approx(4.0)
    assert s.wronskian_drift(np.linspace(-1, 1, 5)) <= 1e-14
    s0 = spec.with_u1(0.0, 3.0)
    assert s0.wronskian_drift(np.linspace(-1, 1, 5)) <= 1e-14
    with pytest.raises(PreconditionError):
        spec.with_u1(0.0, 0.0)


def test_axis_circle_fit():
    t = np.linspace(0.2, 2.9, 30)
    X, Y = 1.5 + 2 * np.cos(t), 2 * np.sin(t)
    c, r, res = hp.fit_axis_circle(X, Y)
    assert (c, r) == pytest.approx((1.5, 2.0), abs=1e-12) and res <= 1e-12


def test_curve_export():
    csv = hp.curve_csv([0.0, 1.0], [1.0, 2.0], [3.0, 4.0])
    assert csv.splitlines()[0] == "s_or_x,X,Y"
    assert csv.splitlines()[2] == "1.0,2.0,4.0"
    svg = hp.curve_svg([("g", np.array([0.0, 1.0]), np.array([1.0, 2.0]))])
    assert svg.startswith("<?xml") and "<polyline" in svg and svg.rstrip().endswith("</svg>")


@given(st.floats(-1, 1), st.floats(0.05, 5), st.floats(0.3, 3))
def test_exponential_chart_round_trip_property(x, phi, omega):
    X, Y = hp.exponential_map(omega, x, phi)
    xb, pb = hp.exponential_inverse(omega, X, Y)
    assert float(xb) == pytest.approx(x, abs=1e-12)
    assert float(pb) == pytest.approx(phi, rel=1e-10)


def test_closed_form_geodesic_vertical_in_exponential_chart():
    geo = closed_form_geodesic(MinusOmega2(1.0), 0.0)
    spec = hp.exponential_spec(1.0)
    xs = np.linspace(-2, 2, 9)
    X, _ = hp.map_points(spec, xs, geo.phi(xs))
    assert np.max(np.abs(X)) <= 1e-15
