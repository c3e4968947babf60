"""Acceptance gate: ten criteria at their stated tolerances, one report line each."""

from __future__ import annotations

import functools
import math

import numpy as np

from hyperode import geometry as gm
from hyperode import halfplane as hp
from hyperode.expr import HFunction
from hyperode.geodesic import (GeodesicState, MinusOmega2, PlusOmega2, Zero, closed_form_domain,
                               closed_form_geodesic, closed_form_h, explicit_rhs,
                               integrate_explicit, integrate_geodesic)
from hyperode.solutions import (FunctionSolution, build_solution_pair, direct_solve,
                                geodesic_from_pair,
                                phi_from_pair, riccati_residual, theta, verify_reconstruction,
                                wronskian)
from hyperode.suite import _unit_state, random_point

from cases import jet_riemann, random_hs


class Gate:
    """Worst value per named quantity against its tolerance."""

    def __init__(self):
        self.items: dict[str, list[float]] = {}

    def add(self, name: str, value: float, tol: float) -> None:
        value = float(value) if math.isfinite(value) else math.inf
        worst = self.items.setdefault(name, [0.0, tol])
        worst[0] = max(worst[0], value)

    @property
    def passed(self) -> bool:
        return all(v <= t for v, t in self.items.values())

    def detail(self) -> str:
        return ", ".join(f"{k} {v:.2e} <= {t:.0e}" for k, (v, t) in self.items.items())

    def report(self, record, number, title):
        record(number, title, self.passed, self.detail())
        assert self.passed, self.detail()


# --------------------------------------------------------------------------- shared sweep


@functools.lru_cache(maxsize=None)
def sweep_case(i: int):
    """Random C1 coefficient h with admissible initial data, its geodesic and solution pair."""
    text = random_hs(10, seed=2024)[i]
    h = HFunction.parse(text)
    rng = np.random.default_rng(1000 + i)
    x0 = float(rng.uniform(-0.5, 0.5))
    phi0 = math.sqrt(abs(float(h(x0))) + rng.uniform(0.5, 2.0))
    dphi0 = float(rng.uniform(-0.5, 0.5))
    geo = integrate_explicit(h, x0, phi0, dphi0)
    pair = build_solution_pair(h, geo)
    lo, hi = geo.interior(0.02)
    lo, hi = max(lo, pair.domain[0]), min(hi, pair.domain[1])
    return h, geo, pair, (lo, hi)


# --------------------------------------------------------------------------- criteria


def test_criterion_01_curvature(record_criterion):
    gate = Gate()
    for j, text in enumerate(random_hs(20, seed=1)):
        h = HFunction.parse(text)
        rng = np.random.default_rng(j)
        for _ in range(50):
            p = random_point(h, rng, x_range=(-2.0, 2.0), phi_range=(0.05, 4.0), margin=1e-3)
            g = gm.metric(h, p).as_array()
            gate.add("|K+1|", abs(gm.sectional_curvature(h, p) + 1), 1e-10)
            R = gm.ricci(h, p).as_array()
            gate.add("|Ric+g|", np.max(np.abs(R + g) / (1 + np.abs(g))), 1e-10)
            # contraction of the full tensor built from the connection and its exact derivatives
            full = jet_riemann(h, p.x, p.phi)
            ric = np.einsum("abad->bd", full)
            gate.add("|Ric(connection)+g|", np.max(np.abs(ric + g) / (1 + np.abs(g))), 1e-10)
    gate.report(record_criterion, 1, "sectional curvature -1 and Ricci = -g")


def test_criterion_02_flat_case(record_criterion):
    gate = Gate()
    kind = Zero(2.0, 0.0)
    x0, xm, xp = 0.0, -2.0, 2.0
    exact = closed_form_geodesic(kind, x0)
    phi0, dphi0, _ = exact(x0)
    h = closed_form_h(kind)
    geo = integrate_explicit(h, x0, phi0, dphi0)
    pair = build_solution_pair(h, geo)
    xs = np.linspace(xm + 0.02 * (xp - xm), xp - 0.02 * (xp - xm), 201)
    gate.add("u_top", np.max(np.abs(pair.top.u(xs) - (xs - xm) / (x0 - xm))), 1e-7)
    gate.add("u_bot", np.max(np.abs(pair.bot.u(xs) - (xs - xp) / (x0 - xp))), 1e-7)
    W = (xp - xm) / ((xp - x0) * (x0 - xm))
    gate.add("W_t-b", abs(pair.wronskian - W), 1e-9)
    gate.report(record_criterion, 2, "h = 0 linear solutions and Wronskian")


def test_criterion_03_exponential_case(record_criterion):
    gate = Gate()
    for omega in (0.5, 1.0, 2.0):
        h = closed_form_h(MinusOmega2(omega))
        geo = integrate_explicit(h, 0.0, omega, 0.0, max_extent=4.0)
        pair = build_solution_pair(h, geo)
        xs = np.linspace(-3, 3, 121)
        gate.add("u_top", np.max(np.abs(pair.top.u(xs) - np.exp(omega * xs))
                                 / np.exp(omega * xs)), 1e-8)
        gate.add("u_bot", np.max(np.abs(pair.bot.u(xs) - np.exp(-omega * xs))
                                 / np.exp(-omega * xs)), 1e-8)
        spec = hp.exponential_spec(omega)
        xg, pg = np.meshgrid(np.linspace(-1, 1, 20), np.linspace(0.25 * omega, 4 * omega, 20))
        x, p = xg.ravel(), pg.ravel()
        X, Y = hp.map_points(spec, x, p)
        Xc, Yc = hp.exponential_map(omega, x, p)
        gate.add("chart vs closed map", max(np.max(np.abs(X - Xc) / (1 + np.abs(Xc))),
                                            np.max(np.abs(Y - Yc) / Yc)), 1e-12)
        xb, pb = hp.exponential_inverse(omega, X, Y)
        gate.add("inverse round trip", max(np.max(np.abs(xb - x)), np.max(np.abs(pb - p) / p)),
                 1e-12)
    gate.report(record_criterion, 3, "h = -omega^2 exponentials and global chart")


def test_criterion_04_oscillator_case(record_criterion):
    gate = Gate()
    for omega, xbar, xtilde, k in ((1.0, 0.0, 0.5236, 0), (2.0, 0.3, 0.4, 1),
                                   (0.5, -1.0, 1.2, 0)):
        kind = PlusOmega2(omega, xbar, xtilde, k)
        lo, hi = closed_form_domain(kind)
        u1 = FunctionSolution(lambda x: np.cos(omega * (x - xbar)),
                              lambda x: -omega * np.sin(omega * (x - xbar)))
        u2 = FunctionSolution(lambda x: np.sin(omega * (x - xbar - xtilde)),
                              lambda x: omega * np.cos(omega * (x - xbar - xtilde)))
        xs = np.linspace(lo, hi, 202)[1:-1]
        got = phi_from_pair(u1, u2, xs)
        want = omega * np.sqrt(np.tan(omega * (xs - xbar))
                               / np.tan(omega * (xs - xbar - xtilde)))
        gate.add("Phi vs closed form", np.max(np.abs(got - want) / want), 1e-9)
        exact = closed_form_geodesic(kind)
        phi0, dphi0, _ = exact(exact.x0)
        geo = integrate_explicit(closed_form_h(kind), exact.x0, phi0, dphi0)
        gate.add("x_- vs closed form", abs(geo.x_minus - lo), 1e-6)
        gate.add("x_+ vs closed form", abs(geo.x_plus - hi), 1e-6)
    for omega, phi in ((1.0, 0.5), (1.0, 1.6), (2.0, 0.7)):
        spec = hp.trig_spec(omega)
        xs = np.linspace(0, math.pi / (2 * omega), 101)[1:-1]
        X, Y = hp.map_points(spec, xs, phi)
        (cx, cy), r, _ = hp.fit_circle(X, Y)
        (ex, ey), er = hp.trig_fixed_phi_circle(omega, phi)
        gate.add("circle centre", math.hypot(cx - ex, cy - ey), 1e-8)
        gate.add("circle radius", abs(r - er), 1e-8)
        wrong_side = np.count_nonzero(np.sign(X) != (1 if phi < omega else -1))
        gate.add("half of the circle", wrong_side, 0)
    gate.report(record_criterion, 4, "h = +omega^2 geodesic, domain and fixed-Phi circles")


def test_criterion_05_forward_route(record_criterion):
    gate = Gate()
    for i in range(10):
        h, geo, pair, (lo, hi) = sweep_case(i)
        xs = np.linspace(lo, hi, 81)
        for sol in (pair.top, pair.bot):
            u0, du0 = sol(geo.x0)
            ref = direct_solve(h, geo.x0, u0, du0, (lo, hi))
            gate.add("u vs direct", np.max(np.abs(sol.u(xs) - ref.u(xs)) / np.abs(ref.u(xs))),
                     1e-6)
    gate.report(record_criterion, 5, "geodesic solutions agree with the direct solver")


def test_criterion_06_inverse_route(record_criterion):
    gate = Gate()
    for i in range(10):
        h, geo, pair, (lo, hi) = sweep_case(i)
        x0 = geo.x0
        t0, b0 = pair.theta(x0)
        u1 = direct_solve(h, x0, 1.0, t0, (lo, hi))
        u2 = direct_solve(h, x0, 1.0, b0, (lo, hi))
        back = geodesic_from_pair(h, u1, u2, x0)
        a, b = back.interior(0.02)
        xs = np.linspace(a, b, 81)
        phi, dphi, d2 = back(xs)
        res = d2 - explicit_rhs(h, xs, phi, dphi)
        gate.add("Phi residual", np.max(np.abs(res) / (1 + np.abs(d2))), 1e-6)
        gate.add("Phi vs geodesic", np.max(np.abs(phi - geo.phi(xs)) / geo.phi(xs)), 1e-6)
        rep = verify_reconstruction(h, u1, u2, x0)
        gate.add("reconstruction", rep.max_error, 1e-6)
    gate.report(record_criterion, 6, "solution pair -> geodesic round trip")


def test_criterion_07_riccati_and_product(record_criterion):
    gate = Gate()
    for i in range(10):
        h, geo, pair, (lo, hi) = sweep_case(i)
        mids = geo.midpoints()
        mids = mids[(mids > lo) & (mids < hi)]
        gate.add("|Theta'+Theta^2+h|", np.max(riccati_residual(h, geo, mids)), 1e-7)
        xs = np.linspace(lo, hi, 201)
        phi, dphi, _ = geo(xs)
        t, b = theta(h, phi, dphi, xs)
        gate.add("|Theta_t Theta_b + Phi^2|/Phi^2", np.max(np.abs(t * b + phi * phi) / phi**2),
                 1e-12)
    gate.report(record_criterion, 7, "Riccati equation and Theta product")


def test_criterion_08_diffeomorphism(record_criterion):
    gate = Gate()
    for j, text in enumerate(random_hs(10, seed=8)):
        h = HFunction.parse(text)
        rng = np.random.default_rng(80 + j)
        x0 = float(rng.uniform(-0.5, 0.5))
        span = (x0 - 0.6, x0 + 0.6)
        u1 = direct_solve(h, x0, 1.0, float(rng.uniform(0.3, 1.5)), span)
        u2 = direct_solve(h, x0, float(rng.uniform(-1, 1)), -float(rng.uniform(0.3, 1.5)), span)
        spec = hp.DiffeoSpec(u1, u2, float(wronskian(u1, u2, x0)), X0=float(rng.normal()),
                             sign=int(rng.choice([-1, 1])))
        for _ in range(20):
            p = random_point(h, rng, x_range=(span[0] + 0.05, span[1] - 0.05), margin=0.05)
            gate.add("pullback", hp.pullback_check(spec, h, p), 1e-7)
            dj = hp.jacobian_det(spec, h, p)
            gate.add("det J vs FD", abs(np.linalg.det(hp.fd_jacobian(spec, p)) - dj) / abs(dj),
                     1e-6)
            A, B = rng.normal(size=2)
            gate.add("PDE (closed)", hp.pde_residual(spec, h, p, A, B, mode="closed"), 1e-7)
            gate.add("PDE (fd)", hp.pde_residual(spec, h, p, A, B, mode="fd"), 1e-7)
    gate.report(record_criterion, 8, "local isometry onto the half-plane and PDE")


def test_criterion_09_vertical_image_and_charges(record_criterion):
    gate = Gate()
    for i in range(10):
        h, geo, pair, (lo, hi) = sweep_case(i)
        rng = np.random.default_rng(90 + i)
        own = hp.spec_from_pair(pair, X0=float(rng.normal()), sign=int(rng.choice([-1, 1])))
        xs = np.linspace(lo, hi, 81)
        X, _ = hp.map_points(own, xs, geo.phi(xs))
        gate.add("max|X - X0|", np.max(np.abs(X - own.X0)), 1e-8)

        # charges along an affinely parametrized geodesic, through an independent chart
        x0 = geo.x0
        phi0, dphi0, _ = geo(x0)
        span = (x0 - 0.5, x0 + 0.5)
        u1 = direct_solve(h, x0, 1.0, float(rng.uniform(0.3, 1.5)), span)
        u2 = direct_solve(h, x0, 1.0, -float(rng.uniform(0.3, 1.5)), span)
        spec = hp.DiffeoSpec(u1, u2, float(wronskian(u1, u2, x0)), X0=float(rng.normal()),
                             sign=int(rng.choice([-1, 1])))
        traj = integrate_geodesic(h, _unit_state(h, x0, phi0, 0.3 * dphi0), (-1.0, 1.0))
        keep = np.flatnonzero((traj.states[:, 0] > span[0] + 0.02)
                              & (traj.states[:, 0] < span[1] - 0.02))
        sub = type(traj)(h, traj.s[keep], traj.states[keep], traj.derivs[keep],
                         traj.termination, int(np.argmin(np.abs(traj.s[keep]))))
        kc = hp.killing_charges(spec, h, sub)
        gate.add("charge drift", kc.drift, 1e-8)
        r, _ = hp.eq21_residual(spec, kc, sub.states[:, 0], sub.states[:, 1])
        gate.add("charge relation", r, 1e-6)
        # the same trajectory seen through the geodesic's own chart
        keep = np.flatnonzero((traj.states[:, 0] > lo) & (traj.states[:, 0] < hi))
        sub = type(traj)(h, traj.s[keep], traj.states[keep], traj.derivs[keep],
                         traj.termination, int(np.argmin(np.abs(traj.s[keep]))))
        gate.add("charge drift (own chart)", hp.killing_charges(own, h, sub).drift, 1e-8)
    gate.report(record_criterion, 9, "vertical image and Killing charges")


def test_criterion_10_geodesic_integrator(record_criterion):
    gate = Gate()
    for j, text in enumerate(random_hs(20, seed=10)):
        h = HFunction.parse(text)
        rng = np.random.default_rng(100 + j)
        x0 = float(rng.uniform(-0.5, 0.5))
        phi0 = math.sqrt(abs(float(h(x0))) + rng.uniform(0.5, 2.0))
        traj = integrate_geodesic(h, _unit_state(h, x0, phi0, float(rng.uniform(-0.5, 0.5))),
                                  (-5.0, 5.0))
        gate.add("speed drift", traj.speed_drift(), 1e-8)
        phi0, lam = float(rng.uniform(0.3, 2.0)), float(rng.uniform(-0.8, 0.8))
        if abs(phi0**2 - float(h(x0))) < 0.05 * (1 + abs(float(h(x0)))):
            phi0 = math.sqrt(abs(float(h(x0)))) + 1.0
        vert = integrate_geodesic(h, GeodesicState(x0, phi0, 0.0, lam * phi0), (-2.0, 2.0))
        want = phi0 * np.exp(lam * vert.s)
        gate.add("vertical Phi0 e^(lambda s)", np.max(np.abs(vert.states[:, 1] - want) / want),
                 1e-8)
        gate.add("vertical x drift", np.max(np.abs(vert.states[:, 0] - x0)), 1e-8)
    gate.report(record_criterion, 10, "affine speed and vertical geodesics")
