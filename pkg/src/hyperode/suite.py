"""Property checks run against a user-supplied h (the ``verify`` command)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as gm
from .errors import DomainError
from .geodesic import GeodesicState, integrate_explicit, integrate_geodesic
from .halfplane import (DiffeoSpec, eq21_residual, fd_jacobian, geodesic_image,
                        jacobian_det, killing_charges, map_points, pde_residual, pullback_check,
                        spec_from_pair, VerticalLine)
from .solutions import (build_solution_pair, direct_solve, riccati_residual, theta,
                        verify_reconstruction, wronskian)

__all__ = ["Check", "random_point", "random_initial_data", "run_suite"]


@dataclass(frozen=True)
class Check:
    name: str
    paper_ref: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.value) and self.value <= self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "paper_ref": self.paper_ref, "value": self.value,
                "tolerance": self.tolerance, "pass": self.passed}


def random_point(h, rng, x_range=(-1.0, 1.0), phi_range=(0.1, 3.0), margin=0.05):
    """A point of the half-plane at least ``margin`` away (in Phi^2) from the locus."""
    for _ in range(1000):
        x = rng.uniform(*x_range)
        phi = rng.uniform(*phi_range)
        if abs(phi * phi - float(h(x))) > margin * (1 + abs(float(h(x)))):
            return gm.MhPoint(x, phi)
    raise DomainError("could not find a non-degenerate point in the window")


def random_initial_data(h, rng, x_range=(-0.5, 0.5)):
    """(x0, Phi0, Phi0') with Phi0^2 comfortably above h(x0)."""
    x0 = float(rng.uniform(*x_range))
    phi0 = math.sqrt(abs(float(h(x0))) + rng.uniform(0.5, 2.0))
    return x0, phi0, float(rng.uniform(-0.5, 0.5))


def _unit_state(h, x0, phi0, dphi0) -> GeodesicState:
    hv = float(h(x0))
    s2 = ((hv - phi0**2) ** 2 + dphi0**2) / phi0**2
    k = 1.0 / math.sqrt(s2)
    return GeodesicState(x0, phi0, k, k * dphi0)


def run_suite(h, seed: int = 0, n_points: int = 50, tol: float = 1e-10) -> list[Check]:
    """All invariant checks for ``h`` with random data drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    checks: list[Check] = []
    add = lambda *a: checks.append(Check(*a))

    # curvature and connection
    pts = [random_point(h, rng) for _ in range(n_points)]
    curv = max(abs(gm.sectional_curvature(h, p) + 1) for p in pts)
    ric = 0.0
    chris = 0.0
    for p in pts:
        g = gm.metric(h, p).as_array()
        R = gm.ricci(h, p).as_array()
        ric = max(ric, float(np.max(np.abs(R + g) / (1 + np.abs(g)))))
        a = gm.christoffel(h, p).as_array()
        try:
            b = gm.fd_christoffel(h, p).as_array()
        except DomainError:
            continue
        chris = max(chris, float(np.max(np.abs(a - b) / (1 + np.abs(a)))))
    add("sectional_curvature", "constant curvature -1", curv, 1e-10)
    add("ricci_equals_minus_metric", "Einstein condition", ric, 1e-10)
    add("christoffel_vs_fd", "connection coefficients", chris, 1e-6)

    # explicit geodesic
    x0, phi0, dphi0 = random_initial_data(h, rng)
    geo = integrate_explicit(h, x0, phi0, dphi0, tol=tol)
    lo, hi = geo.interior(0.02)
    mids = geo.regular_midpoints(0.02)
    d2 = geo(mids)[2]
    add("geodesic_residual", "explicit geodesic equation",
        float(np.max(np.abs(geo.residual(mids)) / (1 + np.abs(d2)))), 1e-8)

    traj = integrate_geodesic(h, _unit_state(h, x0, phi0, dphi0), (-5.0, 5.0), tol=tol)
    add("speed_drift", "affine parametrization", traj.speed_drift(), 1e-8)

    # solutions from the geodesic against the RK oracle
    pair = build_solution_pair(h, geo)
    xs = np.linspace(lo, hi, 41)
    worst = 0.0
    for sol in (pair.top, pair.bot):
        u0, du0 = sol(geo.x0)
        ref = direct_solve(h, geo.x0, u0, du0, (lo, hi))
        worst = max(worst, float(np.max(np.abs(sol.u(xs) - ref.u(xs)) / np.abs(ref.u(xs)))))
    add("solutions_vs_direct", "solutions from geodesics", worst, 1e-6)
    add("wronskian_drift", "Wronskian constancy",
        float(np.max(np.abs(pair.wronskian_at(xs) - pair.wronskian)) / abs(pair.wronskian)), 1e-8)
    add("riccati_residual", "Riccati equation", float(np.max(riccati_residual(h, geo, mids))), 1e-7)
    phi, dphi, _ = geo(xs)
    t, b = theta(h, phi, dphi, xs)
    add("theta_product", "Theta_top Theta_bot = -Phi^2",
        float(np.max(np.abs(t * b + phi * phi) / (phi * phi))), 1e-12)

    # geodesic rebuilt from two oracle solutions
    span = (x0 - 0.5, x0 + 0.5)
    u1 = direct_solve(h, x0, 1.0, float(rng.uniform(0.3, 1.5)), span)
    u2 = direct_solve(h, x0, 1.0, -float(rng.uniform(0.3, 1.5)), span)
    rep = verify_reconstruction(h, u1, u2, x0)
    add("reconstruction", "solution pair -> geodesic -> solution pair", rep.max_error, 1e-6)

    # half-plane chart on the oracle pair
    spec = DiffeoSpec(u1, u2, float(wronskian(u1, u2, x0)), X0=float(rng.normal()),
                      sign=int(rng.choice([-1, 1])))
    pull = det_err = pde = 0.0
    for _ in range(20):
        p = random_point(h, rng, x_range=(span[0] + 0.05, span[1] - 0.05), margin=0.2)
        pull = max(pull, pullback_check(spec, h, p))
        dj = jacobian_det(spec, h, p)
        det_err = max(det_err, abs(np.linalg.det(fd_jacobian(spec, p)) - dj) / abs(dj))
        A, B = rng.normal(size=2)
        pde = max(pde, pde_residual(spec, h, p, A, B, mode="fd"))
    add("pullback", "chart is an isometry onto H", pull, 1e-7)
    add("jacobian_det_vs_fd", "Jacobian determinant", det_err, 1e-6)
    add("pde_residual", "nonlinear PDE complete integral", pde, 1e-7)

    # the geodesic's own pair maps it to a vertical line
    own = spec_from_pair(pair, X0=float(rng.normal()))
    X, _ = map_points(own, xs, geo.phi(xs))
    add("vertical_image", "geodesic image X = X0", float(np.max(np.abs(X - own.X0))), 1e-8)
    img = geodesic_image(own, geo)
    add("vertical_classified", "geodesic image X = X0", 0.0 if isinstance(img, VerticalLine) else 1.0, 0.5)

    # Killing charges on the parametric geodesic, using the oracle chart
    inside = (traj.states[:, 0] > span[0] + 0.02) & (traj.states[:, 0] < span[1] - 0.02)
    if np.count_nonzero(inside) >= 5:
        i = np.flatnonzero(inside)
        sub = type(traj)(h, traj.s[i], traj.states[i], traj.derivs[i], traj.termination,
                         int(np.argmin(np.abs(traj.s[i]))))
        kc = killing_charges(spec, h, sub)
        r21, _ = eq21_residual(spec, kc, sub.states[:, 0], sub.states[:, 1])
        add("killing_drift", "Killing charges conserved", kc.drift, 1e-8)
        add("killing_relation", "charges determine Phi(x)", r21, 1e-6)
    return checks
