"""The local diffeomorphism from (x, Phi) to the Poincare upper half-plane.

Given independent solutions u1, u2 with Wronskian W = u1' u2 - u1 u2',

    X = X0 + sign * (Phi^2 u1 u2 + u1' u2') / (W (Phi^2 u1^2 + u1'^2)),
    Y = Phi / (Phi^2 u1^2 + u1'^2),

pulls the hyperbolic metric (dX^2 + dY^2) / Y^2 back to
((h - Phi^2)^2 dx^2 + dPhi^2) / Phi^2.  Geodesics therefore map to vertical
lines or semicircles centred on the X-axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import _export
from .errors import DegeneracyError, DomainError, NumericalError, PreconditionError
from .geodesic import ExplicitGeodesic, GeodesicTrajectory
from .geometry import MhPoint, check_nondegenerate, deg_margin, metric
from .solutions import DenseSolution, FunctionSolution, LinearCombination, SolutionPair

__all__ = [
    "HalfPlanePoint",
    "DiffeoSpec",
    "spec_from_pair",
    "to_halfplane",
    "map_points",
    "jacobian",
    "jacobian_det",
    "fd_jacobian",
    "pullback_check",
    "pde_residual",
    "KillingCharges",
    "killing_charges",
    "charges_at",
    "eq21_residual",
    "VerticalLine",
    "Semicircle",
    "Unclassified",
    "geodesic_image",
    "fit_axis_circle",
    "fit_circle",
    "from_halfplane",
    "exponential_spec",
    "exponential_map",
    "exponential_inverse",
    "trig_spec",
    "trig_fixed_phi_circle",
    "curve_csv",
    "curve_svg",
]


@dataclass(frozen=True)
class HalfPlanePoint:
    X: float
    Y: float

    def __post_init__(self):
        if not self.Y > 0:
            raise DomainError(f"Y must be positive, got {self.Y}")


@dataclass
class DiffeoSpec:
    """Data of one chart: two solutions, their Wronskian, a translation and a reflection sign."""

    u1: DenseSolution
    u2: DenseSolution
    W: float
    X0: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not math.isfinite(self.W) or self.W == 0:
            raise PreconditionError("u1 and u2 must be linearly independent (W != 0)")

    @property
    def domain(self) -> tuple[float, float]:
        return (max(self.u1.domain[0], self.u2.domain[0]), min(self.u1.domain[1], self.u2.domain[1]))

    def values(self, x):
        """``(u1, u1', u2, u2')`` at ``x``."""
        lo, hi = self.domain
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= lo) and math.isfinite(lo) or np.any(xa >= hi) and math.isfinite(hi):
            raise DomainError(f"x outside the solutions' interval ]{lo}, {hi}[")
        a, da = self.u1(x)
        b, db = self.u2(x)
        return a, da, b, db

    def wronskian_drift(self, xs) -> float:
        """max |u1' u2 - u1 u2' - W| / |W| over ``xs``."""
        a, da, b, db = self.values(np.asarray(xs, dtype=float))
        return float(np.max(np.abs(da * b - a * db - self.W)) / abs(self.W))

    def with_u1(self, A: float, B: float) -> "DiffeoSpec":
        """Same chart data with u1 replaced by A u1 + B u2 (W rescaled by A)."""
        if A == 0 and B == 0:
            raise PreconditionError("A and B cannot both vanish")
        u = LinearCombination(A, self.u1, B, self.u2)
        if A == 0:
            # keep the pair independent: (B u2, u1) has Wronskian -B W
            return DiffeoSpec(u, self.u1, -B * self.W, self.X0, self.sign)
        return DiffeoSpec(u, self.u2, A * self.W, self.X0, self.sign)


def spec_from_pair(pair: SolutionPair, X0: float = 0.0, sign: int = 1) -> DiffeoSpec:
    """Chart built on (u_top, u_bot) of a geodesic; that geodesic maps to X = X0."""
    return DiffeoSpec(pair.top, pair.bot, pair.wronskian, X0, sign)


def map_points(spec: DiffeoSpec, x, phi):
    """Vectorized map: arrays ``(X, Y)``."""
    phi = np.asarray(phi, dtype=float) if np.ndim(phi) else float(phi)
    if np.any(np.asarray(phi) <= 0):
        raise DomainError("Phi must be positive")
    a, da, b, db = spec.values(x)
    p2 = phi * phi
    D = p2 * a * a + da * da
    X = spec.X0 + spec.sign * (p2 * a * b + da * db) / (spec.W * D)
    Y = phi / D
    return X, Y


def to_halfplane(spec: DiffeoSpec, p: MhPoint) -> HalfPlanePoint:
    X, Y = map_points(spec, p.x, p.phi)
    return HalfPlanePoint(float(X), float(Y))


def _jacobian_parts(h, phi, hv, a, da, sign):
    p2 = phi * phi
    D = p2 * a * a + da * da
    Y = phi / D
    Y2 = Y * Y
    gap = p2 - hv
    diff = da * da - p2 * a * a
    JXx = sign * Y2 / p2 * gap * diff
    JXp = sign * 2 * Y2 / phi * da * a
    JYx = -2 * Y2 / phi * gap * da * a
    JYp = Y2 / p2 * diff
    return JXx, JXp, JYx, JYp, Y


def jacobian(spec: DiffeoSpec, h, p: MhPoint) -> np.ndarray:
    """``[[dX/dx, dX/dPhi], [dY/dx, dY/dPhi]]`` in closed form (u1'' replaced by -h u1)."""
    hv = float(h(p.x))
    check_nondegenerate(p.x, p.phi, hv)
    a, da, _, _ = spec.values(p.x)
    JXx, JXp, JYx, JYp, _ = _jacobian_parts(h, p.phi, hv, a, da, spec.sign)
    return np.array([[JXx, JXp], [JYx, JYp]], dtype=float)


def jacobian_det(spec: DiffeoSpec, h, p: MhPoint) -> float:
    """sign * (Phi^2 - h) / (Phi^2 u1^2 + u1'^2)^2."""
    hv = float(h(p.x))
    a, da, _, _ = spec.values(p.x)
    D = p.phi**2 * a * a + da * da
    return spec.sign * (p.phi**2 - hv) / (D * D)


def fd_jacobian(spec: DiffeoSpec, p: MhPoint, step: Optional[float] = None) -> np.ndarray:
    """Central differences of :func:`map_points` with one Richardson refinement."""
    if step is None:
        step = 1e-4 * min(1.0, p.phi)

    def diff(hs):
        Xp, Yp = map_points(spec, p.x + hs, p.phi)
        Xm, Ym = map_points(spec, p.x - hs, p.phi)
        Xq, Yq = map_points(spec, p.x, p.phi + hs)
        Xr, Yr = map_points(spec, p.x, p.phi - hs)
        return np.array([[Xp - Xm, Xq - Xr], [Yp - Ym, Yq - Yr]], dtype=float) / (2 * hs)

    return (4 * diff(step / 2) - diff(step)) / 3


def pullback_check(spec: DiffeoSpec, h, p: MhPoint) -> float:
    """max |(J^T J / Y^2) - g_h| over the four components."""
    J = jacobian(spec, h, p)
    _, Y = map_points(spec, p.x, p.phi)
    pulled = J.T @ J / (Y * Y)
    return float(np.max(np.abs(pulled - metric(h, p).as_array())))


def pde_residual(spec: DiffeoSpec, h, p: MhPoint, A: float = 1.0, B: float = 0.0,
                 mode: str = "closed", step: Optional[float] = None) -> float:
    """Relative residual of (Phi/(h - Phi^2) Y_x)^2 + (Phi Y_Phi)^2 = Y^2.

    Y = Phi / (Phi^2 u^2 + u'^2) with u = A u1 + B u2.  ``mode="closed"``
    uses the closed-form partials; ``mode="fd"`` differentiates Y
    numerically, which also tests that u solves the linear equation.
    The value returned is |lhs - Y^2| / Y^2.
    """
    hv = float(h(p.x))
    check_nondegenerate(p.x, p.phi, hv)
    s = spec.with_u1(A, B)
    a, da, _, _ = s.values(p.x)
    if mode == "closed":
        _, _, Yx, Yp, Y = _jacobian_parts(h, p.phi, hv, a, da, 1)
    elif mode == "fd":
        J = fd_jacobian(s, p, step)
        Yx, Yp = J[1, 0], J[1, 1]
        Y = map_points(s, p.x, p.phi)[1]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lhs = (p.phi / (hv - p.phi**2) * Yx) ** 2 + (p.phi * Yp) ** 2
    return float(abs(lhs - Y * Y) / (Y * Y))


# --------------------------------------------------------------------------- Killing charges


@dataclass
class KillingCharges:
    """Conserved quantities g_H(k_i, velocity) for k1 = (X^2 - Y^2) dX + 2XY dY, k2 = X dX + Y dY, k3 = dX.

    ``A1, A2, A3`` are means over the samples; ``series`` holds one row per
    sample and ``drift`` is max |A_i(s) - A_i(s_0)| / (1 + |A_i(s_0)|).
    """

    A1: float
    A2: float
    A3: float
    drift: float = 0.0
    series: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)), repr=False)

    def as_tuple(self) -> tuple[float, float, float]:
        return self.A1, self.A2, self.A3


def charges_at(X, Y, Xd, Yd):
    """(A1, A2, A3) of a velocity (Xd, Yd) at (X, Y); vectorized."""
    Y2 = Y * Y
    A3 = Xd / Y2
    A2 = (X * Xd + Y * Yd) / Y2
    A1 = ((X * X - Y2) * Xd + 2 * X * Y * Yd) / Y2
    return A1, A2, A3



def killing_charges(spec: DiffeoSpec, h, traj: GeodesicTrajectory) -> KillingCharges:
    """Charges along a parametric geodesic, pushed forward through the chart."""
    st = traj.states
    x, phi, xd, phid = st[:, 0], st[:, 1], st[:, 2], st[:, 3]
    hv = h(x)
    if np.any(np.abs(phi * phi - hv) < deg_margin(phi, np.abs(hv))):
        raise DegeneracyError("trajectory touches the locus Phi^2 = h(x)")
    X, Y = map_points(spec, x, phi)
    a, da, _, _ = spec.values(x)
    JXx, JXp, JYx, JYp, _ = _jacobian_parts(h, phi, hv, a, da, spec.sign)
    Xd = JXx * xd + JXp * phid
    Yd = JYx * xd + JYp * phid
    series = np.column_stack(charges_at(X, Y, Xd, Yd))
    ref = series[traj.i0]
    drift = float(np.max(np.abs(series - ref) / (1 + np.abs(ref))))
    m = series.mean(axis=0)
    return KillingCharges(float(m[0]), float(m[1]), float(m[2]), drift, series)


def eq21_residual(spec: DiffeoSpec, charges: KillingCharges, x, phi,
                  skip: float = 1e-12) -> tuple[float, int]:
    """Relation between Phi(x) and the charges: Phi^2 + N/D = 0 with

        N = A1 W^2 u1'^2 - 2 A2 W u1' u2' + A3 u2'^2,
        D = A1 W^2 u1^2  - 2 A2 W u1 u2   + A3 u2^2,

    written for the chart with X0 = 0 and sign +1; other charts are reduced
    to it by translating and reflecting the charges.  The residual
    |Phi^2 D + N| is measured against the size of the individual terms of
    Phi^2 D and N before cancellation.  Returns its max and the number of
    samples skipped because |D| fell below ``skip`` times its natural scale.
    """
    A1, A2, A3 = charges.as_tuple()
    X0 = spec.X0
    A1, A2 = A1 - 2 * X0 * A2 + X0 * X0 * A3, A2 - X0 * A3
    A2 = spec.sign * A2
    a, da, b, db = spec.values(np.asarray(x, dtype=float))
    W = spec.W
    phi = np.asarray(phi, dtype=float)
    N = A1 * W * W * da * da - 2 * A2 * W * da * db + A3 * db * db
    D = A1 * W * W * a * a - 2 * A2 * W * a * b + A3 * b * b
    scale = abs(A1) * W * W * a * a + 2 * abs(A2 * W * a * b) + abs(A3) * b * b
    nscale = abs(A1) * W * W * da * da + 2 * abs(A2 * W * da * db) + abs(A3) * db * db
    ok = np.abs(D) >= skip * scale
    p2 = phi * phi
    r = np.abs(p2 * D + N) / (p2 * scale + nscale)
    worst = float(np.max(r[ok])) if np.any(ok) else math.nan
    return worst, int(np.count_nonzero(~ok))


# --------------------------------------------------------------------------- geodesic images


@dataclass(frozen=True)
class VerticalLine:
    X0: float
    max_deviation: float


@dataclass(frozen=True)
class Semicircle:
    center_X: float
    radius: float
    residual: float  # max |distance - radius| / radius


@dataclass(frozen=True)
class Unclassified:
    samples: np.ndarray
    residual: float


GeodesicImage = Union[VerticalLine, Semicircle, Unclassified]


def fit_axis_circle(X, Y) -> tuple[float, float, float]:
    """Least-squares circle centred on Y = 0: returns (center_X, radius, relative residual)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    # X^2 + Y^2 = 2 c X + k  with k = r^2 - c^2
    M = np.column_stack([2 * X, np.ones_like(X)])
    (c, k), *_ = np.linalg.lstsq(M, X * X + Y * Y, rcond=None)
    r2 = k + c * c
    if not r2 > 0:
        return float(c), math.nan, math.inf
    r = math.sqrt(r2)
    res = float(np.max(np.abs(np.hypot(X - c, Y) - r)) / r)
    return float(c), r, res


def fit_circle(X, Y) -> tuple[tuple[float, float], float, float]:
    """Algebraic circle fit with free centre: ((cX, cY), radius, relative residual)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    # shift for conditioning
    mx, my = X.mean(), Y.mean()
    u, v = X - mx, Y - my
    M = np.column_stack([2 * u, 2 * v, np.ones_like(u)])
    (a, b, k), *_ = np.linalg.lstsq(M, u * u + v * v, rcond=None)
    r = math.sqrt(k + a * a + b * b)
    cx, cy = a + mx, b + my
    res = float(np.max(np.abs(np.hypot(X - cx, Y - cy) - r)) / r)
    return (float(cx), float(cy)), r, res


def geodesic_image(spec: DiffeoSpec, geo: ExplicitGeodesic, xs=None, margin: float = 0.02,
                   n: int = 101) -> GeodesicImage:
    """Map a geodesic into H and classify the image.

    Vertical when max |X - mean X| <= 1e-6 (1 + |mean X|); otherwise a
    least-squares circle centred on the X-axis, accepted when its residual
    is at most 1e-4 of the radius.
    """
    if xs is None:
        lo, hi = geo.interior(margin)
        dlo, dhi = spec.domain
        lo, hi = max(lo, dlo), min(hi, dhi)
        xs = np.linspace(lo, hi, n)
    xs = np.asarray(xs, dtype=float)
    if xs.size < 5:
        raise PreconditionError("need at least 5 samples to classify an image")
    X, Y = map_points(spec, xs, geo.phi(xs))
    mean = float(np.mean(X))
    dev = float(np.max(np.abs(X - mean)))
    if dev <= 1e-6 * (1 + abs(mean)):
        return VerticalLine(mean, dev)
    c, r, res = fit_axis_circle(X, Y)
    if res <= 1e-4:
        return Semicircle(c, r, res)
    return Unclassified(np.column_stack([xs, X, Y]), res)


# --------------------------------------------------------------------------- inversion


def from_halfplane(spec: DiffeoSpec, h, q: HalfPlanePoint, guess: MhPoint,
                   tol: float = 1e-13, max_iter: int = 60) -> MhPoint:
    """Local inverse by damped Newton iteration with the closed-form Jacobian."""
    x, phi = guess.x, guess.phi
    target = np.array([q.X, q.Y])

    def resid(x_, p_):
        X, Y = map_points(spec, x_, p_)
        return np.array([X, Y]) - target

    r = resid(x, phi)
    for _ in range(max_iter):
        J = jacobian(spec, h, MhPoint(x, phi))
        step = np.linalg.solve(J, -r)
        lam = 1.0
        while True:
            nx, np_ = x + lam * step[0], phi + lam * step[1]
            try:
                if np_ > 0:
                    nr = resid(nx, np_)
                    if np.linalg.norm(nr) < np.linalg.norm(r) or lam < 1e-3:
                        break
            except DomainError:
                pass
            lam *= 0.5
            if lam < 1e-10:
                raise NumericalError("Newton inversion stalled")
        x, phi, r = nx, np_, nr
        if np.linalg.norm(r) <= tol * (1 + np.linalg.norm(target)):
            return MhPoint(x, phi)
    raise NumericalError("Newton inversion did not converge")


# --------------------------------------------------------------------------- closed-form charts


def exponential_spec(omega: float, X0: float = 0.0, sign: int = 1) -> DiffeoSpec:
    """h = -omega^2 with u1 = e^{omega x}, u2 = e^{-omega x}, W = 2 omega."""
    w = float(omega)
    u1 = FunctionSolution(lambda x: np.exp(w * x), lambda x: w * np.exp(w * x), name="exp(+wx)")
    u2 = FunctionSolution(lambda x: np.exp(-w * x), lambda x: -w * np.exp(-w * x), name="exp(-wx)")
    return DiffeoSpec(u1, u2, 2 * w, X0, sign)


def exponential_map(omega: float, x, phi):
    """Closed-form image for h = -omega^2 with the exponential chart."""
    e = np.exp(-2 * omega * np.asarray(x, dtype=float))
    p2 = np.asarray(phi, dtype=float) ** 2
    w2 = omega * omega
    return e / (2 * omega) * (p2 - w2) / (p2 + w2), phi * e / (p2 + w2)


def exponential_inverse(omega: float, X, Y):
    """Inverse of :func:`exponential_map`, defined on the whole half-plane."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    rho = np.hypot(X, Y)
    return -np.log(2 * omega * rho) / (2 * omega), omega * (X + rho) / Y


def trig_spec(omega: float, xbar: float = 0.0) -> DiffeoSpec:
    """h = +omega^2 with u1 = cos(omega (x - xbar)), u2 = sin(omega (x - xbar)), W = -omega."""
    w = float(omega)
    u1 = FunctionSolution(lambda x: np.cos(w * (x - xbar)), lambda x: -w * np.sin(w * (x - xbar)),
                          name="cos")
    u2 = FunctionSolution(lambda x: np.sin(w * (x - xbar)), lambda x: w * np.cos(w * (x - xbar)),
                          name="sin")
    return DiffeoSpec(u1, u2, -w, 0.0, 1)


def trig_fixed_phi_circle(omega: float, phi: float) -> tuple[tuple[float, float], float]:
    """Centre and radius of the image of the line Phi = const under :func:`trig_spec`."""
    w2 = omega * omega
    return (0.0, (phi * phi + w2) / (2 * phi * w2)), abs(phi * phi - w2) / (2 * phi * w2)


# --------------------------------------------------------------------------- export


def curve_csv(s, X, Y) -> str:
    """CSV text with columns s_or_x, X, Y."""
    return _export.csv_text(("s_or_x", "X", "Y"), zip(np.ravel(s), np.ravel(X), np.ravel(Y)))


def curve_svg(curves, xlabel: str = "X", ylabel: str = "Y") -> str:
    """Static SVG polylines; ``curves`` is a sequence of (label, X, Y)."""
    return _export.svg_text(curves, xlabel, ylabel)
