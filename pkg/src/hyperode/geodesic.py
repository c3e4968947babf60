"""Geodesics of the (x, Phi) half-plane, parametric and explicit (graph) form.

Parametric geodesics ``s -> (x(s), Phi(s))`` are integrated directly from the
geodesic equations.  Explicit geodesics ``x -> Phi(x)`` obey the second-order
equation returned by :func:`explicit_rhs`; it blows up at the domain ends
(Phi -> infinity or Phi -> 0), so the integrator works in one of two
substituted variables and switches between them:

* ``G = Phi^2``:  G'' = (2 G'^2 - h' G') / (G - h) + 2 (G^2 - h^2),
  regular as Phi -> 0 whenever h != 0;
* ``F = Phi^-2``: F'' = -2 (1 - h^2 F^2) - (2 h F'^2 + h' F F') / (1 - h F),
  regular as Phi -> infinity.

The domain ends then show up as plain sign changes of G or F and are located
by bisection of the last step.  Approaching the locus Phi^2 = h stays
singular in both variables; it is detected by a distance margin or by step
size underflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from . import _rk
from ._interp import PiecewisePoly, cubic_hermite, hermite, quintic_hermite
from .errors import DegeneracyError, DomainError, NumericalError, PreconditionError
from .expr import HFunction, Jet2
from .geometry import check_nondegenerate, deg_margin

__all__ = [
    "GeodesicState",
    "Termination",
    "GeodesicTrajectory",
    "ExplicitGeodesic",
    "geodesic_rhs",
    "integrate_geodesic",
    "explicit_rhs",
    "integrate_explicit",
    "explicit_from_parametric",
    "Zero",
    "MinusOmega2",
    "PlusOmega2",
    "closed_form_h",
    "closed_form_domain",
    "closed_form_geodesic",
]

DEFAULT_TOL = 1e-10
_STEP_SAFETY = 30.0


# --------------------------------------------------------------------------- parametric


@dataclass(frozen=True)
class GeodesicState:
    x: float
    phi: float
    xdot: float
    phidot: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.phi, self.xdot, self.phidot], dtype=float)

    def speed2(self, h) -> float:
        """g(v, v) for the velocity (xdot, phidot)."""
        d = float(h(self.x)) - self.phi**2
        return (d * d * self.xdot**2 + self.phidot**2) / self.phi**2


class Termination(enum.Enum):
    ReachedEnd = "reached-end"
    DegeneracyLocus = "degeneracy-locus"
    PhiZero = "phi-zero"
    XdotZero = "xdot-zero"
    StepUnderflow = "step-underflow"


def geodesic_rhs(h, st: GeodesicState) -> tuple[float, float, float, float]:
    """``(xdot, phidot, xddot, phiddot)`` from the geodesic equations."""
    hv, dh, _ = h.jet(st.x)
    check_nondegenerate(st.x, st.phi, hv)
    return _param_rhs(st.phi, st.xdot, st.phidot, hv, dh)


def _param_rhs(phi, xdot, phidot, hv, dh):
    phi2 = phi * phi
    gap = phi2 - hv
    xdd = dh / gap * xdot * xdot - 2.0 * (phi2 + hv) / (phi * gap) * xdot * phidot
    pdd = (phi2 * phi2 - hv * hv) / phi * xdot * xdot + phidot * phidot / phi
    return xdot, phidot, xdd, pdd


@dataclass
class GeodesicTrajectory:
    """Accepted integrator nodes of a parametric geodesic.

    ``states[i] = (x, Phi, xdot, phidot)`` at ``s[i]``; ``derivs[i]`` holds the
    right-hand side there.  ``s`` is increasing; ``i0`` indexes the initial state.
    """

    h: HFunction
    s: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    termination: Termination
    i0: int = 0
    termination_backward: Optional[Termination] = None
    _dense: Optional[PiecewisePoly] = field(default=None, repr=False)

    @property
    def samples(self) -> list[tuple[float, GeodesicState]]:
        return [(float(s), GeodesicState(*map(float, y))) for s, y in zip(self.s, self.states)]

    def state_at(self, s):
        """Cubic Hermite dense output; rows are (x, Phi, xdot, phidot)."""
        if self._dense is None:
            self._dense = cubic_hermite(self.s, self.states, self.derivs)
        return self._dense(s)

    def speed2(self) -> np.ndarray:
        x, phi, xd, pd = self.states.T
        d = self.h(x) - phi**2
        return (d * d * xd**2 + pd**2) / phi**2

    def speed_drift(self) -> float:
        v = self.speed2()
        return float(np.max(np.abs(v - v[self.i0])))


_TERMINATION_BY_EVENT = {
    "degenerate": Termination.DegeneracyLocus,
    "phi_zero": Termination.PhiZero,
    "xdot_zero": Termination.XdotZero,
}


def _run_parametric(h, y0, s0, s1, tol, stop_at_turning):
    def fun(s, y):
        hv, dh, _ = h.jet(y[0])
        if y[1] <= 0 or y[1] * y[1] == hv:
            raise DomainError("left the chart")
        return np.array(_param_rhs(y[1], y[2], y[3], hv, dh))

    # signed, so that a step jumping across the locus still triggers the event
    side = 1.0 if y0[1] ** 2 > float(h(y0[0])) else -1.0

    def deg_event(s, y):
        hv = float(h(y[0]))
        return side * (y[1] ** 2 - hv) - deg_margin(y[1], hv)

    events = [
        _rk.Event("degenerate", deg_event, direction=-1),
        _rk.Event("phi_zero", lambda s, y: y[1] - 1e-9, direction=-1),
    ]
    if stop_at_turning:
        events.append(_rk.Event("xdot_zero", lambda s, y: y[2]))
    res = _rk.integrate(fun, s0, y0, s1, rtol=tol, atol=tol, events=events)
    if res.status == "end":
        term = Termination.ReachedEnd
    elif res.status == "event":
        term = _TERMINATION_BY_EVENT[res.event]
    elif res.status == "underflow":
        term = Termination.StepUnderflow
    else:
        raise NumericalError("geodesic integration exceeded the step budget")
    return res, term


def integrate_geodesic(h, init: GeodesicState, s_span: tuple[float, float],
                       tol: float = DEFAULT_TOL, stop_at_turning: bool = False
                       ) -> GeodesicTrajectory:
    """Integrate a parametric geodesic with adaptive Dormand-Prince 5(4).

    The initial state sits at ``s = 0`` when ``0`` lies strictly inside
    ``s_span`` (the curve is then integrated both ways), otherwise at
    ``s_span[0]``.  Integration stops early at the degeneracy locus, at
    Phi -> 0, on step underflow, or (``stop_at_turning``) where xdot changes sign.
    """
    s_a, s_b = map(float, s_span)
    if not (math.isfinite(s_a) and math.isfinite(s_b)) or s_a == s_b:
        raise ValueError(f"invalid span {s_span}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    y0 = init.as_array()
    check_nondegenerate(init.x, init.phi, float(h(init.x)))

    if s_a < 0 < s_b:
        fwd, term_f = _run_parametric(h, y0, 0.0, s_b, tol, stop_at_turning)
        bwd, term_b = _run_parametric(h, y0, 0.0, s_a, tol, stop_at_turning)
        s = np.concatenate([bwd.t[:0:-1], fwd.t])
        states = np.concatenate([bwd.y[:0:-1], fwd.y])
        derivs = np.concatenate([bwd.f[:0:-1], fwd.f])
        return GeodesicTrajectory(h, s, states, derivs, term_f, len(bwd.t) - 1, term_b)

    res, term = _run_parametric(h, y0, s_a, s_b, tol, stop_at_turning)
    if s_b < s_a:
        return GeodesicTrajectory(h, res.t[::-1], res.y[::-1], res.f[::-1], term,
                                  len(res.t) - 1)
    return GeodesicTrajectory(h, res.t, res.y, res.f, term, 0)


# --------------------------------------------------------------------------- explicit form


def explicit_rhs(h, x, phi, phiprime):
    """Phi'' of a geodesic written as a graph Phi(x).  Vectorized."""
    hv, dh, _ = h.jet(x)
    phi = np.asarray(phi, dtype=float) if np.ndim(phi) else float(phi)
    if np.any(np.asarray(phi) <= 0):
        raise DomainError("Phi must be positive")
    gap = phi * phi - hv
    if np.any(np.abs(gap) < deg_margin(phi, np.abs(hv))):
        raise DegeneracyError("explicit geodesic evaluated on the locus Phi^2 = h(x)")
    return ((3 * phi * phi + hv) / gap * phiprime * phiprime / phi
            - dh * phiprime / gap
            + (phi**4 - hv * hv) / phi)


def _g_rhs(hv, dh, G, dG):
    return (2 * dG * dG - dh * dG) / (G - hv) + 2 * (G * G - hv * hv)


def _f_rhs(hv, dh, F, dF):
    return -2 * (1 - hv * hv * F * F) - (2 * hv * dF * dF + dh * F * dF) / (1 - hv * F)


def _to_phi(mode, v, dv, d2v):
    """Convert (v, v', v'') in mode ``G`` or ``F`` to (Phi, Phi', Phi'')."""
    if mode == "G":
        phi = np.sqrt(v)
        dphi = dv / (2 * phi)
        return phi, dphi, (d2v - 2 * dphi * dphi) / (2 * phi)
    phi = 1.0 / np.sqrt(v)
    p3 = phi**3
    return phi, -0.5 * p3 * dv, 0.75 * p3 * phi * phi * dv * dv - 0.5 * p3 * d2v


def _from_phi(mode, phi, dphi):
    if mode == "G":
        return phi * phi, 2 * phi * dphi
    return phi**-2, -2 * dphi * phi**-3


def _switch_hi(hv):
    return 1.5 * (1.0 + abs(hv))


def _switch_lo(hv):
    return 1.2 * (1.0 + abs(hv))


def _third_derivative(h, mode, x, v, dv, d2v):
    """Third derivative along a solution of the G or F equation, from its right-hand side."""
    hj = h.jet(x)
    z = np.zeros_like(x)
    hv = Jet2(hj.v + z, hj.d1 + z, z)
    dh = Jet2(hj.d1 + z, hj.d2 + z, z)
    rhs = _g_rhs if mode == "G" else _f_rhs
    return rhs(hv, dh, Jet2(v, dv, z), Jet2(dv, d2v, z)).d1


class _ModalCurve:
    """Piecewise septic Hermite interpolant whose runs live in G or F variables."""

    def __init__(self, h, runs: list[tuple[str, np.ndarray]]):
        # each run: (mode, array of rows (x, v, v', v'')), x increasing
        self.modes = [m for m, _ in runs]
        self.polys = []
        for mode, r in runs:
            d3 = _third_derivative(h, mode, r[:, 0], r[:, 1], r[:, 2], r[:, 3])
            self.polys.append(hermite(r[:, 0], r[:, 1], r[:, 2], r[:, 3], d3))
        self.starts = np.array([r[0, 0] for _, r in runs])

    def __call__(self, x):
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        run = np.clip(np.searchsorted(self.starts, xa, side="right") - 1, 0, len(self.polys) - 1)
        phi = np.empty_like(xa)
        dphi = np.empty_like(xa)
        d2phi = np.empty_like(xa)
        for k in np.unique(run):
            sel = run == k
            poly = self.polys[k]
            v, dv, d2v = (poly(xa[sel], nu)[:, 0] for nu in range(3))
            phi[sel], dphi[sel], d2phi[sel] = _to_phi(self.modes[k], v, dv, d2v)
        if np.ndim(x) == 0:
            return float(phi[0]), float(dphi[0]), float(d2phi[0])
        return phi, dphi, d2phi


class ExplicitGeodesic:
    """A geodesic as a graph ``Phi(x)`` on its maximal interval ``]x_minus, x_plus[``.

    ``samples`` rows are ``(x, Phi, Phi', Phi'')`` at the nodes, sorted by x.
    ``end_causes`` records why each end was reached: ``"phi-infinite"``,
    ``"phi-zero"``, ``"degeneracy-locus"``, ``"step-underflow"``, ``"extent"``
    (integration window exhausted; the true domain may be larger),
    ``"turning"`` or ``"exact"``.
    """

    def __init__(self, h, x0: float, samples: np.ndarray, x_minus: float, x_plus: float,
                 curve: Callable, end_causes: tuple[str, str] = ("exact", "exact")):
        self.h = h
        self.x0 = float(x0)
        self.samples = np.asarray(samples, dtype=float)
        self.x_minus = float(x_minus)
        self.x_plus = float(x_plus)
        self.end_causes = tuple(end_causes)
        self._curve = curve
        if not self.x_minus < self.x0 < self.x_plus:
            raise ValueError("anchor must lie strictly inside the domain")

    def __call__(self, x):
        """``(Phi, Phi', Phi'')`` at ``x``; vectorized."""
        return self._curve(x)

    def phi(self, x):
        return self._curve(x)[0]

    def dphi(self, x):
        return self._curve(x)[1]

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.x_minus) and math.isfinite(self.x_plus)

    def interior(self, margin: float = 0.02) -> tuple[float, float]:
        """Domain shrunk by ``margin`` of its length at each end.

        Infinite ends are replaced by the outermost sample.
        """
        lo = self.x_minus if math.isfinite(self.x_minus) else self.samples[0, 0]
        hi = self.x_plus if math.isfinite(self.x_plus) else self.samples[-1, 0]
        d = margin * (hi - lo)
        return lo + d, hi - d

    def residual(self, xs) -> np.ndarray:
        """Phi'' of the curve minus the geodesic right-hand side, at ``xs``."""
        phi, dphi, d2phi = self._curve(np.asarray(xs, dtype=float))
        return d2phi - explicit_rhs(self.h, xs, phi, dphi)

    def midpoints(self) -> np.ndarray:
        x = self.samples[:, 0]
        return 0.5 * (x[1:] + x[:-1])

    def regular_midpoints(self, margin: float = 0.0, locus_rel: float = 1e-2) -> np.ndarray:
        """Midpoints inside :meth:`interior` with |Phi^2 - h| > locus_rel (1 + Phi^2 + |h|).

        Right-hand side and residual are 0/0 on the locus, so residual checks
        skip the stretch of a curve that runs into it.
        """
        xs = self.midpoints()
        if margin > 0:
            lo, hi = self.interior(margin)
            xs = xs[(xs > lo) & (xs < hi)]
        phi = self.phi(xs)
        hv = self.h(xs)
        p2 = phi * phi
        return xs[np.abs(p2 - hv) > locus_rel * (1 + p2 + np.abs(hv))]

    def __repr__(self) -> str:
        return (f"ExplicitGeodesic(x0={self.x0:g}, domain=]{self.x_minus:.12g}, "
                f"{self.x_plus:.12g}[, nodes={len(self.samples)}, ends={self.end_causes})")


def _integrate_one_way(h, x0, phi0, dphi0, direction, tol, max_extent):
    """Integrate from x0 towards x0 + direction * max_extent, switching G/F modes.

    Returns (runs, cause, x_end) where runs are lists of (mode, rows) in
    integration order, rows being (x, v, v', v'').
    """
    x_end = x0 + direction * max_extent
    hv0 = float(h(x0))
    mode = "F" if phi0 * phi0 > 1.35 * (1 + abs(hv0)) else "G"
    v, dv = _from_phi(mode, phi0, dphi0)
    x = x0
    runs = []
    for _ in range(200):
        if mode == "G":
            def fun(t, y):
                hv, dh, _ = h.jet(t)
                if y[0] == hv:
                    raise DomainError("on the locus")
                return np.array([y[1], _g_rhs(hv, dh, y[0], y[1])])

            side = 1.0 if v > float(h(x)) else -1.0

            def deg(t, y, side=side):
                hv = float(h(t))
                return side * (y[0] - hv) - deg_margin(abs(y[0]), hv)

            events = [
                _rk.Event("degenerate", deg, direction=-1),
                _rk.Event("phi-zero", lambda t, y: y[0], direction=-1),
                _rk.Event("switch", lambda t, y: y[0] - _switch_hi(float(h(t))), direction=1),
            ]
        else:
            def fun(t, y):
                hv, dh, _ = h.jet(t)
                if hv * y[0] == 1.0:
                    raise DomainError("on the locus")
                return np.array([y[1], _f_rhs(hv, dh, y[0], y[1])])

            side = 1.0 if 1 - float(h(x)) * v > 0 else -1.0

            def deg(t, y, side=side):
                hv = float(h(t))
                F = y[0]
                return side * (1 - hv * F) - 1e-9 * (abs(F) + 1 + abs(hv * F))

            events = [
                _rk.Event("degenerate", deg, direction=-1),
                _rk.Event("phi-infinite", lambda t, y: y[0], direction=-1),
                _rk.Event("switch", lambda t, y: y[0] * _switch_lo(float(h(t))) - 1.0,
                          direction=1),
            ]
        res = _rk.integrate(fun, x, [v, dv], x_end, rtol=tol, atol=tol, events=events)
        rows = np.column_stack([res.t, res.y[:, 0], res.y[:, 1], res.f[:, 1]])
        runs.append((mode, rows))
        if res.status == "event" and res.event == "switch":
            x = float(res.t[-1])
            phi, dphi, _ = _to_phi(mode, res.y[-1, 0], res.y[-1, 1], res.f[-1, 1])
            mode = "F" if mode == "G" else "G"
            v, dv = _from_phi(mode, phi, dphi)
            continue
        if res.status == "end":
            cause = "extent"
        elif res.status == "event":
            cause = {"degenerate": "degeneracy-locus"}.get(res.event, res.event)
        elif res.status == "underflow":
            cause = "step-underflow"
        else:
            raise NumericalError("explicit geodesic integration exceeded the step budget")
        x_end = float(res.t[-1])
        if cause == "degeneracy-locus" and len(rows) > 2:
            # the right-hand side is 0/0 at the located end; keep it out of the interpolant
            runs[-1] = (mode, rows[:-1])
        return runs, cause, x_end
    raise NumericalError("too many variable switches while integrating explicit geodesic")


def _assemble(h, x0, back_runs, fwd_runs, causes, ends):
    """Merge backward and forward runs into an ExplicitGeodesic."""
    runs = []
    for mode, rows in reversed(back_runs):
        runs.append((mode, rows[::-1]))
    runs.extend(fwd_runs)
    # join the two runs that meet at x0 when they share a mode
    merged = []
    for mode, rows in runs:
        if merged and merged[-1][0] == mode and merged[-1][1][-1, 0] == rows[0, 0]:
            merged[-1] = (mode, np.vstack([merged[-1][1], rows[1:]]))
        else:
            merged.append((mode, rows))
    cleaned = []
    for mode, rows in merged:
        keep = np.concatenate([[True], np.diff(rows[:, 0]) > 1e-14 * (1 + np.abs(rows[1:, 0]))])
        rows = rows[keep]
        if len(rows) >= 2:
            cleaned.append((mode, rows))
    if not cleaned:
        raise NumericalError("explicit geodesic has an empty domain")
    curve = _ModalCurve(h, cleaned)
    xs = np.unique(np.concatenate([r[:, 0] for _, r in cleaned]))
    phi, dphi, d2phi = curve(xs)
    samples = np.column_stack([xs, phi, dphi, d2phi])
    return ExplicitGeodesic(h, x0, samples, ends[0], ends[1], curve, causes)


def integrate_explicit(h, x0: float, phi0: float, phiprime0: float,
                       tol: float = DEFAULT_TOL, max_extent: float = 20.0) -> ExplicitGeodesic:
    """Integrate an explicit geodesic through ``(x0, phi0)`` with slope ``phiprime0``.

    Runs both ways from ``x0`` until a domain end is found or ``max_extent``
    is covered; ends reached only by exhausting ``max_extent`` are reported
    with cause ``"extent"``.  The dense curve satisfies the geodesic equation
    to ``tol * (1 + |Phi''|)`` at interior points.
    """
    if not phi0 > 0:
        raise DomainError("phi0 must be positive")
    check_nondegenerate(x0, phi0, float(h(x0)))
    if not (tol > 0 and 0 < max_extent < math.inf):
        raise ValueError("tol and max_extent must be positive")
    # local error control runs below tol so the dense curve meets tol as a residual
    step_tol = tol / _STEP_SAFETY
    back, cause_b, end_b = _integrate_one_way(h, x0, phi0, phiprime0, -1.0, step_tol, max_extent)
    fwd, cause_f, end_f = _integrate_one_way(h, x0, phi0, phiprime0, 1.0, step_tol, max_extent)
    return _assemble(h, x0, back, fwd, (cause_b, cause_f), (end_b, end_f))


def explicit_from_parametric(traj: GeodesicTrajectory) -> ExplicitGeodesic:
    """Reparametrize a trajectory by x on the sub-span around its initial state
    where xdot keeps one sign.  Uses Phi' = phidot/xdot and
    Phi'' = (phiddot - Phi' xddot) / xdot^2 at the nodes.
    """
    xd = traj.states[:, 2]
    i0 = traj.i0
    scale = 1e-12 * (1 + np.max(np.abs(xd)))
    if abs(xd[i0]) <= scale:
        raise PreconditionError("trajectory is vertical at its initial state (xdot = 0)")
    sgn = np.sign(xd[i0])
    ok = sgn * xd > scale
    lo = i0
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    hi = i0
    while hi < len(xd) - 1 and ok[hi + 1]:
        hi += 1
    if hi - lo < 2:
        raise PreconditionError("no sub-span with xdot bounded away from zero")
    st = traj.states[lo:hi + 1]
    der = traj.derivs[lo:hi + 1]
    x, phi, xdot, phidot = st.T
    xdd, pdd = der[:, 2], der[:, 3]
    dphi = phidot / xdot
    d2phi = (pdd - dphi * xdd) / xdot**2
    rows = np.column_stack([x, phi, dphi, d2phi])
    if sgn < 0:
        rows = rows[::-1]
    poly = quintic_hermite(rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3])

    def curve(xq):
        out = [poly(xq, nu) for nu in range(3)]
        if np.ndim(xq) == 0:
            return tuple(float(o[0]) for o in out)
        return tuple(o[:, 0] for o in out)

    def cause(idx, term):
        if idx in (0, len(xd) - 1):
            return term.value if term is not None else "extent"
        return "turning"

    term_lo = traj.termination_backward if traj.i0 > 0 else traj.termination
    ends = [cause(lo, term_lo), cause(hi, traj.termination)]
    if sgn < 0:
        ends.reverse()
    return ExplicitGeodesic(traj.h, traj.states[i0, 0], rows, rows[0, 0], rows[-1, 0], curve,
                            tuple(ends))


# --------------------------------------------------------------------------- closed forms


@dataclass(frozen=True)
class Zero:
    """h = 0:  Phi(x) = (C1^2 - (x + C2)^2)^(-1/2)."""

    C1: float
    C2: float = 0.0


@dataclass(frozen=True)
class MinusOmega2:
    """h = -omega^2:  Phi(x) = omega on the whole line."""

    omega: float


@dataclass(frozen=True)
class PlusOmega2:
    """h = +omega^2:  Phi(x) = omega sqrt(tan(omega (x - xbar)) / tan(omega (x - xbar - xtilde)))
    on the k-th interval."""

    omega: float
    xbar: float = 0.0
    xtilde: float = math.pi / 6
    k: int = 0


ClosedForm = Union[Zero, MinusOmega2, PlusOmega2]


def closed_form_h(kind: ClosedForm) -> HFunction:
    if isinstance(kind, Zero):
        return HFunction.constant(0.0)
    if isinstance(kind, MinusOmega2):
        return HFunction.parse("-omega^2", omega=kind.omega)
    return HFunction.parse("omega^2", omega=kind.omega)


def closed_form_domain(kind: ClosedForm) -> tuple[float, float]:
    if isinstance(kind, Zero):
        c = abs(kind.C1)
        return -c - kind.C2, c - kind.C2
    if isinstance(kind, MinusOmega2):
        return -math.inf, math.inf
    w = kind.omega
    return (kind.k * math.pi / (2 * w) + kind.xbar + kind.xtilde,
            kind.xbar + (kind.k + 1) * math.pi / (2 * w))


def closed_form_geodesic(kind: ClosedForm, x0: Optional[float] = None,
                         n_samples: int = 201, window: float = 10.0) -> ExplicitGeodesic:
    """Exact geodesic for h = 0, -omega^2, +omega^2 with exact domain ends.

    ``x0`` defaults to the domain midpoint (0 for the unbounded case, whose
    samples cover ``[-window, window]``).
    """
    if isinstance(kind, Zero):
        if kind.C1 == 0:
            raise PreconditionError("C1 must be non-zero")
        C1, C2 = abs(kind.C1), kind.C2

        def curve(x):
            u = np.asarray(x, dtype=float) + C2
            phi = (C1 * C1 - u * u) ** -0.5
            dphi = u * phi**3
            d2 = phi**3 + 3 * u * u * phi**5
            return (phi, dphi, d2) if np.ndim(x) else (float(phi), float(dphi), float(d2))

    elif isinstance(kind, MinusOmega2):
        if not kind.omega > 0:
            raise PreconditionError("omega must be positive")
        w = float(kind.omega)

        def curve(x):
            if np.ndim(x) == 0:
                return w, 0.0, 0.0
            z = np.zeros(np.shape(x))
            return z + w, z, z.copy()

    elif isinstance(kind, PlusOmega2):
        w, xbar, xt = float(kind.omega), float(kind.xbar), float(kind.xtilde)
        if not w > 0:
            raise PreconditionError("omega must be positive")
        if not 0 < xt < math.pi / (2 * w):
            raise PreconditionError("xtilde must lie in ]0, pi/(2 omega)[")

        def curve(x):
            xa = np.asarray(x, dtype=float)
            a = w * (xa - xbar)
            b = w * (xa - xbar - xt)
            phi = w * np.sqrt(np.tan(a) / np.tan(b))
            lp = w * (1 / np.sin(2 * a) - 1 / np.sin(2 * b))  # Phi'/Phi
            dlp = -2 * w * w * (np.cos(2 * a) / np.sin(2 * a) ** 2
                                - np.cos(2 * b) / np.sin(2 * b) ** 2)
            dphi = phi * lp
            d2 = phi * (lp * lp + dlp)
            return (phi, dphi, d2) if np.ndim(x) else (float(phi), float(dphi), float(d2))
    else:
        raise TypeError(f"unknown closed form {kind!r}")

    lo, hi = closed_form_domain(kind)
    if x0 is None:
        x0 = 0.0 if not math.isfinite(lo) else 0.5 * (lo + hi)
    if not lo < x0 < hi:
        raise PreconditionError(f"x0={x0} outside ]{lo}, {hi}[")
    a = lo if math.isfinite(lo) else x0 - window
    b = hi if math.isfinite(hi) else x0 + window
    # Chebyshev-like clustering keeps the sample set strictly inside open ends
    theta = np.linspace(0, math.pi, n_samples + 2)[1:-1]
    xs = np.sort(0.5 * (a + b) - 0.5 * (b - a) * np.cos(theta))
    phi, dphi, d2 = curve(xs)
    samples = np.column_stack([xs, phi, dphi, d2])
    return ExplicitGeodesic(closed_form_h(kind), x0, samples, lo, hi, curve, ("exact", "exact"))
