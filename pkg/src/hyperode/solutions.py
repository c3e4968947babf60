"""Solutions of u'' + h u = 0 built from explicit geodesics, and the way back.

A geodesic Phi(x) yields two logarithmic derivatives

    Theta_top = Phi (Phi' - L) / (h - Phi^2),   Theta_bot = Phi (Phi' + L) / (h - Phi^2),
    L = sqrt((h - Phi^2)^2 + Phi'^2),

whose exponentiated integrals are positive solutions normalised to 1 at the
anchor x0.  Conversely two admissible solutions give
Phi = sqrt(-u1' u2' / (u1 u2)).

:func:`direct_solve` integrates the linear equation itself with scipy's RK45
and serves as the independent oracle for everything above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import _quad
from .errors import DegeneracyError, DomainError, NumericalError, PreconditionError
from .expr import HFunction, Jet2
from .geodesic import ExplicitGeodesic, explicit_rhs
from .geometry import deg_margin

__all__ = [
    "theta",
    "theta_prime",
    "DenseSolution",
    "FunctionSolution",
    "ODESolution",
    "LinearCombination",
    "SolutionPair",
    "build_solution_pair",
    "ode_residual",
    "riccati_residual",
    "direct_solve",
    "airy_series",
    "wronskian",
    "phi_from_pair",
    "geodesic_from_pair",
    "ReconstructionReport",
    "verify_reconstruction",
    "general_solution",
    "ReducedForm",
    "reduce_general",
    "solve_original",
]


# --------------------------------------------------------------------------- Theta


def theta(h, phi, phiprime, x):
    """``(Theta_top, Theta_bot)`` at ``x``; vectorized.

    Each branch uses whichever of the direct and the conjugate-rationalized
    forms avoids subtracting nearly equal numbers:
    ``Theta_top = Phi (Phi^2 - h) / (Phi' + L)`` for ``Phi' >= 0``,
    ``Theta_bot = Phi (h - Phi^2) / (L - Phi')`` for ``Phi' < 0``.
    """
    hv = h(x)
    phi = np.asarray(phi, dtype=float)
    dphi = np.asarray(phiprime, dtype=float)
    gap = hv - phi * phi
    if np.any(phi <= 0):
        raise DomainError("Phi must be positive")
    if np.any(np.abs(gap) < deg_margin(phi, np.abs(hv))):
        raise DomainError("Theta evaluated on the locus Phi^2 = h(x)")
    L = np.hypot(gap, dphi)
    with np.errstate(divide="ignore", invalid="ignore"):
        top = np.where(dphi >= 0, -phi * gap / (dphi + L), phi * (dphi - L) / gap)
        bot = np.where(dphi < 0, phi * gap / (L - dphi), phi * (dphi + L) / gap)
    if top.ndim == 0:
        return float(top), float(bot)
    return top, bot


def _theta_jets(phi: Jet2, dphi: Jet2, hj: Jet2):
    gap = hj - phi * phi
    L = (gap * gap + dphi * dphi).sqrt()
    top_r = -1.0 * phi * gap / (dphi + L)
    top_d = phi * (dphi - L) / gap
    bot_r = phi * gap / (L - dphi)
    bot_d = phi * (dphi + L) / gap
    pos = np.asarray(dphi.v) >= 0
    pick = lambda a, b, m: Jet2(np.where(m, a.v, b.v), np.where(m, a.d1, b.d1), 0.0)
    return pick(top_r, top_d, pos), pick(bot_d, bot_r, pos)


def theta_prime(h, x, phi, dphi, d2phi):
    """``(Theta_top', Theta_bot')`` by first-order jet propagation of (Phi, Phi', h)."""
    x = np.asarray(x, dtype=float)
    hv, dh, _ = h.jet(x)
    zero = np.zeros_like(np.asarray(phi, dtype=float))
    top, bot = _theta_jets(Jet2(phi, dphi, zero), Jet2(dphi, d2phi, zero), Jet2(hv + zero, dh + zero, zero))
    return top.d1, bot.d1


# --------------------------------------------------------------------------- dense solutions


class DenseSolution:
    """A solution of u'' + h u = 0 on an interval; ``sol(x)`` returns ``(u, u')``."""

    domain: tuple[float, float] = (-math.inf, math.inf)

    def __call__(self, x):
        raise NotImplementedError

    def u(self, x):
        return self(x)[0]

    def du(self, x):
        return self(x)[1]

    def sample(self, xs) -> np.ndarray:
        """Rows ``(x, u, u')``."""
        xs = np.asarray(xs, dtype=float)
        u, du = self(xs)
        return np.column_stack([xs, u, du])


class FunctionSolution(DenseSolution):
    def __init__(self, u: Callable, du: Callable, domain=(-math.inf, math.inf), name: str = ""):
        self._u, self._du = u, du
        self.domain = domain
        self.name = name

    def __call__(self, x):
        x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
        return self._u(x), self._du(x)

    def __repr__(self):
        return f"FunctionSolution({self.name or '?'}, domain={self.domain})"


class LinearCombination(DenseSolution):
    def __init__(self, A: float, s1: DenseSolution, B: float, s2: DenseSolution):
        self.A, self.B, self.s1, self.s2 = float(A), float(B), s1, s2
        self.domain = (max(s1.domain[0], s2.domain[0]), min(s1.domain[1], s2.domain[1]))

    def __call__(self, x):
        u1, d1 = self.s1(x)
        u2, d2 = self.s2(x)
        return self.A * u1 + self.B * u2, self.A * d1 + self.B * d2


class ODESolution(DenseSolution):
    """Dense output of :func:`direct_solve`, pieced together around the start point."""

    def __init__(self, x0: float, u0: float, up0: float, left, right, domain):
        self.x0, self.u0, self.up0 = x0, u0, up0
        self._left, self._right = left, right
        self.domain = domain

    def __call__(self, x):
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        lo, hi = self.domain
        if np.any(xa < lo - 1e-12 * (1 + abs(lo))) or np.any(xa > hi + 1e-12 * (1 + abs(hi))):
            raise DomainError(f"evaluation outside the solved interval [{lo}, {hi}]")
        out = np.empty((2, xa.size))
        right = xa >= self.x0
        if np.any(right):
            out[:, right] = self._right(xa[right]) if self._right else self.u0
        if np.any(~right):
            out[:, ~right] = self._left(xa[~right])
        if np.ndim(x) == 0:
            return float(out[0, 0]), float(out[1, 0])
        return out[0], out[1]


def direct_solve(h, x0: float, u0: float, uprime0: float, span: tuple[float, float],
                 tol: float = 1e-12) -> ODESolution:
    """Integrate (u, u')' = (u', -h u) from ``x0`` to both ends of ``span``.

    Uses scipy's RK45 with dense output so it shares no code with the
    geodesic route.
    """
    a, b = map(float, span)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not a <= x0 <= b or a == b:
        raise ValueError(f"span {span} must contain x0={x0}")

    def rhs(x, y):
        return [y[1], -h(x) * y[0]]

    pieces = []
    for end in (a, b):
        if end == x0:
            pieces.append(None)
            continue
        res = solve_ivp(rhs, (x0, end), [u0, uprime0], method="RK45", rtol=tol,
                        atol=tol * 1e-2, dense_output=True)
        if not res.success:
            raise NumericalError(f"direct solve failed: {res.message}")
        pieces.append(res.sol)
    return ODESolution(x0, u0, uprime0, pieces[0], pieces[1], (a, b))


def airy_series(x, u0: float, uprime0: float, n_terms: int = 80):
    """``(u, u')`` of u'' + x u = 0 from its Maclaurin series.

    Coefficients satisfy a_{n+2} = -a_{n-1} / ((n+2)(n+1)); accurate for |x| <~ 4.
    """
    a = np.zeros(n_terms)
    a[0], a[1] = u0, uprime0
    for n in range(1, n_terms - 2):
        a[n + 2] = -a[n - 1] / ((n + 2) * (n + 1))
    x = np.asarray(x, dtype=float)
    u = np.polynomial.polynomial.polyval(x, a)
    du = np.polynomial.polynomial.polyval(x, a[1:] * np.arange(1, n_terms))
    return u, du


def wronskian(s1: DenseSolution, s2: DenseSolution, x):
    """u1' u2 - u1 u2'."""
    u1, d1 = s1(x)
    u2, d2 = s2(x)
    return d1 * u2 - u1 * d2


# --------------------------------------------------------------------------- geodesic -> solutions


class _LogSolution(DenseSolution):
    """exp(cumulative integral of Theta) with u' = Theta u."""

    def __init__(self, pair: "SolutionPair", branch: int):
        self.pair = pair
        self.branch = branch
        self.domain = pair.domain

    def __call__(self, x):
        logu = self.pair.log_u(x)[self.branch]
        th = self.pair.theta(x)[self.branch]
        u = np.exp(logu)
        return u, th * u

    def __repr__(self):
        return f"<u_{'top' if self.branch == 0 else 'bot'} anchored at {self.pair.x0:g}>"


@dataclass
class SolutionPair:
    """u_top, u_bot built from a geodesic, both equal to 1 at ``x0``.

    Log-solutions are cumulative Gauss-Kronrod integrals of Theta over the
    geodesic's dense output, tabulated at the geodesic nodes.
    """

    h: object
    geo: ExplicitGeodesic
    x0: float
    nodes: np.ndarray
    cum: np.ndarray  # (n, 2) integrals of (Theta_top, Theta_bot) from x0 to each node
    quad_tol: float = 1e-11
    bounds: tuple[float, float] = (math.nan, math.nan)
    top: DenseSolution = field(init=False, repr=False)
    bot: DenseSolution = field(init=False, repr=False)

    def __post_init__(self):
        self.top = _LogSolution(self, 0)
        self.bot = _LogSolution(self, 1)

    @property
    def domain(self) -> tuple[float, float]:
        """Open interval on which the log-solutions may be evaluated."""
        return self.bounds

    def theta(self, x):
        phi, dphi, _ = self.geo(x)
        return theta(self.h, phi, dphi, x)

    def _integrand(self, branch):
        return lambda xs: self.theta(xs)[branch]

    def log_u(self, x):
        """``(log u_top(x), log u_bot(x))``; vectorized."""
        scalar = np.ndim(x) == 0
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        lo, hi = self.domain
        if np.any(xa <= lo) or np.any(xa >= hi):
            raise DomainError(f"x outside the solution interval [{lo}, {hi}]")
        idx = np.clip(np.searchsorted(self.nodes, xa), 0, len(self.nodes) - 1)
        # anchor each point to its nearest node
        left = np.clip(idx - 1, 0, len(self.nodes) - 1)
        use_left = np.abs(xa - self.nodes[left]) < np.abs(xa - self.nodes[idx])
        idx = np.where(use_left, left, idx)
        out = np.empty((2, xa.size))
        for j, (xv, i) in enumerate(zip(xa, idx)):
            for branch in (0, 1):
                extra = 0.0
                if xv != self.nodes[i]:
                    extra, _ = _quad.quad(self._integrand(branch), self.nodes[i], xv,
                                          abs_tol=self.quad_tol)
                out[branch, j] = self.cum[i, branch] + extra
        if scalar:
            return float(out[0, 0]), float(out[1, 0])
        return out[0], out[1]

    @property
    def wronskian(self) -> float:
        """u_top' u_bot - u_top u_bot' at x0 (where both equal 1)."""
        t, b = self.theta(self.x0)
        return t - b

    def wronskian_at(self, x):
        return wronskian(self.top, self.bot, x)


def build_solution_pair(h, geo: ExplicitGeodesic, x0: Optional[float] = None,
                        quad_tol: float = 1e-11) -> SolutionPair:
    """u_top and u_bot of a geodesic, normalised to 1 at ``x0`` (default: its anchor).

    The cumulative table stops early at a node where quadrature fails (Theta
    can blow up at the very ends of the domain); the pair's domain is then
    the tabulated range.
    """
    x0 = geo.x0 if x0 is None else float(x0)
    if not geo.x_minus < x0 < geo.x_plus:
        raise PreconditionError(f"anchor {x0} outside ]{geo.x_minus}, {geo.x_plus}[")
    xs = geo.samples[:, 0]
    xs = xs[(xs > geo.x_minus) & (xs < geo.x_plus)]
    nodes = np.unique(np.concatenate([xs, [x0]]))
    k0 = int(np.searchsorted(nodes, x0))
    cum = np.zeros((len(nodes), 2))

    def integrand(branch):
        def f(t):
            phi, dphi, _ = geo(t)
            return theta(h, phi, dphi, t)[branch]
        return f

    lo, hi = 0, len(nodes) - 1
    for direction in (1, -1):
        i = k0
        while 0 <= i + direction < len(nodes):
            j = i + direction
            try:
                for branch in (0, 1):
                    val, _ = _quad.quad(integrand(branch), nodes[i], nodes[j], abs_tol=quad_tol)
                    if not math.isfinite(val):
                        raise NumericalError("non-finite log-solution")
                    cum[j, branch] = cum[i, branch] + val
            except (NumericalError, DomainError):
                break
            i = j
        if direction == 1:
            hi = i
        else:
            lo = i
    if hi - lo < 1:
        raise NumericalError("could not integrate Theta away from the anchor")
    # past the outermost node the integral is still computed on demand
    left = geo.x_minus if lo == 0 else nodes[lo]
    right = geo.x_plus if hi == len(nodes) - 1 else nodes[hi]
    if lo != 0:
        left = np.nextafter(left, -math.inf)
    if hi != len(nodes) - 1:
        right = np.nextafter(right, math.inf)
    return SolutionPair(h, geo, x0, nodes[lo:hi + 1], cum[lo:hi + 1], quad_tol,
                        (float(left), float(right)))


def ode_residual(h, pair: SolutionPair, xs) -> float:
    """max over ``xs`` and both members of |Theta' + Theta^2 + h| * u.

    Theta' comes from differentiating the dense geodesic output, so this
    measures how well the sampled curve satisfies the geodesic equation.
    """
    xs = np.asarray(xs, dtype=float)
    phi, dphi, d2phi = pair.geo(xs)
    th = theta(h, phi, dphi, xs)
    thp = theta_prime(h, xs, phi, dphi, d2phi)
    hv = h(xs)
    worst = 0.0
    for branch, sol in ((0, pair.top), (1, pair.bot)):
        u = sol.u(xs)
        r = np.abs(thp[branch] + th[branch] ** 2 + hv) * np.abs(u)
        worst = max(worst, float(np.max(r)))
    return worst


def riccati_residual(h, geo: ExplicitGeodesic, xs):
    """|Theta' + Theta^2 + h| for both branches at ``xs`` (rows: top, bot)."""
    xs = np.asarray(xs, dtype=float)
    phi, dphi, d2phi = geo(xs)
    th = theta(h, phi, dphi, xs)
    thp = theta_prime(h, xs, phi, dphi, d2phi)
    hv = h(xs)
    return np.abs(np.stack([thp[0] + th[0] ** 2 + hv, thp[1] + th[1] ** 2 + hv]))


def general_solution(pair: SolutionPair, A: float, B: float) -> LinearCombination:
    """A u_top + B u_bot."""
    return LinearCombination(A, pair.top, B, pair.bot)


# --------------------------------------------------------------------------- solutions -> geodesic


def _pair_thetas(u1: DenseSolution, u2: DenseSolution, x):
    a, da = u1(x)
    b, db = u2(x)
    return a, da, b, db


def phi_from_pair(u1: DenseSolution, u2: DenseSolution, x):
    """Phi = sqrt(-u1' u2' / (u1 u2)); vectorized.

    Raises :class:`PreconditionError` naming the failed condition.
    """
    a, da, b, db = _pair_thetas(u1, u2, x)
    a, b = np.asarray(a), np.asarray(b)
    if np.any(a == 0):
        raise PreconditionError("u1 vanishes")
    if np.any(b == 0):
        raise PreconditionError("u2 vanishes")
    q = (np.asarray(da) / a) * (np.asarray(db) / b)
    if np.any(q >= 0):
        raise PreconditionError("u1'u2'/(u1 u2) is not negative")
    out = np.sqrt(-q)
    return float(out) if out.ndim == 0 else out


def _admissible(u1, u2, x, h=None, side: float = 0.0) -> bool:
    """Phi is defined at x and, when ``side`` is given, Phi^2 - h keeps that sign."""
    try:
        a, da, b, db = _pair_thetas(u1, u2, x)
    except DomainError:
        return False
    if not (a != 0 and b != 0 and (da / a) * (db / b) < 0):
        return False
    if side:
        p2 = -(da / a) * (db / b)
        hv = float(h(x))
        return bool(side * (p2 - hv) > deg_margin(math.sqrt(p2), hv))
    return True


def _scan_edge(u1, u2, x0, limit, h, side, n=400) -> float:
    """Last admissible point from x0 towards ``limit`` (bisection-refined)."""
    grid = np.linspace(x0, limit, n + 1)
    prev = x0
    for xv in grid[1:]:
        if not _admissible(u1, u2, xv, h, side):
            lo, hi = prev, xv
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if _admissible(u1, u2, mid, h, side):
                    lo = mid
                else:
                    hi = mid
            return lo
        prev = xv
    return float(limit)


def geodesic_from_pair(h, u1: DenseSolution, u2: DenseSolution, x0: float,
                       window: Optional[tuple[float, float]] = None,
                       n_samples: int = 201) -> ExplicitGeodesic:
    """The geodesic Phi(x) induced by an admissible pair around ``x0``.

    Phi' and Phi'' come from the Riccati equations of Theta_i = u_i'/u_i:
    Phi' = (Theta1 + Theta2)(h - Phi^2) / (2 Phi), and Phi'' from
    differentiating once more.  The domain is the connected admissible
    interval around ``x0`` inside ``window`` (default: the common domain of
    ``u1`` and ``u2``).
    """
    if not _admissible(u1, u2, x0):
        phi_from_pair(u1, u2, x0)  # raises with the precise reason
    lo_lim = max(u1.domain[0], u2.domain[0])
    hi_lim = min(u1.domain[1], u2.domain[1])
    if window is not None:
        lo_lim, hi_lim = max(lo_lim, window[0]), min(hi_lim, window[1])
    if not (math.isfinite(lo_lim) and math.isfinite(hi_lim)):
        raise PreconditionError("give a finite window for solutions defined on the whole line")
    phi0 = phi_from_pair(u1, u2, x0)
    hv0 = float(h(x0))
    if abs(phi0 * phi0 - hv0) <= deg_margin(phi0, hv0):
        raise DegeneracyError("the pair's Phi lies on the locus Phi^2 = h at x0")
    side = 1.0 if phi0 * phi0 > hv0 else -1.0
    x_minus = _scan_edge(u1, u2, x0, lo_lim, h, side)
    x_plus = _scan_edge(u1, u2, x0, hi_lim, h, side)

    def curve(x):
        a, da, b, db = _pair_thetas(u1, u2, x)
        t1, t2 = da / a, db / b
        phi = np.sqrt(-t1 * t2)
        hv, dh, _ = h.jet(x)
        gap = hv - phi * phi
        dphi = (t1 + t2) * gap / (2 * phi)
        dgap_over_phi = (dh - 2 * phi * dphi) / phi - gap * dphi / (phi * phi)
        d2phi = (phi * dphi / gap * dgap_over_phi
                 - (2 * hv + t1 * t1 + t2 * t2) * gap / (2 * phi))
        if np.ndim(x) == 0:
            return float(phi), float(dphi), float(d2phi)
        return phi, dphi, d2phi

    theta_ = np.linspace(0, math.pi, n_samples + 2)[1:-1]
    xs = np.sort(0.5 * (x_minus + x_plus) - 0.5 * (x_plus - x_minus) * np.cos(theta_))
    phi, dphi, d2 = curve(xs)
    samples = np.column_stack([xs, phi, dphi, d2])
    causes = tuple("window" if e in (lo_lim, hi_lim) else "inadmissible" for e in (x_minus, x_plus))
    return ExplicitGeodesic(h, x0, samples, x_minus, x_plus, curve, causes)


@dataclass
class ReconstructionReport:
    branch: str  # "u1->top" or "u1->bot"
    err_u1: float
    err_u2: float
    err_identity: float
    err_geodesic: float
    x_range: tuple[float, float]

    @property
    def max_error(self) -> float:
        return max(self.err_u1, self.err_u2, self.err_identity, self.err_geodesic)

    def passed(self, tol: float) -> bool:
        return self.max_error <= tol


def verify_reconstruction(h, u1: DenseSolution, u2: DenseSolution, x0: float,
                          window: Optional[tuple[float, float]] = None, margin: float = 0.02,
                          n_check: int = 41) -> ReconstructionReport:
    """Round trip pair -> Phi -> (u_top, u_bot) -> pair.

    Checks u1 = u1(x0) u_{top|bot}, u2 = u2(x0) u_{bot|top} (relative error),
    the identity Phi^2 u_top u_bot + u_top' u_bot' = 0 (relative to its
    largest term) and the geodesic residual of Phi.  u1 is assigned to the
    branch whose Theta has the sign of u1'/u1 at x0; Theta_top carries the
    sign of Phi^2 - h.
    """
    geo = geodesic_from_pair(h, u1, u2, x0, window)
    pair = build_solution_pair(h, geo, x0)
    lo, hi = pair.domain
    d = margin * (hi - lo)
    xs = np.linspace(lo + d, hi - d, n_check)

    a0, da0 = u1(x0)
    b0, _ = u2(x0)
    phi0 = geo.phi(x0)
    top_sign = np.sign(phi0 * phi0 - h(x0))
    u1_top = np.sign(da0 / a0) == top_sign
    s1, s2 = (pair.top, pair.bot) if u1_top else (pair.bot, pair.top)

    def rel(sol, ref, scale):
        v = sol.u(xs) * scale
        r = ref.u(xs)
        return float(np.max(np.abs(v - r) / np.maximum(np.abs(r), 1e-300)))

    err1 = rel(s1, u1, a0)
    err2 = rel(s2, u2, b0)
    phi, dphi, d2phi = geo(xs)
    ut, dut = pair.top(xs)
    ub, dub = pair.bot(xs)
    ident = phi * phi * ut * ub + dut * dub
    err_id = float(np.max(np.abs(ident) / (np.abs(phi * phi * ut * ub) + np.abs(dut * dub))))
    geo_res = d2phi - explicit_rhs(h, xs, phi, dphi)
    err_geo = float(np.max(np.abs(geo_res) / (1 + np.abs(d2phi))))
    return ReconstructionReport("u1->top" if u1_top else "u1->bot", err1, err2, err_id, err_geo,
                                (float(xs[0]), float(xs[-1])))


# --------------------------------------------------------------------------- normal form


class _ComposedH:
    """h(x) = a(t(x)) b(t(x)) with jets from dt/dx = a(t)."""

    def __init__(self, form: "ReducedForm"):
        self.form = form

    def jet(self, x) -> Jet2:
        scalar = np.ndim(x) == 0
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.array([self.form.t_of_x(float(v)) for v in xa])
        aj = self.form.a.jet(t)
        p = aj * self.form.b.jet(t)  # (ab, (ab)', (ab)'') in t
        av, da = np.asarray(aj.v, dtype=float), np.asarray(aj.d1, dtype=float)
        v = np.asarray(p.v, dtype=float) + 0 * t
        d1 = np.asarray(p.d1, dtype=float) * av
        d2 = av * (np.asarray(p.d2, dtype=float) * av + np.asarray(p.d1, dtype=float) * da)
        if scalar:
            return Jet2(float(v[0]), float(d1[0]), float(d2[0]))
        return Jet2(v, d1, d2)

    def __call__(self, x):
        return self.jet(x).v

    def deriv(self, x):
        return self.jet(x).d1


@dataclass
class ReducedForm:
    """Change of variable x(t) = integral_{t0}^t da/a taking (a u')' + b u = 0 to u'' + h u = 0."""

    a: HFunction
    b: HFunction
    t0: float
    t_span: tuple[float, float]
    x_span: tuple[float, float] = field(init=False)
    h: _ComposedH = field(init=False, repr=False)

    def __post_init__(self):
        lo, hi = self.t_span
        # cumulative table of x(t) so that lookups only integrate one short panel
        self._grid = np.linspace(lo, hi, 257)
        k0 = int(np.clip(np.searchsorted(self._grid, self.t0), 1, len(self._grid) - 1))
        self._grid = np.insert(self._grid, k0, self.t0)
        self._grid = np.unique(self._grid)
        k0 = int(np.searchsorted(self._grid, self.t0))
        pieces = [self._piece(a, b) for a, b in zip(self._grid[:-1], self._grid[1:])]
        cum = np.concatenate([[0.0], np.cumsum(pieces)])
        self._xtab = cum - cum[k0]
        self.x_span = tuple(sorted((float(self._xtab[0]), float(self._xtab[-1]))))
        self.h = _ComposedH(self)

    def _piece(self, a: float, b: float) -> float:
        return _quad.quad(lambda s: 1.0 / self.a(s), a, b, abs_tol=1e-14)[0]

    def _x_scalar(self, t: float) -> float:
        i = int(np.clip(np.searchsorted(self._grid, t) - 1, 0, len(self._grid) - 2))
        if t - self._grid[i] > self._grid[i + 1] - t:
            i += 1
        return float(self._xtab[i]) + self._piece(float(self._grid[i]), t)

    def x_of_t(self, t):
        """x(t) = integral of 1/a from t0 to t."""
        if np.ndim(t):
            return np.array([self._x_scalar(float(v)) for v in np.ravel(t)]).reshape(np.shape(t))
        return self._x_scalar(float(t))

    def t_of_x(self, x: float) -> float:
        """Inverse of x(t): table bracket, then Newton steps with dt/dx = a."""
        xt = self._xtab
        lo, hi = min(xt[0], xt[-1]), max(xt[0], xt[-1])
        if not lo - 1e-12 <= x <= hi + 1e-12:
            raise DomainError(f"x={x} outside the reduced interval [{lo}, {hi}]")
        inc = xt[-1] > xt[0]
        t = float(np.interp(x, xt, self._grid) if inc else np.interp(x, xt[::-1], self._grid[::-1]))
        for _ in range(20):
            step = (self._x_scalar(t) - x) * float(self.a(t))
            t = min(max(t - step, self._grid[0]), self._grid[-1])
            if abs(step) < 1e-15 * (1 + abs(t)):
                break
        return t

    def pullback(self, sol: DenseSolution, t):
        """u(t) = sol(x(t)) and du/dt = sol'(x(t)) / a(t)."""
        x = self.x_of_t(t)
        u, du = sol(x)
        return u, du / self.a(t)


def reduce_general(a: HFunction, b: HFunction, t0: float,
                   t_span: tuple[float, float]) -> ReducedForm:
    """Normal-form reduction of (a u')' + b u = 0 on ``t_span`` (which must contain t0).

    ``a`` and ``b`` are expressions in the variable ``t``.
    """
    lo, hi = map(float, t_span)
    if not lo <= t0 <= hi or lo == hi:
        raise ValueError(f"t_span {t_span} must contain t0={t0}")
    grid = np.linspace(lo, hi, 2001)
    av = a(grid)
    if np.any(av == 0) or np.any(np.sign(av) != np.sign(av[0])):
        raise PreconditionError("a(t) vanishes inside the working interval")
    form = ReducedForm(a, b, float(t0), (lo, hi))
    xg = form.x_of_t(grid[::50])
    if not (np.all(np.diff(xg) > 0) or np.all(np.diff(xg) < 0)):
        raise PreconditionError("x(t) is not monotone on the working interval")
    return form


def solve_original(a: HFunction, b: HFunction, t0: float, u0: float, du0: float,
                   span: tuple[float, float], tol: float = 1e-12):
    """RK45 solution of (a u')' + b u = 0 as the system u' = p/a, p' = -b u.

    Returns a callable ``t -> (u, du/dt)`` covering ``span``.
    """
    def rhs(t, y):
        return [y[1] / a(t), -b(t) * y[0]]

    p0 = du0 * float(a(t0))
    pieces = {}
    for end in span:
        if end != t0:
            res = solve_ivp(rhs, (t0, end), [u0, p0], method="RK45", rtol=tol,
                            atol=tol * 1e-2, dense_output=True)
            if not res.success:
                raise NumericalError(res.message)
            pieces[end > t0] = res.sol

    def sol(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((2, t.size))
        for side in (True, False):
            sel = (t >= t0) if side else (t < t0)
            if np.any(sel):
                out[:, sel] = pieces[side](t[sel]) if side in pieces else [[u0], [p0]]
        return out[0], out[1] / a(t)

    return sol
