"""Dormand-Prince 5(4) integrator with PI step control and event location.

Events are located by re-taking the last step with a shortened size until the
root of the event function is bracketed to ``1e-12 * (1 + |t|)``; the state
at the event therefore carries full 5th-order accuracy instead of whatever a
dense interpolant gives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from .errors import DomainError, NumericalError

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4

SAFETY = 0.9
BETA = 0.04
EXPO = 0.2 - 0.75 * BETA
FAC_MIN, FAC_MAX = 0.2, 10.0


@dataclass
class Event:
    """Scalar event function ``g(t, y)``.

    direction: +1 triggers only on - to + crossings, -1 only on + to -,
    0 on either.
    """

    name: str
    fn: Callable[[float, np.ndarray], float]
    direction: int = 0
    terminal: bool = True


@dataclass
class RKResult:
    t: np.ndarray
    y: np.ndarray  # (n, dim)
    f: np.ndarray  # (n, dim) derivative at each node
    status: str  # "end", "event", "underflow", "max_steps"
    event: Optional[str] = None
    nfev: int = 0
    rejected: int = 0
    stats: dict = field(default_factory=dict)


def _finite(a) -> bool:
    return bool(np.all(np.isfinite(a)))


def dp_step(fun, t, y, f0, h):
    """One Dormand-Prince step.  Returns ``(y_new, f_new, err_vector)``."""
    k = [f0]
    for i in range(1, 7):
        yi = y + h * sum(a * kj for a, kj in zip(A[i], k) if a != 0.0)
        k.append(np.asarray(fun(t + C[i] * h, yi), dtype=float))
    y_new = y + h * sum(b * kj for b, kj in zip(B5, k) if b != 0.0)
    err = h * sum(e * kj for e, kj in zip(E, k) if e != 0.0)
    return y_new, k[6], err


def _err_norm(err, y, y_new, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def _initial_step(fun, t0, y0, f0, direction, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, abs(span))
    y1 = y0 + direction * h0 * f0
    try:
        f1 = np.asarray(fun(t0 + direction * h0, y1), dtype=float)
        d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    except DomainError:
        return h0 * 1e-3
    if not np.isfinite(d2):
        return h0 * 1e-3
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, abs(span))


def integrate(
    fun: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: Sequence[float],
    t_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-10,
    events: Sequence[Event] = (),
    max_step: float = np.inf,
    first_step: Optional[float] = None,
    max_steps: int = 200_000,
    min_step_rel: float = 1e-14,
) -> RKResult:
    """Integrate ``y' = fun(t, y)`` from ``t0`` towards ``t_end`` (either direction).

    The right-hand side may raise :class:`DomainError` or return non-finite
    values on trial stages; such steps are rejected and retried smaller.
    Integration stops at ``t_end``, at the first terminal event, when the step
    size falls below ``min_step_rel * (1 + |t|)``, or after ``max_steps``.
    """
    if not (rtol > 0 and atol > 0):
        raise ValueError("tolerances must be positive")
    if t_end == t0:
        raise ValueError("empty integration span")
    direction = 1.0 if t_end > t0 else -1.0
    y = np.array(y0, dtype=float)
    f = np.asarray(fun(t0, y), dtype=float)
    if not (_finite(y) and _finite(f)):
        raise NumericalError("non-finite initial state or right-hand side")
    nfev = 1

    ts, ys, fs = [t0], [y.copy()], [f.copy()]
    t = t0
    h = abs(first_step) if first_step else _initial_step(fun, t0, y, f, direction, rtol, atol,
                                                        t_end - t0)
    h = min(h, max_step)
    err_old = 1e-4
    rejected = 0
    g_prev = [ev.fn(t, y) for ev in events]
    status, hit = "end", None

    for _ in range(max_steps):
        remaining = abs(t_end - t)
        if remaining <= min_step_rel * (1 + abs(t)):
            break
        last = h >= remaining
        if last:
            h = remaining
        h_min = min_step_rel * (1 + abs(t))
        while True:
            if h < h_min:
                status = "underflow"
                break
            step = direction * h
            try:
                y_new, f_new, err_vec = dp_step(fun, t, y, f, step)
                nfev += 6
                ok = _finite(y_new) and _finite(f_new) and _finite(err_vec)
            except DomainError:
                ok = False
            if not ok:
                rejected += 1
                h *= 0.25
                last = False
                continue
            err = _err_norm(err_vec, y, y_new, rtol, atol)
            if err <= 1.0:
                fac = SAFETY * max(err, 1e-10) ** (-EXPO) * err_old ** BETA
                fac = min(FAC_MAX, max(FAC_MIN, fac))
                err_old = max(err, 1e-4)
                h_next = min(h * fac, max_step)
                break
            rejected += 1
            h *= max(FAC_MIN, SAFETY * err ** (-EXPO))
            last = False
        if status == "underflow":
            break

        t_new = t_end if last else t + step
        # event detection on the accepted step
        fired = None
        g_new = []
        for i, ev in enumerate(events):
            try:
                g = ev.fn(t_new, y_new)
            except DomainError:
                g = np.nan
            g_new.append(g)
            a, b = g_prev[i], g
            if not np.isfinite(b) or not np.isfinite(a):
                continue
            crossed = (a < 0 <= b and ev.direction >= 0) or (a > 0 >= b and ev.direction <= 0)
            if crossed and ev.terminal:
                tau = _locate(fun, ev, t, y, f, step, a, b)
                if fired is None or tau < fired[1]:
                    fired = (i, tau)
        if fired is not None:
            i, tau = fired
            if tau > 0:
                y_ev, f_ev, _ = dp_step(fun, t, y, f, direction * tau)
                nfev += 6
                t, y, f = t + direction * tau, y_ev, f_ev
                ts.append(t)
                ys.append(y.copy())
                fs.append(f.copy())
            status, hit = "event", events[i].name
            break

        t, y, f = t_new, y_new, f_new
        ts.append(t)
        ys.append(y.copy())
        fs.append(f.copy())
        g_prev = g_new
        h = h_next
        if last:
            break
    else:
        status = "max_steps"

    return RKResult(np.array(ts), np.array(ys), np.array(fs), status, hit, nfev, rejected)


def _locate(fun, ev: Event, t, y, f, step, g_a, g_b) -> float:
    """Largest step length ``tau`` before ``ev`` changes sign, bracketed by bisection.

    The returned end of the bracket keeps the sign of ``g_a`` so the state
    there is still on the original side of the event.
    """
    direction = np.sign(step)
    lo, hi = 0.0, abs(step)
    xtol = 1e-12 * (1 + abs(t))
    positive = g_a > 0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        try:
            y_mid, _, _ = dp_step(fun, t, y, f, direction * mid)
            g_mid = ev.fn(t + direction * mid, y_mid)
        except DomainError:
            g_mid = np.nan
        if np.isfinite(g_mid) and g_mid != 0 and (g_mid > 0) == positive:
            lo = mid
        else:
            hi = mid
    return lo
