"""Piecewise Hermite interpolation (cubic from y, y'; quintic from y, y', y'')."""

from __future__ import annotations

import numpy as np


class PiecewisePoly:
    """Piecewise polynomial in the local variable ``s = (x - x_i) / w_i``.

    ``coef`` has shape ``(n_segments, degree + 1, dim)``.  Points outside the
    node range are evaluated on the nearest end segment.
    """

    def __init__(self, x: np.ndarray, coef: np.ndarray):
        self.x = np.asarray(x, dtype=float)
        self.coef = np.asarray(coef, dtype=float)
        self.width = np.diff(self.x)
        if np.any(self.width == 0):
            raise ValueError("interpolation nodes must be distinct")
        self.increasing = self.width[0] > 0

    @property
    def domain(self) -> tuple[float, float]:
        return (float(min(self.x[0], self.x[-1])), float(max(self.x[0], self.x[-1])))

    def _segment(self, x: np.ndarray) -> np.ndarray:
        if self.increasing:
            idx = np.searchsorted(self.x, x, side="right") - 1
        else:
            idx = len(self.x) - 1 - np.searchsorted(self.x[::-1], x, side="left")
        return np.clip(idx, 0, len(self.width) - 1)

    def __call__(self, x, nu: int = 0):
        """Value (``nu=0``) or derivative of order ``nu`` at ``x``; trailing axis is ``dim``."""
        scalar = np.ndim(x) == 0
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        idx = self._segment(xa)
        w = self.width[idx]
        s = (xa - self.x[idx]) / w
        c = self.coef[idx]  # (m, deg+1, dim)
        deg = c.shape[1] - 1
        out = np.zeros((xa.size, c.shape[2]))
        for k in range(deg, nu - 1, -1):
            factor = 1.0
            for j in range(nu):
                factor *= k - j
            out = out * s[:, None] + factor * c[:, k, :] if k < deg else factor * c[:, k, :]
        out = out / (w ** nu)[:, None]
        return out[0] if scalar else out


def cubic_hermite(x, y, dy) -> PiecewisePoly:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).reshape(len(x), -1)
    dy = np.asarray(dy, dtype=float).reshape(len(x), -1)
    w = np.diff(x)[:, None]
    p0, p1 = y[:-1], y[1:]
    m0, m1 = dy[:-1] * w, dy[1:] * w
    coef = np.stack(
        [p0, m0, -3 * p0 - 2 * m0 + 3 * p1 - m1, 2 * p0 + m0 - 2 * p1 + m1], axis=1
    )
    return PiecewisePoly(x, coef)


def quintic_hermite(x, y, dy, d2y) -> PiecewisePoly:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).reshape(len(x), -1)
    dy = np.asarray(dy, dtype=float).reshape(len(x), -1)
    d2y = np.asarray(d2y, dtype=float).reshape(len(x), -1)
    w = np.diff(x)[:, None]
    p0, p1 = y[:-1], y[1:]
    m0, m1 = dy[:-1] * w, dy[1:] * w
    a0, a1 = d2y[:-1] * w * w, d2y[1:] * w * w
    c3 = -10 * p0 - 6 * m0 - 1.5 * a0 + 0.5 * a1 - 4 * m1 + 10 * p1
    c4 = 15 * p0 + 8 * m0 + 1.5 * a0 - a1 + 7 * m1 - 15 * p1
    c5 = -6 * p0 - 3 * m0 - 0.5 * a0 + 0.5 * a1 - 3 * m1 + 6 * p1
    coef = np.stack([p0, m0, 0.5 * a0, c3, c4, c5], axis=1)
    return PiecewisePoly(x, coef)


def hermite(x, *derivs) -> PiecewisePoly:
    """Two-point Hermite interpolant matching ``derivs = (y, y', y'', ...)`` at every node.

    With m derivative orders the pieces have degree 2m - 1.
    """
    x = np.asarray(x, dtype=float)
    m = len(derivs)
    d = [np.asarray(v, dtype=float).reshape(len(x), -1) for v in derivs]
    w = np.diff(x)[:, None]
    fact = [float(np.prod(np.arange(1, j + 1))) for j in range(2 * m)]
    # scaled left/right data: w^j y^(j) / j!
    left = [d[j][:-1] * w**j / fact[j] for j in range(m)]
    right = [d[j][1:] * w**j / fact[j] for j in range(m)]
    # conditions at s = 1: sum_k C(k, j) c_k = right_j for j < m
    M = np.array([[_binom(k, j) for k in range(m, 2 * m)] for j in range(m)])
    rhs = np.stack([right[j] - sum(_binom(k, j) * left[k] for k in range(j, m))
                    for j in range(m)], axis=0)  # (m, nseg, dim)
    high = np.linalg.solve(M, rhs.reshape(m, -1)).reshape(rhs.shape)
    coef = np.stack(left + [high[i] for i in range(m)], axis=1)
    return PiecewisePoly(x, coef)


def _binom(n: int, k: int) -> float:
    if k > n:
        return 0.0
    out = 1.0
    for i in range(k):
        out = out * (n - i) / (i + 1)
    return out
