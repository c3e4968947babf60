"""Metric, connection and curvature of the (x, Phi) half-plane with metric

    g = ((h(x) - Phi^2)^2 dx^2 + dPhi^2) / Phi^2.

The metric degenerates on the locus Phi^2 = h(x).  Closed forms are cross
checked against :func:`fd_christoffel`, which differentiates the metric
components numerically and knows nothing about the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DomainError

__all__ = [
    "MhPoint",
    "MetricTensor2",
    "ChristoffelSet",
    "deg_margin",
    "check_nondegenerate",
    "metric",
    "christoffel",
    "riemann_xphixphi",
    "sectional_curvature",
    "ricci",
    "fd_christoffel",
]


@dataclass(frozen=True)
class MhPoint:
    x: float
    phi: float

    def __post_init__(self):
        if not self.phi > 0:
            raise DomainError(f"Phi must be positive, got {self.phi}")


@dataclass(frozen=True)
class MetricTensor2:
    """Symmetric 2x2 tensor in (x, Phi) components."""

    g_xx: float
    g_phiphi: float
    g_xphi: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([[self.g_xx, self.g_xphi], [self.g_xphi, self.g_phiphi]])

    @property
    def det(self) -> float:
        return self.g_xx * self.g_phiphi - self.g_xphi**2


@dataclass(frozen=True)
class ChristoffelSet:
    """Non-zero symbols; ``x_xphi`` stands for both orderings of the lower indices."""

    x_xx: float
    x_xphi: float
    phi_xx: float
    phi_phiphi: float
    x_phiphi: float = 0.0
    phi_xphi: float = 0.0

    def as_array(self) -> np.ndarray:
        """``G[i, j, k]`` = Gamma^i_jk with index 0 = x, 1 = Phi."""
        G = np.zeros((2, 2, 2))
        G[0, 0, 0] = self.x_xx
        G[0, 0, 1] = G[0, 1, 0] = self.x_xphi
        G[0, 1, 1] = self.x_phiphi
        G[1, 0, 0] = self.phi_xx
        G[1, 0, 1] = G[1, 1, 0] = self.phi_xphi
        G[1, 1, 1] = self.phi_phiphi
        return G


def deg_margin(phi, hval):
    """Distance to the locus below which a point counts as degenerate."""
    return 1e-9 * (1.0 + phi * phi + abs(hval))


def check_nondegenerate(x: float, phi: float, hval: float) -> None:
    if not phi > 0:
        raise DomainError(f"Phi must be positive, got {phi}")
    if abs(phi * phi - hval) < deg_margin(phi, hval):
        raise DegeneracyError(f"point (x={x}, Phi={phi}) lies on the locus Phi^2 = h(x)")


def metric(h, p: MhPoint) -> MetricTensor2:
    hv = float(h(p.x))
    d = hv - p.phi**2
    return MetricTensor2(d * d / p.phi**2, 1.0 / p.phi**2, 0.0)


def christoffel(h, p: MhPoint) -> ChristoffelSet:
    hv, dh, _ = h.jet(p.x)
    check_nondegenerate(p.x, p.phi, hv)
    phi2 = p.phi * p.phi
    return ChristoffelSet(
        x_xx=dh / (hv - phi2),
        x_xphi=(phi2 + hv) / (p.phi * (phi2 - hv)),
        phi_xx=(hv * hv - phi2 * phi2) / p.phi,
        phi_phiphi=-1.0 / p.phi,
    )


def riemann_xphixphi(h, p: MhPoint) -> float:
    """The single independent covariant component R_{x Phi x Phi}."""
    hv = float(h(p.x))
    check_nondegenerate(p.x, p.phi, hv)
    d = hv - p.phi**2
    return -(d * d) / p.phi**4


def sectional_curvature(h, p: MhPoint) -> float:
    g = metric(h, p)
    return riemann_xphixphi(h, p) / g.det


def ricci(h, p: MhPoint) -> MetricTensor2:
    """Ricci tensor R_ij = R^k_ikj assembled from the mixed Riemann components."""
    hv = float(h(p.x))
    check_nondegenerate(p.x, p.phi, hv)
    phi2 = p.phi**2
    # R^x_{Phi x Phi} and R^Phi_{x Phi x} (= -R^Phi_{x x Phi})
    r_x_phixphi = -1.0 / phi2
    r_phi_xphix = -((hv - phi2) ** 2) / phi2
    return MetricTensor2(g_xx=r_phi_xphix, g_phiphi=r_x_phixphi, g_xphi=0.0)


def _metric_components(h, x, phi):
    hv = float(h(x))
    return np.array([[(hv - phi * phi) ** 2 / phi**2, 0.0], [0.0, 1.0 / phi**2]])


def fd_christoffel(h, p: MhPoint, step: float | None = None) -> ChristoffelSet:
    """Christoffel symbols from central differences of the metric components.

    Uses Gamma^i_jk = 1/2 g^il (g_lj,k + g_lk,j - g_jk,l) with one Richardson
    refinement (steps ``step`` and ``step / 2``).
    """
    if step is None:
        step = 1e-4 * (1 + abs(p.x) + p.phi)
    if step >= p.phi:
        raise DomainError("finite-difference stencil leaves Phi > 0")
    for dx in (-step, 0.0, step):
        for dp in (-step, 0.0, step):
            check_nondegenerate(p.x + dx, p.phi + dp, float(h(p.x + dx)))

    def dg(hs):
        # dG[l, j, k] = d g_lj / d coord_k
        dG = np.empty((2, 2, 2))
        dG[:, :, 0] = (_metric_components(h, p.x + hs, p.phi)
                       - _metric_components(h, p.x - hs, p.phi)) / (2 * hs)
        dG[:, :, 1] = (_metric_components(h, p.x, p.phi + hs)
                       - _metric_components(h, p.x, p.phi - hs)) / (2 * hs)
        return dG

    d1, d2 = dg(step), dg(step / 2)
    dG = (4 * d2 - d1) / 3
    ginv = np.linalg.inv(_metric_components(h, p.x, p.phi))
    G = np.zeros((2, 2, 2))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                G[i, j, k] = 0.5 * sum(
                    ginv[i, l] * (dG[l, j, k] + dG[l, k, j] - dG[j, k, l]) for l in range(2)
                )
    return ChristoffelSet(
        x_xx=G[0, 0, 0],
        x_xphi=G[0, 0, 1],
        phi_xx=G[1, 0, 0],
        phi_phiphi=G[1, 1, 1],
        x_phiphi=G[0, 1, 1],
        phi_xphi=G[1, 0, 1],
    )
