"""Boundary calculus on the unit disk and conformal charts.

Only the unit disk is meshed natively.  General domains enter through
conformal charts (identity and Moebius disk automorphisms), which is enough
to exercise the conformal renormalized-energy formula nontrivially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .trace import TraceField

TWO_PI = 2.0 * np.pi

# Golden-angle default keeps the lifting jump away from the axes and from
# typical test vortex locations.
DEFAULT_JUMP_ANGLE = TWO_PI * (1.0 - 2.0 / (1.0 + np.sqrt(5.0)))


@dataclass(frozen=True)
class BoundaryMesh:
    """Uniform node set on the unit circle with frame and curvature data."""

    M: int
    theta: np.ndarray
    nu: np.ndarray      # outer unit normal, shape (M, 2)
    tau: np.ndarray     # unit tangent = nu rotated by +pi/2
    kappa: np.ndarray   # curvature, identically 1 on the unit disk

    @property
    def spacing(self) -> float:
        return TWO_PI / self.M

    def quadrature(self, values: np.ndarray) -> float:
        """Trapezoid quadrature over the boundary (spectral on the circle)."""
        return float(np.sum(values) * self.spacing)


@dataclass(frozen=True)
class ConformalChart:
    """Conformal map Psi of the closed unit disk onto itself.

    kind is "identity" or "moebius"; for the Moebius automorphism
    Psi(z) = (z - a) / (1 - conj(a) z) with |a| < 1.
    """

    kind: str
    a: complex = 0.0 + 0.0j

    def __post_init__(self):
        if self.kind not in ("identity", "moebius"):
            raise ConfigurationError(f"unknown chart kind {self.kind!r}")
        if self.kind == "moebius" and abs(self.a) >= 1.0:
            raise ConfigurationError("Moebius parameter must satisfy |a| < 1")


def identity_chart() -> ConformalChart:
    return ConformalChart("identity")


def moebius_chart(a: complex) -> ConformalChart:
    return ConformalChart("moebius", complex(a))


def disk_boundary_mesh(M: int) -> BoundaryMesh:
    """Uniform boundary mesh of the unit disk with M nodes.

    M must be even and at least 8.  Node k sits at angle 2 pi k / M; the
    trapezoid rule on this mesh integrates trigonometric polynomials of
    degree < M/2 exactly.
    """
    if M < 8 or M % 2 != 0:
        raise ConfigurationError(f"boundary mesh needs even M >= 8, got {M}")
    theta = TWO_PI * np.arange(M) / M
    nu = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    tau = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    kappa = np.ones(M)
    return BoundaryMesh(M=M, theta=theta, nu=nu, tau=tau, kappa=kappa)


def tangent_lifting(mesh: BoundaryMesh, jump_angle: float = DEFAULT_JUMP_ANGLE) -> TraceField:
    """Lifting g of the tangent field, e^{i g} = i nu, with one 2 pi jump.

    Away from the jump g(theta) = theta + pi/2 on the disk; nodes strictly
    past jump_angle sit on the branch lowered by 2 pi, so the lifting drops
    by 2 pi at jump_angle and is periodic across the array seam.
    """
    alpha = float(jump_angle) % TWO_PI
    g = mesh.theta + 0.5 * np.pi - TWO_PI * (mesh.theta > alpha)
    out = TraceField(g)
    out.jump_angle = alpha
    return out


def shift_jump_away(jump_angle: float, vortex_angles, spacing: float, cells: int = 3) -> float:
    """Move the lifting jump if it lies within `cells` mesh cells of a vortex.

    Collisions between the bookkeeping jump of g and a physical vortex merge
    their degrees in detection, so callers that know candidate vortex
    locations shift the jump first.
    """
    alpha = float(jump_angle) % TWO_PI
    angles = np.atleast_1d(np.asarray(vortex_angles, dtype=float)) % TWO_PI
    if angles.size == 0:
        return alpha
    guard = cells * spacing
    for _ in range(64):
        d = np.abs((angles - alpha + np.pi) % TWO_PI - np.pi)
        if np.all(d > guard):
            return alpha
        alpha = (alpha + 2.0 * guard) % TWO_PI
    raise ConfigurationError("could not place the lifting jump away from vortices")


def chart_eval(chart: ConformalChart, z):
    """Evaluate (Psi(z), dPsi/dz) on the closed disk.

    Accepts scalars or arrays; |z| may exceed 1 by at most 1e-12.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainError("chart evaluation requires |z| <= 1")
    if chart.kind == "identity":
        return z + 0.0j, np.ones_like(z)
    a = chart.a
    denom = 1.0 - np.conj(a) * z
    psi = (z - a) / denom
    dpsi = (1.0 - abs(a) ** 2) / denom**2
    return psi, dpsi
