"""Full vector-valued functional on polar grids over the unit disk.

Bridges the vector model (Dirichlet + DMI + potential + boundary penalty)
and the lifting model: energies of 2-vector fields, the global Jacobian
pairing, and unit-length projection with spanning-tree phase lifting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundarymin import EnergyBreakdown
from .errors import ConfigurationError, ProjectionError
from .renorm import DmiVector

TWO_PI = 2.0 * np.pi


@dataclass
class PolarField:
    """2-vector field sampled on a cell-centered polar grid over the disk.

    v has shape (Nr, Ntheta, 2); node (i, k) sits at radius (i + 1/2)/Nr and
    angle 2 pi k / Ntheta.  The half-cell radial offset avoids the r = 0
    coordinate singularity.
    """

    v: np.ndarray

    def __post_init__(self):
        self.v = np.asarray(self.v, dtype=float)
        if self.v.ndim != 3 or self.v.shape[2] != 2:
            raise ConfigurationError("polar field must have shape (Nr, Ntheta, 2)")
        if not np.all(np.isfinite(self.v)):
            raise ConfigurationError("polar field values must be finite")

    @property
    def Nr(self) -> int:
        return self.v.shape[0]

    @property
    def Ntheta(self) -> int:
        return self.v.shape[1]

    @property
    def r(self) -> np.ndarray:
        return (np.arange(self.Nr) + 0.5) / self.Nr

    @property
    def theta(self) -> np.ndarray:
        return TWO_PI * np.arange(self.Ntheta) / self.Ntheta


def polar_field_from_function(fn, Nr: int, Ntheta: int) -> PolarField:
    """Sample fn(x, y) -> (v1, v2) on the polar grid."""
    r = (np.arange(Nr) + 0.5) / Nr
    th = TWO_PI * np.arange(Ntheta) / Ntheta
    rr, tt = np.meshgrid(r, th, indexing="ij")
    xx, yy = rr * np.cos(tt), rr * np.sin(tt)
    v1, v2 = fn(xx, yy)
    return PolarField(np.stack([v1, v2], axis=2))


def _polar_derivatives(field: np.ndarray, Nr: int, Ntheta: int):
    """Second-order d/dr and d/dtheta on the cell-centered polar grid.

    Central differences inside, one-sided three-point stencils on the first
    and last radial rings; theta is periodic.
    """
    dr = 1.0 / Nr
    dth = TWO_PI / Ntheta
    d_r = np.empty_like(field)
    d_r[1:-1] = (field[2:] - field[:-2]) / (2 * dr)
    d_r[0] = (-3 * field[0] + 4 * field[1] - field[2]) / (2 * dr)
    d_r[-1] = (3 * field[-1] - 4 * field[-2] + field[-3]) / (2 * dr)
    d_th = (np.roll(field, -1, axis=1) - np.roll(field, 1, axis=1)) / (2 * dth)
    return d_r, d_th


def _cartesian_gradients(field: PolarField):
    """d/dx and d/dy of both components, shape (Nr, Ntheta, 2)."""
    Nr, Nt = field.Nr, field.Ntheta
    d_r, d_th = _polar_derivatives(field.v, Nr, Nt)
    r = field.r[:, None, None]
    th = field.theta[None, :, None]
    cos_t, sin_t = np.cos(th), np.sin(th)
    d_x = cos_t * d_r - sin_t / r * d_th
    d_y = sin_t * d_r + cos_t / r * d_th
    return d_x, d_y


def _cell_weights(Nr: int, Ntheta: int) -> np.ndarray:
    r = (np.arange(Nr) + 0.5) / Nr
    return (r * (1.0 / Nr) * (TWO_PI / Ntheta))[:, None]


def energy_full(
    v: PolarField,
    eps: float,
    eta: float,
    delta: DmiVector,
    mesh=None,
) -> EnergyBreakdown:
    """Dirichlet + DMI + potential + boundary-penalty energy of the field.

    dirichlet = int |grad v|^2, dmi = 2 int delta . (grad v wedge v),
    potential = (1/eta^2) int (1 - |v|^2)^2, and the boundary penalty
    (1/(2 pi eps)) int (v . nu)^2 is sampled on the outermost ring with the
    unit-circle arclength measure.
    """
    if eps <= 0 or eta <= 0:
        raise ConfigurationError("eps and eta must be positive")
    d_x, d_y = _cartesian_gradients(v)
    w = _cell_weights(v.Nr, v.Ntheta)

    dirichlet = float(np.sum((d_x**2 + d_y**2).sum(axis=2) * w))

    # grad v wedge v, per direction: (d v1) v2 - (d v2) v1
    wedge_x = d_x[:, :, 0] * v.v[:, :, 1] - d_x[:, :, 1] * v.v[:, :, 0]
    wedge_y = d_y[:, :, 0] * v.v[:, :, 1] - d_y[:, :, 1] * v.v[:, :, 0]
    dmi = float(2.0 * np.sum((delta.dx * wedge_x + delta.dy * wedge_y) * w))

    sq = (v.v**2).sum(axis=2)
    potential = float(np.sum((1.0 - sq) ** 2 * w) / eta**2)

    th = v.theta
    nu = np.stack([np.cos(th), np.sin(th)], axis=1)
    v_bd = v.v[-1]
    vdotnu = v_bd[:, 0] * nu[:, 0] + v_bd[:, 1] * nu[:, 1]
    boundary = float(np.sum(vdotnu**2) * (TWO_PI / v.Ntheta) / (TWO_PI * eps))

    return EnergyBreakdown(
        dirichlet=dirichlet, dmi=dmi, boundary_penalty=boundary, potential=potential
    )


def global_jacobian(v: PolarField, zeta: np.ndarray) -> float:
    """Pairing <J(v), zeta> = -int (v wedge grad v) . grad-perp zeta.

    zeta is the test function sampled on the same grid; a constant zeta
    pairs to exactly zero because its discrete gradient vanishes pointwise.
    """
    zeta = np.asarray(zeta, dtype=float)
    if zeta.shape != (v.Nr, v.Ntheta):
        raise ConfigurationError("test function must be sampled on the field grid")
    d_x, d_y = _cartesian_gradients(v)
    # v wedge d v = v1 (d v2) - v2 (d v1)
    jx = v.v[:, :, 0] * d_x[:, :, 1] - v.v[:, :, 1] * d_x[:, :, 0]
    jy = v.v[:, :, 0] * d_y[:, :, 1] - v.v[:, :, 1] * d_y[:, :, 0]
    zf = PolarField(np.stack([zeta, np.zeros_like(zeta)], axis=2))
    z_x, z_y = _cartesian_gradients(zf)
    w = _cell_weights(v.Nr, v.Ntheta)
    # grad-perp zeta = (-d_y zeta, d_x zeta)
    integrand = jx * (-z_y[:, :, 0]) + jy * z_x[:, :, 0]
    return float(-np.sum(integrand * w))


def project_and_lift(v: PolarField, tol: float = 0.5):
    """Normalize to unit length and lift the phase on a spanning tree.

    Returns (V, phi) with V = v/|v| and e^{i phi} = V at every node; phi is
    integrated along the k = 0 radial spoke and then angularly around each
    ring, and a loop-residue audit over random plaquettes guards against
    interior vortices that would make the lifting multivalued.
    """
    norm = np.hypot(v.v[:, :, 0], v.v[:, :, 1])
    if np.min(norm) < tol:
        i, k = np.unravel_index(np.argmin(norm), norm.shape)
        raise ProjectionError(
            f"|v| = {norm[i, k]:.3g} < {tol} at node (r index {i}, theta index {k}); "
            "possible interior vortex"
        )
    V = v.v / norm[:, :, None]
    w = V[:, :, 0] + 1j * V[:, :, 1]

    phi = np.empty((v.Nr, v.Ntheta))
    phi[0, 0] = np.angle(w[0, 0])
    spoke = np.angle(w[1:, 0] / w[:-1, 0])
    phi[1:, 0] = phi[0, 0] + np.cumsum(spoke)
    ring_steps = np.angle(w[:, 1:] / w[:, :-1])
    phi[:, 1:] = phi[:, 0, None] + np.cumsum(ring_steps, axis=1)

    rng = np.random.default_rng(0)
    ii = rng.integers(0, v.Nr - 1, size=100)
    kk = rng.integers(0, v.Ntheta, size=100)
    kk2 = (kk + 1) % v.Ntheta
    loop = (
        np.angle(w[ii + 1, kk] / w[ii, kk])
        + np.angle(w[ii + 1, kk2] / w[ii + 1, kk])
        + np.angle(w[ii, kk2] / w[ii + 1, kk2])
        + np.angle(w[ii, kk] / w[ii, kk2])
    )
    if np.max(np.abs(loop)) > 1e-6:
        raise ProjectionError(
            "nonzero loop residue in phase lifting; field carries an interior vortex"
        )
    return PolarField(V), phi
