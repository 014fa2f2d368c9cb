"""Two-vortex renormalized-energy landscape on the disk.

Works with the reduced pair energy f(phi1, phi2) = W/(2*pi) for two
degree-one vortices at boundary angles phi1, phi2:

    f = -log(2)/2 - log(1 - cos(phi1 - phi2))/2
        - dx (sin phi1 + sin phi2) + dy (cos phi1 + cos phi2).

Provides the closed-form optimal pair (offset theta_delta from the
delta-perp axis), Newton refinement with saddle/minimum classification, and
pair minimization through a conformal chart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .errors import (
    ConvergenceError,
    DegenerateConfigurationError,
    DomainError,
    SingularConfigurationError,
)
from .geometry import BoundaryMesh, ConformalChart
from .renorm import DmiVector, VortexConfig, w_conformal

TWO_PI = 2.0 * np.pi

CLASSIFY_TOL = 1e-10


@dataclass(frozen=True)
class PairState:
    """Pair energy value, derivatives, and critical-point classification."""

    phi1: float
    phi2: float
    value: float
    grad: np.ndarray
    hessian: np.ndarray
    classification: str


def _classify(hessian: np.ndarray, tol: float = CLASSIFY_TOL) -> str:
    eig = np.linalg.eigvalsh(hessian)
    if np.any(np.abs(eig) <= tol):
        return "degenerate"
    if np.all(eig > 0):
        return "minimum"
    if np.all(eig < 0):
        return "maximum"
    return "saddle"


def pair_energy_derivatives(phi1: float, phi2: float, delta: DmiVector) -> PairState:
    """Value, gradient, and Hessian of the pair energy f at (phi1, phi2).

    2*pi*f equals the disk renormalized energy of the pair with degrees
    (1, 1).  The Hessian diagonal is 1/(2(1-cos(phi1-phi2))) + a_j . delta^perp
    and the off-diagonal is the negative of the first term.
    """
    dphi = phi1 - phi2
    cos_d = np.cos(dphi)
    if abs(1.0 - cos_d) < 1e-14:
        raise SingularConfigurationError("pair energy undefined for coincident angles")
    dx, dy = delta.dx, delta.dy
    value = (
        -0.5 * np.log(2.0)
        - 0.5 * np.log(1.0 - cos_d)
        - dx * (np.sin(phi1) + np.sin(phi2))
        + dy * (np.cos(phi1) + np.cos(phi2))
    )
    s = np.sin(dphi) / (2.0 * (1.0 - cos_d))
    a1_dot = dx * np.cos(phi1) + dy * np.sin(phi1)
    a2_dot = dx * np.cos(phi2) + dy * np.sin(phi2)
    grad = np.array([-s - a1_dot, s - a2_dot])
    c = 1.0 / (2.0 * (1.0 - cos_d))
    # a . delta^perp with delta^perp = (-dy, dx)
    a1_perp = -dy * np.cos(phi1) + dx * np.sin(phi1)
    a2_perp = -dy * np.cos(phi2) + dx * np.sin(phi2)
    hessian = np.array([[c + a1_perp, -c], [-c, c + a2_perp]])
    return PairState(
        phi1=float(phi1),
        phi2=float(phi2),
        value=float(value),
        grad=grad,
        hessian=hessian,
        classification=_classify(hessian),
    )


def theta_delta(mag: float) -> float:
    """Half-angle offset of the optimal pair from the delta-perp axis.

    theta_delta = arcsin(sqrt(1 + 1/(16 m^2)) - 1/(4 m)); its sine is the
    unique positive root of 2 m X^2 + X - 2 m = 0.
    """
    if mag <= 0:
        raise DomainError(
            "theta_delta requires |delta| > 0; at delta = 0 the optimal pair "
            "is the antipodal continuum"
        )
    x = np.sqrt(1.0 + 1.0 / (16.0 * mag * mag)) - 1.0 / (4.0 * mag)
    return float(np.arcsin(min(x, 1.0)))


def optimal_pair(delta: DmiVector):
    """Boundary angles of the minimizing vortex pair for delta != 0.

    The pair (theta + theta_delta, theta + pi - theta_delta) is symmetric
    about the delta-perp axis; returned sorted ascending in [0, 2*pi).
    """
    mag = delta.magnitude
    if mag == 0.0:
        raise DegenerateConfigurationError(
            "delta = 0 has no unique optimal pair: every antipodal pair "
            "minimizes (a continuum of minimizers)"
        )
    theta = delta.phase
    td = theta_delta(mag)
    pair = np.sort(np.mod([theta + td, theta + np.pi - td], TWO_PI))
    return float(pair[0]), float(pair[1])


def newton_classify(
    delta: DmiVector,
    init,
    max_iter: int = 100,
    tol: float = 1e-12,
) -> PairState:
    """Newton iteration on grad f with backtracking, then classification.

    Falls back to a gradient-descent step with Armijo backtracking whenever
    the Hessian is not positive definite, so nearby saddles do not capture
    descent runs.  A start that is already critical (|grad| <= tol) is
    classified immediately.
    """
    phi = np.array(init, dtype=float)
    state = pair_energy_derivatives(phi[0], phi[1], delta)
    for _ in range(max_iter):
        if np.max(np.abs(state.grad)) <= tol:
            return state
        H = state.hessian
        eig = np.linalg.eigvalsh(H)
        if np.all(eig > CLASSIFY_TOL):
            step = np.linalg.solve(H, -state.grad)
        else:
            step = -state.grad
        t = 1.0
        for _ in range(60):
            cand = phi + t * step
            try:
                new_state = pair_energy_derivatives(cand[0], cand[1], delta)
            except SingularConfigurationError:
                t *= 0.5
                continue
            armijo = new_state.value <= state.value + 1e-4 * t * float(state.grad @ step)
            if armijo or np.max(np.abs(new_state.grad)) < np.max(np.abs(state.grad)):
                phi, state = cand, new_state
                break
            t *= 0.5
        else:
            break
    if np.max(np.abs(state.grad)) <= tol:
        return state
    raise ConvergenceError(
        f"Newton did not reach |grad| <= {tol} in {max_iter} iterations",
        last_iterate=(float(phi[0]), float(phi[1])),
        grad_norm=float(np.max(np.abs(state.grad))),
    )


def minimize_w_pair_general(
    chart: ConformalChart,
    delta: DmiVector,
    mesh: BoundaryMesh,
    grid_n: int = 48,
):
    """Minimize the pair renormalized energy on a chart domain.

    Coarse grid_n x grid_n search over boundary-angle pairs of the conformal
    formula, followed by Nelder-Mead refinement.  Ties in the grid stage
    break lexicographically on (value, phi1, phi2) so concurrent sweeps stay
    deterministic.  Returns ((phi1, phi2), W).
    """
    if grid_n < 32:
        raise DomainError("grid_n must be at least 32")

    min_sep = 1e-7

    def objective(pair):
        p1, p2 = np.mod(pair[0], TWO_PI), np.mod(pair[1], TWO_PI)
        gap = np.abs((p1 - p2 + np.pi) % TWO_PI - np.pi)
        if gap < min_sep:
            return 1e12
        cfg = VortexConfig(angles=[p1, p2], degrees=[1, 1])
        return w_conformal(cfg, delta, chart, mesh)

    angles = TWO_PI * np.arange(grid_n) / grid_n
    best = None
    for i in range(grid_n):
        for j in range(i + 1, grid_n):
            val = objective((angles[i], angles[j]))
            key = (val, angles[i], angles[j])
            if best is None or key < best:
                best = key
    if best is None or not np.isfinite(best[0]):
        raise ConvergenceError("pair grid search found no finite energy value")

    res = scipy_minimize(
        objective,
        x0=np.array([best[1], best[2]]),
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 2000},
    )
    pair = np.sort(np.mod(res.x, TWO_PI))
    return (float(pair[0]), float(pair[1])), float(res.fun)
