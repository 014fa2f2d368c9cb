"""Small shared numerical helpers: extrapolation and smooth cutoffs."""

from __future__ import annotations

import numpy as np


def fit_power_extrapolation(x, y):
    """Fit y = L + A * x**alpha and return (L, alpha, A).

    The exponent is not assumed; it is fit from the data (the asymptotic
    error models here have rates the theory does not pin down).  x must be
    positive and sorted decreasing or increasing; at least 3 points.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise ValueError("power-law extrapolation needs at least 3 points")

    def residual(alpha):
        basis = np.stack([np.ones_like(x), x**alpha], axis=1)
        coef, res, *_ = np.linalg.lstsq(basis, y, rcond=None)
        pred = basis @ coef
        return float(np.sum((y - pred) ** 2)), coef

    alphas = np.geomspace(0.2, 4.0, 161)
    scores = [residual(al)[0] for al in alphas]
    best = int(np.argmin(scores))
    # local refinement around the grid winner
    lo = alphas[max(best - 1, 0)]
    hi = alphas[min(best + 1, alphas.size - 1)]
    fine = np.linspace(lo, hi, 81)
    scores = [residual(al)[0] for al in fine]
    alpha = float(fine[int(np.argmin(scores))])
    _, coef = residual(alpha)
    return float(coef[0]), alpha, float(coef[1])


def smoothstep(t):
    """Quintic smoothstep: C^2, 0 at t<=0, 1 at t>=1."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


def wrap_angle(theta):
    """Reduce angles to [0, 2*pi)."""
    return np.mod(theta, 2.0 * np.pi)


def angular_distance(a, b):
    """Shortest angular distance between a and b, in [0, pi]."""
    return np.abs((np.asarray(a) - np.asarray(b) + np.pi) % (2.0 * np.pi) - np.pi)
