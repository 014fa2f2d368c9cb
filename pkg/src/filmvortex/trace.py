"""Periodic boundary scalar fields with cached cosine/sine spectra.

A TraceField stores nodal values on the uniform circle mesh; the spectral
coefficients are derived from the values on demand and cached.  The nodal
values are the single source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError


@dataclass
class TraceField:
    """Scalar field on the uniform M-node mesh of the unit circle.

    values[k] lives at angle 2*pi*k/M.  The spectral representation is
        f(theta) = c0 + sum_{k=1}^{M/2} (a_k cos k theta + b_k sin k theta),
    where the Nyquist mode k = M/2 carries a cosine coefficient only.  K
    reports the highest full (cos+sin) mode, M/2 - 1.

    jump_angle is set by geometry.tangent_lifting to record where the
    tangent lifting drops by 2*pi; it is None for generic traces.
    """

    values: np.ndarray
    jump_angle: float | None = None
    _spec: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ConfigurationError("trace values must be a 1-D array")
        if self.values.size < 8 or self.values.size % 2 != 0:
            raise ConfigurationError(
                f"trace needs an even node count >= 8, got {self.values.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ConfigurationError("trace values must be finite")

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def K(self) -> int:
        return self.M // 2 - 1

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.M) / self.M

    def coeffs(self):
        """Return (c0, a, b) with a, b indexed 1..M/2 (slot 0 unused).

        b[M/2] is structurally zero.  Cached; invalidated only by
        constructing a new TraceField (values are treated as immutable).
        """
        if self._spec is None:
            M = self.M
            c = np.fft.rfft(self.values)
            half = M // 2
            a = np.zeros(half + 1)
            b = np.zeros(half + 1)
            a[1:half] = 2.0 * c[1:half].real / M
            b[1:half] = -2.0 * c[1:half].imag / M
            a[half] = c[half].real / M
            c0 = c[0].real / M
            self._spec = (c0, a, b)
        return self._spec

    def mean(self) -> float:
        return self.coeffs()[0]

    def h_half_seminorm(self) -> float:
        """Dirichlet energy of the harmonic extension: pi * sum k (a_k^2+b_k^2)."""
        _, a, b = self.coeffs()
        k = np.arange(a.size)
        return float(np.pi * np.sum(k * (a * a + b * b)))

    def synthesize(self, theta: np.ndarray) -> np.ndarray:
        """Evaluate the truncated Fourier series at arbitrary angles."""
        return self.harmonic_eval(np.ones_like(theta), theta)

    def harmonic_eval(self, r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        """Evaluate c0 + sum r^k (a_k cos k theta + b_k sin k theta).

        This is the harmonic extension of the trace to the closed disk,
        evaluated at polar points (r, theta) with r <= 1.
        """
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if np.any(r > 1.0 + 1e-12):
            raise DomainError("harmonic evaluation requires r <= 1")
        c0, a, b = self.coeffs()
        half = self.M // 2
        # Horner in w = r e^{i theta}: sum (a_k - i b_k) w^k has real part
        # sum r^k (a_k cos + b_k sin).
        coef = a[1:] - 1j * b[1:]
        w = np.clip(r, 0.0, 1.0) * np.exp(1j * theta)
        acc = np.zeros_like(w)
        for k in range(half, 0, -1):
            acc = (acc + coef[k - 1]) * w
        return c0 + acc.real

    def harmonic_grad_eval(self, r, theta):
        """Gradient of the harmonic extension in polar components.

        Returns (d/dr, (1/r) d/dtheta) evaluated at (r, theta), r < 1.
        """
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if np.any(r >= 1.0):
            raise DomainError("harmonic gradient requires r < 1")
        c0, a, b = self.coeffs()
        half = self.M // 2
        coef = a[1:] - 1j * b[1:]
        w = r * np.exp(1j * theta)
        # d/dw of sum coef_k w^k is sum k coef_k w^{k-1}; chain rule gives
        # f_r = Re(e^{i theta} F'(w)), (1/r) f_theta = -Im(e^{i theta} F'(w)).
        acc = np.zeros_like(w)
        for k in range(half, 0, -1):
            acc = acc * w + k * coef[k - 1]
        e = np.exp(1j * theta) * acc
        return e.real, -e.imag


def trace_from_function(fn, M: int) -> TraceField:
    theta = 2.0 * np.pi * np.arange(M) / M
    return TraceField(np.asarray(fn(theta), dtype=float))
