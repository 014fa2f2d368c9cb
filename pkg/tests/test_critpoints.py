import numpy as np
import pytest

from filmvortex import geometry
from filmvortex.critpoints import (
    minimize_w_pair_general,
    newton_classify,
    optimal_pair,
    pair_energy_derivatives,
    theta_delta,
)
from filmvortex.errors import DegenerateConfigurationError, DomainError, SingularConfigurationError
from filmvortex.renorm import DmiVector, VortexConfig, w_disk


def quadratic_root_oracle(m):
    """Bisection for the positive root of 2 m X^2 + X - 2 m = 0."""
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 2 * m * mid * mid + mid - 2 * m > 0:
            hi = mid
        else:
            lo = mid
    return np.arcsin(0.5 * (lo + hi))


# ------------------------------------------------------- pair energy and derivs

def test_antipodal_critical_point():
    st = pair_energy_derivatives(0.0, np.pi, DmiVector())
    assert np.max(np.abs(st.grad)) < 1e-12
    assert abs(st.value - (-np.log(2))) < 1e-14
    cfg = VortexConfig(angles=[0.0, np.pi], degrees=[1, 1])
    assert abs(2 * np.pi * st.value - w_disk(cfg, DmiVector())) < 1e-12


def test_pair_energy_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(20):
        p1, p2 = rng.uniform(0, 2 * np.pi, 2)
        if abs(np.cos(p1 - p2) - 1) < 1e-6:
            continue
        d = DmiVector(*rng.uniform(-2, 2, 2))
        assert abs(
            pair_energy_derivatives(p1, p2, d).value
            - pair_energy_derivatives(p2, p1, d).value
        ) < 1e-13


def test_pair_energy_coincident_error():
    with pytest.raises(SingularConfigurationError):
        pair_energy_derivatives(1.0, 1.0, DmiVector(1, 0))


def test_critical_point_at_theta_delta():
    d = DmiVector(0.0, 1.0)
    td = theta_delta(1.0)
    # closed form gives 0.8959075; the bisection oracle below is authoritative
    assert abs(td - 0.895897) < 2e-5
    assert abs(td - quadratic_root_oracle(1.0)) < 1e-10
    st = pair_energy_derivatives(np.pi / 2 + td, 3 * np.pi / 2 - td, d)
    assert np.max(np.abs(st.grad)) <= 1e-8


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    h = 1e-6
    worst = 0.0
    for _ in range(200):
        p1 = rng.uniform(0, 2 * np.pi)
        p2 = p1 + rng.uniform(0.3, 2 * np.pi - 0.3)
        d = DmiVector(*rng.uniform(-2, 2, 2))
        st = pair_energy_derivatives(p1, p2, d)
        f = lambda a, b: pair_energy_derivatives(a, b, d).value
        g_fd = np.array(
            [
                (f(p1 + h, p2) - f(p1 - h, p2)) / (2 * h),
                (f(p1, p2 + h) - f(p1, p2 - h)) / (2 * h),
            ]
        )
        scale = max(1.0, np.max(np.abs(g_fd)))
        worst = max(worst, np.max(np.abs(st.grad - g_fd)) / scale)
    assert worst <= 1e-6


def test_hessian_matches_second_differences():
    rng = np.random.default_rng(8)
    h = 1e-4
    for _ in range(50):
        p1 = rng.uniform(0, 2 * np.pi)
        p2 = p1 + rng.uniform(0.5, 2 * np.pi - 0.5)
        d = DmiVector(*rng.uniform(-2, 2, 2))
        st = pair_energy_derivatives(p1, p2, d)
        f = lambda a, b: pair_energy_derivatives(a, b, d).value
        h11 = (f(p1 + h, p2) - 2 * f(p1, p2) + f(p1 - h, p2)) / h**2
        h22 = (f(p1, p2 + h) - 2 * f(p1, p2) + f(p1, p2 - h)) / h**2
        h12 = (
            f(p1 + h, p2 + h) - f(p1 + h, p2 - h) - f(p1 - h, p2 + h) + f(p1 - h, p2 - h)
        ) / (4 * h**2)
        fd = np.array([[h11, h12], [h12, h22]])
        scale = max(1.0, np.max(np.abs(fd)))
        assert np.max(np.abs(st.hessian - fd)) / scale <= 1e-4


# ----------------------------------------------------------------- theta_delta

def test_theta_delta_values():
    assert abs(theta_delta(0.25) - np.arcsin(np.sqrt(2) - 1)) < 1e-12
    assert abs(theta_delta(0.25) - 0.427079) < 1e-6
    assert abs(theta_delta(10.0) - 1.348123) < 1e-5


def test_theta_delta_against_bisection_oracle():
    for m in (0.05, 0.25, 1.0, 10.0, 100.0):
        assert abs(theta_delta(m) - quadratic_root_oracle(m)) < 1e-10


def test_theta_delta_quadratic_residual():
    for m in np.geomspace(1e-3, 1e3, 40):
        x = np.sin(theta_delta(m))
        assert abs(2 * m * x * x + x - 2 * m) <= 1e-12
        assert 0 < theta_delta(m) < np.pi / 2


def test_theta_delta_monotone_and_limits():
    ms = np.geomspace(1e-4, 1e6, 1000)
    td = np.array([theta_delta(m) for m in ms])
    assert np.all(np.diff(td) > 0)
    assert td[0] < 1e-3
    # theta_delta -> pi/2 like 1/sqrt(2 m)
    assert abs(td[-1] - np.pi / 2) < 1e-3


def test_theta_delta_domain_error():
    with pytest.raises(DomainError):
        theta_delta(0.0)
    with pytest.raises(DomainError):
        theta_delta(-1.0)


# ---------------------------------------------------------------- optimal pair

def test_optimal_pair_figure_layout():
    # delta = 0.1 e^{i pi/8}: nearly antipodal, symmetric about delta^perp
    theta = np.pi / 8
    d = DmiVector(0.1 * np.cos(theta), 0.1 * np.sin(theta))
    a1, a2 = optimal_pair(d)
    td = theta_delta(0.1)
    assert abs(a1 - (theta + td)) < 1e-12
    assert abs(a2 - (theta + np.pi - td)) < 1e-12
    # symmetry axis: midpoint = theta + pi/2 (mod pi)
    assert abs(((a1 + a2) / 2 - (theta + np.pi / 2)) % np.pi) < 1e-12


def test_optimal_pair_symmetry_axis_vertical_delta():
    a1, a2 = optimal_pair(DmiVector(0.0, 1.0))
    mid = (a1 + a2) / 2 % np.pi
    target = (np.pi / 2 + np.pi / 2) % np.pi  # theta + pi/2 with theta = pi/2
    assert abs(mid - target) < 1e-12


def test_optimal_pair_chord_length():
    a1, a2 = optimal_pair(DmiVector(0.25, 0.0))
    chord = abs(np.exp(1j * a1) - np.exp(1j * a2))
    assert abs(chord - 1.820359) < 1e-5
    assert abs(chord - 2 * np.cos(theta_delta(0.25))) < 1e-12


def test_optimal_pair_is_minimum():
    rng = np.random.default_rng(5)
    for _ in range(20):
        d = DmiVector(*rng.uniform(-3, 3, 2))
        if d.magnitude < 1e-3:
            continue
        a1, a2 = optimal_pair(d)
        st = pair_energy_derivatives(a1, a2, d)
        assert np.max(np.abs(st.grad)) <= 1e-10
        assert st.classification == "minimum"


def test_optimal_pair_degenerate_at_zero():
    with pytest.raises(DegenerateConfigurationError, match="antipodal"):
        optimal_pair(DmiVector(0.0, 0.0))


# ------------------------------------------------------------- newton_classify

def test_newton_case1_saddle():
    # delta^perp-aligned antipodal pair is a stationary saddle with
    # Hessian determinant -|delta|^2
    d = DmiVector(0.0, 1.0)
    st = newton_classify(d, (np.pi, 0.0))
    assert abs(np.linalg.det(st.hessian) - (-1.0)) < 1e-8
    assert st.classification == "saddle"
    for mag in (0.1, 10.0):
        dm = DmiVector(0.0, mag)
        stm = newton_classify(dm, (np.pi, 0.0))
        assert abs(np.linalg.det(stm.hessian) - (-(mag**2))) < 1e-8 * max(1, mag**2)
        assert stm.classification == "saddle"


def test_newton_converges_to_optimal():
    d = DmiVector(0.25, 0.0)
    a1, a2 = optimal_pair(d)
    st = newton_classify(d, (a1 + 0.05, a2 + 0.05))
    assert abs(st.phi1 % (2 * np.pi) - a1) < 1e-9
    assert abs(st.phi2 % (2 * np.pi) - a2) < 1e-9
    assert st.classification == "minimum"


def test_newton_delta_zero_degenerate():
    st = newton_classify(DmiVector(), (0.1, np.pi - 0.1), tol=1e-10)
    assert abs(abs(st.phi1 - st.phi2) - np.pi) < 1e-8
    assert st.classification == "degenerate"


def test_minimum_beats_case1_saddle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        d = DmiVector(*rng.uniform(-2, 2, 2))
        if d.magnitude < 1e-2:
            continue
        a1, a2 = optimal_pair(d)
        f_min = pair_energy_derivatives(a1, a2, d).value
        theta = d.phase
        f_saddle = pair_energy_derivatives(theta + np.pi / 2, theta - np.pi / 2, d).value
        assert f_min < f_saddle


# -------------------------------------------------------- general minimization

def test_general_pair_identity_chart():
    mesh = geometry.disk_boundary_mesh(1024)
    d = DmiVector(0.25, 0.0)
    (p1, p2), _ = minimize_w_pair_general(geometry.identity_chart(), d, mesh, 48)
    a1, a2 = optimal_pair(d)
    assert max(abs(p1 - a1), abs(p2 - a2)) < 1e-4


def test_general_pair_delta_zero_antipodal():
    mesh = geometry.disk_boundary_mesh(1024)
    (p1, p2), _ = minimize_w_pair_general(geometry.identity_chart(), DmiVector(), mesh, 32)
    chord = abs(np.exp(1j * p1) - np.exp(1j * p2))
    assert abs(chord - 2.0) < 1e-4


def test_general_pair_moebius_value_invariant():
    mesh = geometry.disk_boundary_mesh(1024)
    _, w_val = minimize_w_pair_general(geometry.moebius_chart(0.4), DmiVector(), mesh, 32)
    assert abs(w_val - (-2 * np.pi * np.log(2))) < 1e-3
