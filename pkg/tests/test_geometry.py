import numpy as np
import pytest

from filmvortex import geometry
from filmvortex.errors import ConfigurationError, DomainError


def test_mesh_rejects_small_or_odd():
    with pytest.raises(ConfigurationError):
        geometry.disk_boundary_mesh(4)
    with pytest.raises(ConfigurationError):
        geometry.disk_boundary_mesh(257)


def test_mesh_conventions():
    mesh = geometry.disk_boundary_mesh(256)
    assert mesh.theta[0] == 0.0
    np.testing.assert_allclose(mesh.nu[0], [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(mesh.tau[0], [0.0, 1.0], atol=1e-15)
    # strict uniform spacing
    np.testing.assert_allclose(np.diff(mesh.theta), 2 * np.pi / 256, rtol=0, atol=1e-15)


def test_mesh_frame_invariants():
    mesh = geometry.disk_boundary_mesh(512)
    assert np.max(np.abs(np.hypot(mesh.nu[:, 0], mesh.nu[:, 1]) - 1)) < 1e-14
    assert np.max(np.abs(np.hypot(mesh.tau[:, 0], mesh.tau[:, 1]) - 1)) < 1e-14
    # tau is nu rotated by +pi/2
    rot = np.stack([-mesh.nu[:, 1], mesh.nu[:, 0]], axis=1)
    assert np.max(np.abs(rot - mesh.tau)) < 1e-14


def test_gauss_bonnet():
    mesh = geometry.disk_boundary_mesh(256)
    assert abs(mesh.quadrature(mesh.kappa) - 2 * np.pi) < 1e-12


def test_trapezoid_spectral_exactness():
    mesh = geometry.disk_boundary_mesh(64)
    rng = np.random.default_rng(0)
    for _ in range(5):
        k = rng.integers(1, 32)
        a, b, c = rng.normal(size=3)
        vals = c + a * np.cos(k * mesh.theta) + b * np.sin(k * mesh.theta)
        assert abs(mesh.quadrature(vals) - 2 * np.pi * c) < 1e-12


@pytest.mark.parametrize("jump", [np.pi, 1.234, 5.9, geometry.DEFAULT_JUMP_ANGLE])
def test_tangent_lifting_reproduces_tangent(jump):
    mesh = geometry.disk_boundary_mesh(256)
    g = geometry.tangent_lifting(mesh, jump)
    lifted = np.exp(1j * g.values)
    target = 1j * (mesh.nu[:, 0] + 1j * mesh.nu[:, 1])
    assert np.max(np.abs(lifted - target)) < 1e-12


def test_tangent_lifting_values_and_jump():
    mesh = geometry.disk_boundary_mesh(256)
    g = geometry.tangent_lifting(mesh, jump_angle=np.pi)
    # node at theta=0 (before the jump): g = pi/2
    assert abs(g.values[0] - np.pi / 2) < 1e-14
    # node at theta=pi/2: g = pi
    k = 64
    assert abs(g.values[k] - np.pi) < 1e-14
    # exactly one downward 2*pi jump at jump_angle
    steps = np.diff(g.values)
    drops = np.where(steps < -np.pi)[0]
    assert drops.size == 1
    assert mesh.theta[drops[0]] <= np.pi <= mesh.theta[drops[0] + 1]


def test_tangent_lifting_total_variation():
    # summation oracle: continuous part 2*pi plus the 2*pi jump; on the
    # mesh the jump cell absorbs one spacing from each part, so the nodal
    # total variation is exactly 4*pi - 2*spacing
    for M in (1024, 4096, 16384):
        mesh = geometry.disk_boundary_mesh(M)
        g = geometry.tangent_lifting(mesh)
        cyc = np.append(g.values, g.values[0])
        tv = np.sum(np.abs(np.diff(cyc)))
        assert abs(tv - (4 * np.pi - 2 * mesh.spacing)) < 1e-10
        assert abs(tv - 4 * np.pi) < 2.1 * mesh.spacing


def test_chart_eval_identity_and_degenerate_moebius():
    z = 0.3 + 0.4j
    val, dval = geometry.chart_eval(geometry.identity_chart(), z)
    assert val == z and dval == 1.0
    val, dval = geometry.chart_eval(geometry.moebius_chart(0.0), z)
    assert abs(val - z) < 1e-15 and abs(dval - 1.0) < 1e-15


def test_chart_eval_boundary_point():
    val, _ = geometry.chart_eval(geometry.moebius_chart(0.5), 1.0 + 0.0j)
    assert abs(val - 1.0) < 1e-14
    assert abs(abs(val) - 1.0) < 1e-14


def test_chart_boundary_to_boundary():
    rng = np.random.default_rng(1)
    mesh = geometry.disk_boundary_mesh(128)
    for _ in range(5):
        a = (rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        chart = geometry.moebius_chart(a)
        vals, dvals = geometry.chart_eval(chart, np.exp(1j * mesh.theta))
        assert np.max(np.abs(np.abs(vals) - 1.0)) < 1e-12
        assert np.min(np.abs(dvals)) > 0


def test_chart_derivative_finite_difference():
    chart = geometry.moebius_chart(0.3 - 0.2j)
    rng = np.random.default_rng(2)
    h = 1e-7
    for _ in range(10):
        z = rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        _, dval = geometry.chart_eval(chart, z)
        fp, _ = geometry.chart_eval(chart, z + h)
        fm, _ = geometry.chart_eval(chart, z - h)
        assert abs((fp - fm) / (2 * h) - dval) < 1e-6


def test_chart_domain_error():
    with pytest.raises(DomainError):
        geometry.chart_eval(geometry.identity_chart(), 1.1 + 0.0j)


def test_shift_jump_away():
    spacing = 2 * np.pi / 256
    shifted = geometry.shift_jump_away(1.0, [1.0 + spacing], spacing, cells=3)
    assert min(abs(shifted - (1.0 + spacing)), 2 * np.pi - abs(shifted - (1.0 + spacing))) > 3 * spacing
    # already clear: unchanged
    assert geometry.shift_jump_away(1.0, [3.0], spacing) == 1.0
