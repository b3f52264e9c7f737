"""Tests for double-layer evaluation, jump relations, and volume integrals."""

import math

import numpy as np
import pytest

import layerpot as lp
from layerpot.diagnostics import fd_laplacian, loglog_slope, sphere_ratio
from layerpot.errors import CapabilityError, PlacementError

DISK = lp.Ball([0.0, 0.0], 1.0)
BALL3 = lp.Ball([0.0, 0.0, 0.0], 1.0)
STAR = lp.StarShaped2D(
    lambda th: 1.0 + 0.25 * np.cos(3 * th),
    radius_d1=lambda th: -0.75 * np.sin(3 * th),
    radius_d2=lambda th: -2.25 * np.cos(3 * th),
)


def test_unit_moment_trichotomy_examples():
    assert lp.double_layer(1.0, DISK, [0.0, 0.0], 64).value == pytest.approx(1.0, abs=1e-10)
    assert lp.double_layer(1.0, DISK, [2.0, 0.0], 64).value == pytest.approx(0.0, abs=1e-10)
    assert lp.double_layer(1.0, DISK, [1.0, 0.0], 64).value == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize("domain", [DISK, BALL3, STAR], ids=["disk", "ball3", "star"])
def test_trichotomy_at_close_range(domain):
    # targets at distance 0.05 * diameter on both sides, and on the boundary
    rng = np.random.default_rng(3)
    offset = 0.05 * domain.diameter
    for _ in range(4):
        d = rng.normal(size=domain.dim)
        d /= np.linalg.norm(d)
        if isinstance(domain, lp.Ball):
            zb = domain.center + domain.radius * d
        else:
            zb = domain.boundary_point(math.atan2(d[1], d[0]))
        nu = domain.outward_normal(zb)
        assert lp.double_layer(1.0, domain, zb - offset * nu, 64).value == pytest.approx(1.0, abs=1e-8)
        assert lp.double_layer(1.0, domain, zb + offset * nu, 64).value == pytest.approx(0.0, abs=1e-8)
        assert lp.double_layer(1.0, domain, zb, 64).value == pytest.approx(0.5, abs=1e-8)


def test_location_class_recorded():
    ev = lp.double_layer(1.0, DISK, [0.3, 0.0], 64)
    assert ev.location_class == "interior"
    assert float(ev) == ev.value
    assert lp.double_layer(1.0, DISK, [1.0, 0.0], 64).location_class == "boundary"


def test_near_boundary_warning_metadata():
    ev = lp.double_layer(1.0, DISK, [0.98, 0.0], 64)
    assert ev.warning is not None and ev.quadrature_order > 64
    assert ev.value == pytest.approx(1.0, abs=1e-10)


def test_jump_relations_unit_moment():
    res = lp.jump_relation_check(1.0, DISK, [0.0, 1.0], [1e-2, 5e-3], 64)
    assert res.interior_limit_estimate == pytest.approx(1.0, abs=1e-7)
    assert res.exterior_limit_estimate == pytest.approx(0.0, abs=1e-7)
    assert res.boundary_value == pytest.approx(0.5, abs=1e-12)


def test_jump_relations_coordinate_moment():
    h = lp.catalog("coordinate", 1)
    for theta in np.linspace(0, 2 * math.pi, 8, endpoint=False):
        y0 = np.array([math.cos(theta), math.sin(theta)])
        res = lp.jump_relation_check(h, DISK, y0, [1e-2, 5e-3], 64)
        jump = res.interior_limit_estimate - res.exterior_limit_estimate
        assert jump == pytest.approx(h.evaluate(y0), abs=1e-4)
        # each one-sided limit against the direct boundary value
        assert res.interior_limit_estimate == pytest.approx(
            0.5 * h.evaluate(y0) + res.boundary_value, abs=1e-4
        )


def test_jump_relations_zero_moment():
    res = lp.jump_relation_check(0.0, DISK, [1.0, 0.0], [1e-2, 5e-3], 64)
    assert res.interior_limit_estimate == pytest.approx(0.0, abs=1e-12)
    assert res.exterior_limit_estimate == pytest.approx(0.0, abs=1e-12)
    assert res.boundary_value == 0.0


def test_double_layer_harmonic_off_boundary():
    h = lp.catalog("coordinate", 1)
    for y in ([0.3, 0.2], [1.7, 0.3]):
        lap = fd_laplacian(lambda p: lp.double_layer(h, DISK, p, 256).value, np.array(y), 1e-3)
        assert abs(lap) < 1e-4


def test_holder_sphere_ratio_scales_like_alpha():
    alpha = 0.5
    f = lp.catalog("power_distance", [0.0, 0.0], alpha)
    eps = np.array([1e-1, 5e-2, 2.5e-2, 1.25e-2])
    vals = [sphere_ratio(f, [0.0, 0.0], alpha, e) for e in eps]
    assert abs(loglog_slope(eps, vals) - alpha) < 0.1


def test_gradient_volume_integral_examples():
    assert lp.gradient_volume_integral(lp.catalog("constant", 4.0), DISK, [0.3, 0.0], 64) == 0.0
    # distance moment centered at the target: radial oracle gives exactly R
    val = lp.gradient_volume_integral(lp.catalog("distance", [0.0, 0.0]), DISK, [0.0, 0.0], 64)
    assert val == pytest.approx(1.0, abs=1e-10)
    val3 = lp.gradient_volume_integral(lp.catalog("distance", [0.0, 0.0, 0.0]), BALL3, [0.0, 0.0, 0.0], 32)
    assert val3 == pytest.approx(1.0, abs=1e-10)
    # odd symmetry over the disk
    val = lp.gradient_volume_integral(lp.catalog("coordinate", 1), DISK, [0.0, 0.0], 64)
    assert val == pytest.approx(0.0, abs=1e-12)


def test_gradient_volume_integral_brute_force_cross_check():
    # midpoint polar oracle, independent of the library quadrature
    f = lp.catalog("coordinate", 1)
    y = np.array([0.3, -0.2])
    m_th, m_r = 1024, 512
    th = 2 * math.pi * (np.arange(m_th) + 0.5) / m_th
    dirs = np.column_stack([np.cos(th), np.sin(th)])
    proj = dirs @ y
    t = -proj + np.sqrt(proj**2 + 1 - y @ y)
    oracle = (2 * math.pi / m_th) * np.sum(dirs[:, 0] * t) / (2 * math.pi)
    val = lp.gradient_volume_integral(f, DISK, y, 64)
    assert val == pytest.approx(oracle, abs=1e-6)


def test_gradient_volume_integral_exterior_equals_double_layer():
    f = lp.catalog("harmonic_poly", 2)
    y = [2.0, 0.5]
    vol = lp.gradient_volume_integral(f, DISK, y, 64)
    dl = lp.double_layer(f, DISK, y, 64).value
    assert vol == pytest.approx(dl, abs=1e-12)


def test_gradient_volume_integral_boundary_target_rejected():
    with pytest.raises(PlacementError):
        lp.gradient_volume_integral(lp.catalog("coordinate", 1), DISK, [1.0, 0.0], 64)


def test_singular_point_coinciding_with_target_is_not_an_error():
    f = lp.catalog("power_distance", [0.0, 0.0], 0.5)
    val = lp.gradient_volume_integral(f, DISK, [0.0, 0.0], 64)
    # radial oracle: integrand collapses to beta rho^{beta-1} / omega per unit angle
    assert val == pytest.approx(1.0, abs=1e-10)


def test_zeta_modes_agree():
    for f, z in [
        (lp.catalog("constant", 3.0), [1.0, 0.0]),
        (lp.catalog("coordinate", 1), [1.0, 0.0]),
        (lp.catalog("distance", [0.0, 0.0]), [0.0, 1.0]),
    ]:
        alg = lp.boundary_limit_zeta(f, DISK, z, 64, mode="algebraic")
        lim = lp.boundary_limit_zeta(f, DISK, z, 64, mode="limit")
        assert alg == pytest.approx(lim, abs=1e-4)


def test_zeta_constant_vanishes():
    assert lp.boundary_limit_zeta(lp.catalog("constant", 7.0), DISK, [0.0, 1.0], 64) == pytest.approx(
        0.0, abs=1e-12
    )


def test_newtonian_integrals_examples():
    # harmonic field: no volume source
    parts = lp.newtonian_integrals(lp.catalog("harmonic_poly", 2), DISK, [0.3, 0.1], 64)
    assert parts.volume_term == pytest.approx(0.0, abs=1e-8)
    # coordinate moment at the center: kernel vanishes on the unit circle
    parts = lp.newtonian_integrals(lp.catalog("coordinate", 1), DISK, [0.0, 0.0], 64)
    assert parts.boundary_term == pytest.approx(0.0, abs=1e-8)
    # |x|^2: volume term is 2N int E = -1 on the unit disk (radial oracle)
    parts = lp.newtonian_integrals(lp.catalog("quadratic_radial", [0.0, 0.0]), DISK, [0.0, 0.0], 64)
    assert parts.volume_term == pytest.approx(-1.0, abs=1e-8)


def test_newtonian_requires_laplacian():
    bare = lp.ScalarField(
        name="bare",
        evaluate_fn=lambda x: x[:, 0],
        gradient_fn=lambda x: np.column_stack([np.ones(len(x)), np.zeros(len(x))]),
    )
    with pytest.raises(CapabilityError):
        lp.newtonian_integrals(bare, DISK, [0.0, 0.0], 32)


def test_double_layer_batch_matches_scalar():
    h = lp.catalog("harmonic_poly", 2)
    targets = np.array([[0.3, 0.1], [0.0, 0.0], [2.0, 0.5], [1.0, 0.0]])
    batch = lp.double_layer_batch(h, DISK, targets, 64)
    for t, v in zip(targets, batch):
        assert v == pytest.approx(lp.double_layer(h, DISK, t, 64).value, abs=1e-13)


def test_monotone_guard_flags_growing_differences():
    from layerpot.potentials import _require_monotone
    from layerpot.errors import ResolutionError

    _require_monotone([1.0, 1.001, 1.0011], 1.0)  # shrinking steps: fine
    _require_monotone([1.0, 1.0 + 1e-9, 1.0 + 3e-9], 1.0)  # noise level: fine
    with pytest.raises(ResolutionError):
        _require_monotone([1.0, 1.01, 1.1], 1.0)


def test_star_near_boundary_volume_integral_matches_interior_identity():
    # the volume integral at interior points equals (double layer - value);
    # exercising it close to a concave boundary section covers the
    # multi-segment ray handling
    f = lp.catalog("harmonic_poly", 2)
    z = STAR.boundary_point(0.9)
    nu = STAR.outward_normal(z)
    for d in (2e-2, 1e-2):
        y = z - d * nu
        ref = lp.double_layer(f, STAR, y, 256).value - f.evaluate(y)
        assert lp.gradient_volume_integral(f, STAR, y, 64) == pytest.approx(ref, abs=1e-3)


def test_star_zeta_modes_agree():
    f = lp.catalog("harmonic_poly", 2)
    z = STAR.boundary_point(0.9)
    alg = lp.boundary_limit_zeta(f, STAR, z, 64, mode="algebraic")
    lim = lp.boundary_limit_zeta(f, STAR, z, 64, mode="limit")
    assert alg == pytest.approx(lim, abs=1e-3)


def test_star_jump_relations():
    # curvature raises the one-sided expansion coefficients, so the star's
    # two-point extrapolation lands near 1e-4; the circle meets 1e-4 itself
    h = lp.catalog("harmonic_poly", 2)
    for theta in (0.005, 1.3, 2.7):
        z = STAR.boundary_point(theta)
        res = lp.jump_relation_check(h, STAR, z, [1e-2, 5e-3], 64)
        jump = res.interior_limit_estimate - res.exterior_limit_estimate
        assert jump == pytest.approx(h.evaluate(z), abs=1e-3)
