"""Tests for the interior reproducing kernel and harmonic extensions."""

import math

import numpy as np
import pytest

import layerpot as lp
from layerpot.diagnostics import fd_laplacian
from layerpot.errors import PlacementError

DISK = lp.Ball([0.0, 0.0], 1.0)
BALL3 = lp.Ball([0.0, 0.0, 0.0], 1.0)


def test_constant_data_reproduced_everywhere():
    rng = np.random.default_rng(2)
    for _ in range(5):
        y = rng.uniform(-0.5, 0.5, size=2)
        assert lp.poisson_evaluate(DISK, 9.25, y, 64) == pytest.approx(9.25, rel=1e-12)


def test_harmonic_trace_examples():
    val = lp.poisson_evaluate(DISK, lp.catalog("coordinate", 1), [0.3, 0.2], 128)
    assert val == pytest.approx(0.3, abs=1e-8)
    val = lp.poisson_evaluate(DISK, lp.catalog("harmonic_poly", 2), [0.5, 0.0], 128)
    assert val == pytest.approx(0.25, abs=1e-8)


@pytest.mark.parametrize(
    "field",
    [
        lp.catalog("constant", 2.0),
        lp.catalog("coordinate", 1),
        lp.catalog("coordinate", 2),
        lp.catalog("harmonic_poly", 2),
        lp.catalog("harmonic_poly", 3),
        lp.catalog("harmonic_poly", 4),
    ],
    ids=lambda f: f.name,
)
def test_harmonic_reproduction(field):
    rng = np.random.default_rng(7)
    for _ in range(4):
        y = rng.normal(size=2)
        y *= rng.uniform(0.0, 0.8) / np.linalg.norm(y)
        assert lp.poisson_evaluate(DISK, field, y, 128) == pytest.approx(
            field.evaluate(y), abs=1e-7
        )


def test_harmonic_reproduction_3d():
    field = lp.catalog("harmonic_poly", 2, dim=3)
    y = np.array([0.3, -0.2, 0.4])
    assert lp.poisson_evaluate(BALL3, field, y, 64) == pytest.approx(field.evaluate(y), abs=1e-7)


@pytest.mark.parametrize("domain", [DISK, BALL3], ids=["disk", "ball3"])
def test_kernel_normalization(domain):
    rng = np.random.default_rng(13)
    for _ in range(5):
        d = rng.normal(size=domain.dim)
        d *= rng.uniform(0.0, 0.8) / np.linalg.norm(d)
        order = 128 if domain.dim == 2 else 64
        assert lp.poisson_evaluate(domain, 1.0, d, order) == pytest.approx(1.0, abs=1e-9)


def test_interior_restriction():
    with pytest.raises(PlacementError):
        lp.poisson_evaluate(DISK, 1.0, [0.97, 0.0], 64)
    with pytest.raises(PlacementError):
        lp.poisson_evaluate(DISK, 1.0, [1.5, 0.0], 64)


def test_mean_value_examples():
    rep = lp.mean_value_check(lp.catalog("harmonic_poly", 2), lp.Ball([0.0, 0.0], 1.0), 64)
    assert rep.surface_mean == pytest.approx(0.0, abs=1e-12)
    assert rep.volume_mean == pytest.approx(0.0, abs=1e-12)
    assert rep.center_value == 0.0

    rep = lp.mean_value_check(lp.catalog("coordinate", 1), lp.Ball([0.2, 0.1], 0.5), 64)
    for v in (rep.surface_mean, rep.volume_mean, rep.center_value):
        assert v == pytest.approx(0.2, abs=1e-12)

    rep = lp.mean_value_check(lp.catalog("constant", 7.0), lp.Ball([0.3, -0.4], 0.2), 32)
    for v in (rep.surface_mean, rep.volume_mean, rep.center_value):
        assert v == pytest.approx(7.0, rel=1e-13)


def test_mean_value_rejects_interior_singularity():
    with pytest.raises(PlacementError):
        lp.mean_value_check(lp.catalog("distance", [0.1, 0.0]), lp.Ball([0.0, 0.0], 0.5), 32)


def test_dirichlet_solution_reproduces_harmonic_data():
    sol = lp.dirichlet_chi(DISK, lp.catalog("harmonic_poly", 3), 128)
    rng = np.random.default_rng(5)
    for _ in range(5):
        y = rng.normal(size=2)
        y *= rng.uniform(0.0, 0.7) / np.linalg.norm(y)
        assert sol.evaluate(y) == pytest.approx(lp.catalog("harmonic_poly", 3).evaluate(y), abs=1e-7)


def test_dirichlet_solution_constant_and_sphere_distance():
    sol = lp.dirichlet_chi(DISK, lp.catalog("constant", 4.0), 64)
    assert sol.evaluate([0.3, 0.3]) == pytest.approx(4.0, rel=1e-12)
    # |x - a| restricted to the sphere is the constant R
    sol = lp.dirichlet_chi(DISK, lp.catalog("distance", [0.0, 0.0]), 64)
    assert sol.evaluate([0.5, -0.2]) == pytest.approx(1.0, rel=1e-10)


def test_dirichlet_solution_is_harmonic_and_matches_boundary_mean():
    f = lp.catalog("harmonic_poly", 2)
    sol = lp.dirichlet_chi(DISK, f, 128)
    assert abs(fd_laplacian(sol.evaluate, np.array([0.2, -0.3]), 1e-3)) < 1e-4
    rule = DISK.boundary_rule(128)
    boundary_mean = float(rule.weights @ f.evaluate(rule.nodes)) / DISK.surface_measure
    assert sol.evaluate(DISK.center) == pytest.approx(boundary_mean, abs=1e-10)


def test_maximum_principle_diagnostic():
    f = lp.catalog("harmonic_poly", 2)
    sol = lp.dirichlet_chi(DISK, f, 128)
    rule = DISK.boundary_rule(256)
    lo, hi = np.min(f.evaluate(rule.nodes)), np.max(f.evaluate(rule.nodes))
    rng = np.random.default_rng(19)
    for _ in range(10):
        y = rng.normal(size=2)
        y *= rng.uniform(0.0, 0.9) / np.linalg.norm(y)
        assert lo - 1e-9 <= sol.evaluate(y) <= hi + 1e-9
