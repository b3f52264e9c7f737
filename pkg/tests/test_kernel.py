"""Tests for the free-space kernel and the sphere-area constant."""

import math

import numpy as np
import pytest

import layerpot as lp
from layerpot.diagnostics import fd_gradient, fd_laplacian
from layerpot.errors import DimensionError, ParameterError, SingularityError


def test_sphere_area_low_dimensions():
    assert lp.sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert lp.sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert lp.sphere_area(4) == pytest.approx(2 * math.pi**2, rel=1e-15)


@pytest.mark.parametrize("n", range(2, 13))
def test_sphere_area_matches_gamma(n):
    # cross-check the exact integer/half-integer ladder against math.gamma
    expected = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
    assert lp.sphere_area(n) == pytest.approx(expected, rel=1e-13)


def test_sphere_area_rejects_low_dim():
    with pytest.raises(DimensionError):
        lp.sphere_area(1)


def test_value_branches():
    assert lp.fundamental_solution([1.0, 0.0]) == pytest.approx(0.0, abs=1e-15)
    assert lp.fundamental_solution([math.e, 0.0]) == pytest.approx(1 / (2 * math.pi), rel=1e-14)
    assert lp.fundamental_solution([0.0, 0.0, 1.0]) == pytest.approx(-1 / (4 * math.pi), rel=1e-14)


def test_value_singularity():
    with pytest.raises(SingularityError):
        lp.fundamental_solution([0.0, 0.0])
    with pytest.raises(SingularityError):
        lp.fundamental_solution([1e-301, 0.0])


def test_gradient_examples():
    g = lp.fundamental_gradient([1.0, 0.0])
    np.testing.assert_allclose(g, [1 / (2 * math.pi), 0.0], atol=1e-15)
    g3 = lp.fundamental_gradient([0.0, 0.0, 2.0])
    np.testing.assert_allclose(g3, [0.0, 0.0, 1 / (16 * math.pi)], atol=1e-16)


def test_gradient_odd_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = rng.normal(size=3)
        np.testing.assert_allclose(
            lp.fundamental_gradient(-x), -lp.fundamental_gradient(x), rtol=1e-14
        )


def test_normal_derivative_examples():
    # constant kernel on a circle about the target
    R = 1.7
    x = np.array([R * math.cos(0.4), R * math.sin(0.4)])
    nu = x / R
    val = lp.normal_derivative(x, nu)
    assert val == pytest.approx(1 / (2 * math.pi * R), rel=1e-14)
    assert lp.normal_derivative([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0, abs=1e-16)
    assert lp.normal_derivative([2.0, 0.0], [1.0, 0.0]) == pytest.approx(1 / (4 * math.pi), rel=1e-14)


def test_normal_derivative_requires_unit_normal():
    with pytest.raises(ParameterError):
        lp.normal_derivative([1.0, 0.0], [0.0, 2.0])


@pytest.mark.parametrize("dim", [2, 3])
def test_harmonic_by_finite_differences(dim):
    rng = np.random.default_rng(17)
    E = lp.FundamentalSolution(dim)
    for _ in range(20):
        x = rng.normal(size=dim)
        x *= rng.uniform(0.5, 2.0) / np.linalg.norm(x)
        assert abs(fd_laplacian(E.value, x, 1e-3)) < 1e-4


def test_fd_laplacian_second_order():
    E = lp.FundamentalSolution(2)
    x = np.array([0.8, 0.4])
    coarse = abs(fd_laplacian(E.value, x, 2e-3))
    fine = abs(fd_laplacian(E.value, x, 1e-3))
    assert fine < coarse / 2.0


@pytest.mark.parametrize("dim", [2, 3])
def test_gradient_consistent_with_value(dim):
    rng = np.random.default_rng(23)
    E = lp.FundamentalSolution(dim)
    for _ in range(10):
        x = rng.normal(size=dim)
        x *= rng.uniform(0.8, 1.2) / np.linalg.norm(x)
        np.testing.assert_allclose(E.gradient(x), fd_gradient(E.value, x), atol=1e-6)


def test_scaling_law():
    E2 = lp.FundamentalSolution(2)
    x = np.array([0.3, -0.7])
    for lam in (0.5, 2.0, 7.0):
        assert E2.value(lam * x) == pytest.approx(E2.value(x) + math.log(lam) / (2 * math.pi), rel=1e-13)
    E3 = lp.FundamentalSolution(3)
    x = np.array([0.3, -0.7, 0.2])
    for lam in (0.5, 2.0, 7.0):
        assert E3.value(lam * x) == pytest.approx(lam ** (2 - 3) * E3.value(x), rel=1e-13)


def test_batch_evaluation_matches_single():
    pts = np.array([[1.0, 0.2], [0.5, -0.5], [2.0, 1.0]])
    vals = lp.fundamental_solution(pts)
    for p, v in zip(pts, vals):
        assert lp.fundamental_solution(p) == pytest.approx(v, rel=1e-15)


def test_normal_derivative_constant_on_spheres_3d():
    # on a sphere about the target the kernel is 1 / (omega_N R^(N-1))
    R = 1.3
    x = np.array([0.0, R * math.sin(1.1), R * math.cos(1.1)])
    val = lp.normal_derivative(x, x / R)
    assert val == pytest.approx(1 / (4 * math.pi * R**2), rel=1e-14)
