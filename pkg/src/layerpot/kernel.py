"""Fundamental solution of Laplace's equation in N >= 2 dimensions.

Provides the radially symmetric free-space kernel (logarithmic in 2-D, a
power of the distance in higher dimensions), its gradient, its normal
derivative, and the area of the unit sphere computed from exact
integer/half-integer Gamma values.

All evaluation functions accept a single point (shape ``(N,)``) or a batch
(shape ``(m, N)``) and are pure; they never return infinities, raising
SingularityError instead when the argument is (numerically) the origin.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, ParameterError, SingularityError

# Radii below this are treated as the singular point itself so evaluation
# fails loudly instead of overflowing.
MIN_RADIUS = 1e-300


def _gamma_half(n: int) -> float:
    """Gamma(n/2) for a positive integer n, by exact recursion.

    Integer arguments use the factorial; half-integer arguments use
    Gamma(k + 1/2) = sqrt(pi) (2k)! / (4^k k!).  Both are exact up to the
    final floating-point rounding, which keeps the sphere-area constant
    well below 1e-13 relative error.
    """
    if n <= 0:
        raise ParameterError(f"Gamma(n/2) needs n >= 1, got n={n}")
    if n % 2 == 0:
        return float(math.factorial(n // 2 - 1))
    k = (n - 1) // 2
    return math.sqrt(math.pi) * math.factorial(2 * k) / (4.0**k * math.factorial(k))


def sphere_area(dim: int) -> float:
    """Area of the unit sphere in R^dim: 2 pi^(dim/2) / Gamma(dim/2)."""
    if int(dim) != dim or dim < 2:
        raise DimensionError(f"unit-sphere area defined here for integer dim >= 2, got {dim!r}")
    dim = int(dim)
    return 2.0 * math.pi ** (dim / 2.0) / _gamma_half(dim)


def _as_batch(x) -> tuple[np.ndarray, bool]:
    """Coerce x to a (m, N) float array; report whether input was a single point."""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise DimensionError(f"points must have dimension N >= 2, got shape {arr.shape}")
    return arr, single


def fundamental_solution(x) -> float | np.ndarray:
    """Free-space Laplace kernel evaluated at x (or a batch of points).

    Returns log|x| / (2 pi) in 2-D and |x|^(2-N) / ((2-N) omega_N) for N >= 3.
    """
    pts, single = _as_batch(x)
    n = pts.shape[1]
    r = np.linalg.norm(pts, axis=1)
    if np.any(r < MIN_RADIUS):
        raise SingularityError("fundamental solution evaluated at the origin")
    if n == 2:
        val = np.log(r) / (2.0 * math.pi)
    else:
        val = r ** (2 - n) / ((2 - n) * sphere_area(n))
    return float(val[0]) if single else val


def fundamental_gradient(x) -> np.ndarray:
    """Gradient of the free-space kernel: x / (omega_N |x|^N), any N >= 2."""
    pts, single = _as_batch(x)
    n = pts.shape[1]
    r = np.linalg.norm(pts, axis=1)
    if np.any(r < MIN_RADIUS):
        raise SingularityError("fundamental gradient evaluated at the origin")
    grad = pts / (sphere_area(n) * r[:, None] ** n)
    return grad[0] if single else grad


def normal_derivative(x, nu) -> float | np.ndarray:
    """Directional derivative <grad, nu> of the kernel, nu a unit vector.

    This is the double-layer kernel when x is (boundary point - target) and
    nu the outward normal at the boundary point.
    """
    pts, single = _as_batch(x)
    nus, _ = _as_batch(nu)
    if nus.shape[1] != pts.shape[1]:
        raise DimensionError("x and nu must share a dimension")
    lengths = np.linalg.norm(nus, axis=1)
    if np.any(np.abs(lengths - 1.0) > 1e-8):
        raise ParameterError("nu must be a unit vector")
    grad = np.atleast_2d(fundamental_gradient(pts))
    val = np.einsum("ij,ij->i", grad, np.broadcast_to(nus, grad.shape))
    return float(val[0]) if single else val


class FundamentalSolution:
    """Dimension-bound view of the free-space kernel.

    Thin convenience wrapper that validates the point dimension once and
    exposes value/gradient/normal-derivative evaluation.  Instances are
    immutable and thread-safe.
    """

    def __init__(self, dim: int):
        if int(dim) != dim or dim < 2:
            raise DimensionError(f"dimension must be an integer >= 2, got {dim!r}")
        self.dim = int(dim)
        self.unit_sphere_area = sphere_area(self.dim)

    def _check(self, x) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        if arr.shape[-1] != self.dim:
            raise DimensionError(f"expected points of dimension {self.dim}, got shape {arr.shape}")
        return arr

    def value(self, x):
        return fundamental_solution(self._check(x))

    def gradient(self, x):
        return fundamental_gradient(self._check(x))

    def normal_derivative(self, x, nu):
        return normal_derivative(self._check(x), self._check(nu))

    def scaling(self, scale: float) -> float:
        """Multiplicative/additive scaling factor: E(s x) relative to E(x).

        For N >= 3 the kernel is homogeneous, E(s x) = s^(2-N) E(x); in 2-D
        it picks up the additive constant log(s) / (2 pi), returned here.
        """
        if scale <= 0:
            raise ParameterError("scale must be positive")
        if self.dim == 2:
            return math.log(scale) / (2.0 * math.pi)
        return scale ** (2 - self.dim)
