"""Catalog of scalar test fields with exact gradients and norm helpers.

A ScalarField bundles a function, its gradient, an optional Laplacian, the
finite set of points where the gradient is singular, and enough metadata
(a pointwise Holder exponent and the power-law growth of the gradient near
each singular point) for quadrature rules to adapt to the field.  All
evaluation callables are vectorized over point batches of shape (m, N).

Fields are immutable closures over their parameters and are safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np

from .errors import (
    CatalogError,
    DimensionError,
    ExponentError,
    IntegrabilityError,
    ParameterError,
    SingularityError,
)
from .geometry import EXTERIOR, Ball, Domain, as_point, composite_volume_rule
from .kernel import sphere_area

#: Cap on the size of the singular family carried by one field.
MAX_SINGULAR_POINTS = 16


@dataclass(frozen=True)
class LebesgueExponent:
    """An integrability exponent p in (1, infinity], with its conjugate."""

    value: float

    def __post_init__(self):
        if not (self.value > 1.0):
            raise ExponentError(f"Lebesgue exponent must satisfy p > 1, got {self.value}")

    @classmethod
    def of(cls, p) -> "LebesgueExponent":
        if isinstance(p, LebesgueExponent):
            return p
        return cls(float(p))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    @property
    def conjugate(self) -> float:
        """The Holder partner p' with 1/p + 1/p' = 1 (p' = 1 when p = inf)."""
        if self.is_infinite:
            return 1.0
        return self.value / (self.value - 1.0)

    def require_above_dimension(self, dim: int) -> None:
        if not (self.value > dim):
            raise ExponentError(f"this context needs p > N = {dim}, got p = {self.value}")


def _as_batch(x, dim=None):
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if dim is not None and arr.shape[1] != dim:
        raise DimensionError(f"expected points of dimension {dim}, got shape {arr.shape}")
    return arr, single


@dataclass(frozen=True)
class ScalarField:
    """A scalar function with exact gradient and singular-set metadata.

    ``gradient_power`` is the exponent s such that |grad f| grows like
    |x - a|^s near each singular point a (0 for the distance field, beta - 1
    for |x - a|^beta); quadrature rules match their radial weight to it.
    ``grad_norm_closed`` optionally returns the L^p norm of the gradient in
    closed form for a given (domain, exponent), or None to fall back to
    quadrature.
    """

    name: str
    evaluate_fn: Callable = dataclass_field(repr=False)
    gradient_fn: Callable = dataclass_field(repr=False)
    laplacian_fn: Callable | None = dataclass_field(default=None, repr=False)
    singular_points: tuple = ()
    holder_exponent: float | None = None
    gradient_power: float = 0.0
    dim: int | None = None
    grad_norm_closed: Callable | None = dataclass_field(default=None, repr=False)
    sup_gradient: float | None = None

    def __post_init__(self):
        if len(self.singular_points) > MAX_SINGULAR_POINTS:
            raise ParameterError(
                f"singular family capped at {MAX_SINGULAR_POINTS} points, got {len(self.singular_points)}"
            )

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        pts, single = _as_batch(x, self.dim)
        val = np.asarray(self.evaluate_fn(pts), dtype=float)
        return float(val[0]) if single else val

    def gradient(self, x):
        pts, single = _as_batch(x, self.dim)
        for a in self.singular_arrays():
            if np.any(np.linalg.norm(pts - a, axis=1) < 1e-14):
                raise SingularityError(f"gradient of {self.name} requested at singular point {a.tolist()}")
        grad = np.asarray(self.gradient_fn(pts), dtype=float)
        return grad[0] if single else grad

    @property
    def has_laplacian(self) -> bool:
        return self.laplacian_fn is not None

    def laplacian(self, x):
        if self.laplacian_fn is None:
            raise ParameterError(f"field {self.name} does not provide a Laplacian")
        pts, single = _as_batch(x, self.dim)
        val = np.asarray(self.laplacian_fn(pts), dtype=float)
        return float(val[0]) if single else val

    # -- singular-set helpers -------------------------------------------------

    def singular_arrays(self) -> list[np.ndarray]:
        return [np.asarray(a, dtype=float) for a in self.singular_points]

    def is_singular_at(self, y, tol: float = 1e-12) -> bool:
        y = np.asarray(y, dtype=float)
        return any(np.linalg.norm(y - a) <= tol for a in self.singular_arrays())

    @property
    def is_smooth(self) -> bool:
        return len(self.singular_points) == 0


def _no_singularities(grad_bound=None):
    return dict(singular_points=(), holder_exponent=None, gradient_power=0.0, sup_gradient=grad_bound)


# ---------------------------------------------------------------------------
# Catalog constructors
# ---------------------------------------------------------------------------


def constant(value: float) -> ScalarField:
    value = float(value)
    return ScalarField(
        name=f"constant({value:g})",
        evaluate_fn=lambda x: np.full(len(x), value),
        gradient_fn=lambda x: np.zeros_like(x),
        laplacian_fn=lambda x: np.zeros(len(x)),
        grad_norm_closed=lambda domain, p: 0.0,
        **_no_singularities(grad_bound=0.0),
    )


def linear(offset: float, slope) -> ScalarField:
    slope = np.asarray(slope, dtype=float).reshape(-1)
    offset = float(offset)
    mag = float(np.linalg.norm(slope))

    def closed(domain: Domain, p: LebesgueExponent):
        if p.is_infinite:
            return mag
        return mag * domain.volume_measure ** (1.0 / p.value)

    return ScalarField(
        name=f"linear({offset:g},{slope.tolist()})",
        evaluate_fn=lambda x: offset + x @ slope,
        gradient_fn=lambda x: np.broadcast_to(slope, x.shape).copy(),
        laplacian_fn=lambda x: np.zeros(len(x)),
        dim=slope.size,
        grad_norm_closed=closed,
        **_no_singularities(grad_bound=mag),
    )


def coordinate(index: int) -> ScalarField:
    """The coordinate function x_i (1-based index)."""
    if int(index) != index or index < 1:
        raise ParameterError(f"coordinate index is 1-based, got {index}")
    i = int(index) - 1

    def closed(domain: Domain, p: LebesgueExponent):
        if p.is_infinite:
            return 1.0
        return domain.volume_measure ** (1.0 / p.value)

    return ScalarField(
        name=f"coordinate({index})",
        evaluate_fn=lambda x: x[:, i].copy(),
        gradient_fn=lambda x: np.eye(x.shape[1])[i] * np.ones((len(x), 1)),
        laplacian_fn=lambda x: np.zeros(len(x)),
        grad_norm_closed=closed,
        **_no_singularities(grad_bound=1.0),
    )


def quadratic_radial(center) -> ScalarField:
    """|x - a|^2 about the given center; Laplacian is the constant 2 N."""
    a = as_point(center)

    def closed(domain: Domain, p: LebesgueExponent):
        if not (isinstance(domain, Ball) and np.allclose(domain.center, a)):
            return None
        R, n = domain.radius, domain.dim
        if p.is_infinite:
            return 2.0 * R
        q = p.value
        return 2.0 * (sphere_area(n) * R ** (q + n) / (q + n)) ** (1.0 / q)

    return ScalarField(
        name=f"quadratic_radial({a.tolist()})",
        evaluate_fn=lambda x: np.sum((x - a) ** 2, axis=1),
        gradient_fn=lambda x: 2.0 * (x - a),
        laplacian_fn=lambda x: np.full(len(x), 2.0 * x.shape[1]),
        dim=a.size,
        grad_norm_closed=closed,
        **_no_singularities(),
    )


def harmonic_poly(degree: int, dim: int = 2) -> ScalarField:
    """A harmonic polynomial: Re (x1 + i x2)^k in 2-D; x1 (k=1) or
    x1^2 - x2^2 (k=2) in 3-D."""
    k = int(degree)
    if k < 1:
        raise ParameterError(f"harmonic polynomial degree must be >= 1, got {degree}")
    if dim == 2:

        def ev(x):
            z = x[:, 0] + 1j * x[:, 1]
            return (z**k).real

        def gr(x):
            z = x[:, 0] + 1j * x[:, 1]
            # d/dx Re z^k = Re k z^{k-1}, d/dy Re z^k = -Im k z^{k-1}
            w = k * z ** (k - 1)
            return np.column_stack([w.real, -w.imag])

    elif dim == 3:
        if k == 1:

            def ev(x):
                return x[:, 0].copy()

            def gr(x):
                g = np.zeros_like(x)
                g[:, 0] = 1.0
                return g

        elif k == 2:

            def ev(x):
                return x[:, 0] ** 2 - x[:, 1] ** 2

            def gr(x):
                g = np.zeros_like(x)
                g[:, 0] = 2.0 * x[:, 0]
                g[:, 1] = -2.0 * x[:, 1]
                return g

        else:
            raise ParameterError("3-D harmonic polynomials are provided for degree 1 and 2 only")
    else:
        raise DimensionError("harmonic polynomials are catalogued for N in {2, 3}")

    return ScalarField(
        name=f"harmonic_poly({k})" + ("" if dim == 2 else f"[{dim}d]"),
        evaluate_fn=ev,
        gradient_fn=gr,
        laplacian_fn=lambda x: np.zeros(len(x)),
        dim=dim,
        **_no_singularities(),
    )


def _power_distance_norm(a, beta):
    """Closed-form L^p gradient norm factory for |x - a|^beta on balls
    centered at a."""

    def closed(domain: Domain, p: LebesgueExponent):
        if not (isinstance(domain, Ball) and np.allclose(domain.center, a)):
            return None
        R, n = domain.radius, domain.dim
        if p.is_infinite:
            if beta < 1.0:
                raise IntegrabilityError(
                    f"|grad| of |x-a|^{beta} is unbounded; the sup norm does not exist"
                )
            return beta * R ** (beta - 1.0) if beta > 1.0 else 1.0
        q = p.value
        expo = (beta - 1.0) * q + n
        if expo <= 0.0:
            raise IntegrabilityError(
                f"|grad|^p of |x-a|^{beta} is not integrable for p={q} in dimension {n}"
            )
        return beta * (sphere_area(n) * R**expo / expo) ** (1.0 / q)

    return closed


def distance(center) -> ScalarField:
    """|x - a|: Lipschitz with unit gradient, direction singular at a."""
    a = as_point(center)

    def ev(x):
        return np.linalg.norm(x - a, axis=1)

    def gr(x):
        d = x - a
        return d / np.linalg.norm(d, axis=1)[:, None]

    def lap(x):
        r = np.linalg.norm(x - a, axis=1)
        return (x.shape[1] - 1) / r

    return ScalarField(
        name=f"distance({a.tolist()})",
        evaluate_fn=ev,
        gradient_fn=gr,
        laplacian_fn=lap,
        singular_points=(tuple(a),),
        holder_exponent=None,
        gradient_power=0.0,
        dim=a.size,
        grad_norm_closed=_power_distance_norm(a, 1.0),
        sup_gradient=1.0,
    )


def power_distance(center, power: float) -> ScalarField:
    """|x - a|^beta for beta > 0; registers a as singular and, for
    beta in (0, 1), the Holder exponent beta."""
    a = as_point(center)
    beta = float(power)
    if beta <= 0.0:
        raise ParameterError(f"power must be positive, got {power}")
    if beta == 1.0:
        return distance(a)

    def ev(x):
        return np.linalg.norm(x - a, axis=1) ** beta

    def gr(x):
        d = x - a
        r = np.linalg.norm(d, axis=1)
        return beta * r[:, None] ** (beta - 2.0) * d

    def lap(x):
        r = np.linalg.norm(x - a, axis=1)
        return beta * (beta + x.shape[1] - 2.0) * r ** (beta - 2.0)

    return ScalarField(
        name=f"power_distance({a.tolist()},{beta:g})",
        evaluate_fn=ev,
        gradient_fn=gr,
        laplacian_fn=lap,
        singular_points=(tuple(a),),
        holder_exponent=beta if beta < 1.0 else None,
        gradient_power=beta - 1.0,
        dim=a.size,
        grad_norm_closed=_power_distance_norm(a, beta),
        sup_gradient=None if beta < 1.0 else beta,
    )


_CATALOG = {
    "constant": constant,
    "linear": linear,
    "coordinate": coordinate,
    "quadratic_radial": quadratic_radial,
    "harmonic_poly": harmonic_poly,
    "distance": distance,
    "power_distance": power_distance,
}


def catalog(name: str, *args, **kwargs) -> ScalarField:
    """Instantiate a catalog field by name; see the module docstring."""
    try:
        builder = _CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown field {name!r}; known: {sorted(_CATALOG)}") from None
    return builder(*args, **kwargs)


def extremal_field(p, y, sign: int = 1) -> ScalarField:
    """The deviation-bound equality witness centered at y.

    Returns sign * |x - y| when p = inf and sign * |x - y|^((p-N)/(p-1))
    for finite p > N (N inferred from y).
    """
    y = as_point(y)
    n = y.size
    p = LebesgueExponent.of(p)
    p.require_above_dimension(n)
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    base = distance(y) if p.is_infinite else power_distance(y, (p.value - n) / (p.value - 1.0))
    if sign == 1:
        return base
    return ScalarField(
        name="-" + base.name,
        evaluate_fn=lambda x: -base.evaluate_fn(x),
        gradient_fn=lambda x: -base.gradient_fn(x),
        laplacian_fn=(lambda x: -base.laplacian_fn(x)) if base.laplacian_fn else None,
        singular_points=base.singular_points,
        holder_exponent=base.holder_exponent,
        gradient_power=base.gradient_power,
        dim=base.dim,
        grad_norm_closed=base.grad_norm_closed,
        sup_gradient=base.sup_gradient,
    )


# ---------------------------------------------------------------------------
# Gradient norms
# ---------------------------------------------------------------------------


def grad_norm(field: ScalarField, domain: Domain, p, order: int = 64) -> float:
    """L^p norm of the gradient over the domain.

    Uses the field's closed form when available (closed forms win over
    quadrature); otherwise integrates |grad f|^p with polar rules matched to
    the gradient's power-law growth at each singular point.  For p = inf
    without a closed form, the sup is estimated as a node maximum, which
    underestimates true suprema of unbounded gradients; fields with
    unbounded gradients must carry p < inf.
    """
    p = LebesgueExponent.of(p)
    if field.grad_norm_closed is not None:
        closed = field.grad_norm_closed(domain, p)
        if closed is not None:
            return float(closed)
    if p.is_infinite:
        if field.sup_gradient is not None:
            return float(field.sup_gradient)
        rule = composite_volume_rule(domain, order, domain.center)
        return float(np.max(np.linalg.norm(field.gradient(rule.nodes), axis=1)))
    rule = _gradient_adapted_rule(field, domain, order, power_scale=p.value)
    vals = np.linalg.norm(field.gradient(rule.nodes), axis=1) ** p.value
    total = float(rule.weights @ vals)
    if not np.isfinite(total) or total < 0:
        raise IntegrabilityError(f"gradient L^{p.value} norm of {field.name} did not converge")
    return total ** (1.0 / p.value)


def _gradient_adapted_rule(field: ScalarField, domain: Domain, order: int, power_scale: float = 1.0):
    """Volume rule adapted to |grad f|^power_scale for the field's singular set."""
    singulars = [a for a in field.singular_arrays() if domain.classify(a) != EXTERIOR]
    if not singulars:
        return composite_volume_rule(domain, order, domain.center)
    primary = singulars[0]
    kappa = field.gradient_power * power_scale
    holes = []
    for a in singulars[1:]:
        holes.append((a, _safe_hole_radius(a, [primary] + [b for b in singulars[1:] if b is not a], domain), kappa))
    return composite_volume_rule(domain, order, primary, kernel_power=kappa, holes=holes)


def _safe_hole_radius(a, others, domain: Domain) -> float:
    dists = [np.linalg.norm(a - np.asarray(b)) for b in others if np.linalg.norm(a - np.asarray(b)) > 0]
    dists.append(domain.boundary_distance(a))
    return 0.5 * min(dists)


def holder_ratio(field: ScalarField, a, alpha: float, radii, samples: int = 64) -> np.ndarray:
    """Max of |f(x) - f(a)| / |x - a|^alpha over spheres of the given radii.

    The pointwise Holder hypothesis at a singular point holds when these
    ratios stay bounded as the radius shrinks.
    """
    a = as_point(a)
    fa = field.evaluate(a)
    n = a.size
    out = []
    for eps in np.atleast_1d(radii):
        if n == 2:
            th = 2.0 * math.pi * np.arange(samples) / samples
            dirs = np.column_stack([np.cos(th), np.sin(th)])
        else:
            from .geometry import sphere_directions

            dirs, _ = sphere_directions(max(4, samples // 8))
        pts = a + eps * dirs
        out.append(float(np.max(np.abs(field.evaluate(pts) - fa)) / eps**alpha))
    return np.asarray(out)
