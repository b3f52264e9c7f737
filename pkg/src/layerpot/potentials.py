"""Double-layer potentials, jump relations, and the singular volume integrals
pairing the free-space kernel gradient with field gradients.

The double-layer value at a target y is the boundary integral of the moment
against the normal derivative of the free-space kernel.  Off the boundary
the kernel is smooth but peaks at scale dist(y, boundary); rules escalate
automatically (with a metadata warning) so near-boundary targets stay
accurate.  On the boundary the kernel has a removable (2-D) or weak,
analytically cancelled (3-D spheres, pole-aligned rules) singularity and a
dedicated smooth evaluation path is used.

The gradient volume integral int <grad E(x - y), grad f(x)> dx is computed
with polar-centered rules whose radial weight absorbs both the kernel
singularity at y and the field's own gradient growth at its singular
points; secondary singular points are excised into their own polar blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import CapabilityError, ParameterError, PlacementError, ResolutionError
from .fields import ScalarField
from .geometry import (
    BOUNDARY,
    INTERIOR,
    Ball,
    Domain,
    as_point,
    composite_volume_rule,
    escalated_order,
)
from .kernel import sphere_area


def _moment_callable(h):
    if isinstance(h, ScalarField):
        return h.evaluate
    if callable(h):
        return lambda x: np.asarray(h(x), dtype=float)
    value = float(h)
    return lambda x: np.full(len(x), value)


def dl_kernel(nodes: np.ndarray, normals: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Double-layer kernel rows <x - y, nu(x)> / (omega_N |x - y|^N)."""
    d = nodes - y
    r = np.linalg.norm(d, axis=1)
    n = nodes.shape[1]
    return np.einsum("ij,ij->i", d, normals) / (sphere_area(n) * r**n)


@dataclass(frozen=True)
class LayerEvaluation:
    """Value of a layer potential plus where and how it was computed."""

    value: float
    location_class: str
    quadrature_order: int
    warning: str | None = None
    metadata: dict = dataclass_field(default_factory=dict)

    def __float__(self):
        return self.value


def _boundary_value(h, domain: Domain, z: np.ndarray, order: int) -> float:
    """Direct boundary evaluation of the double-layer potential.

    On a circle the kernel is the constant 1 / (2 omega_2 R) including its
    diagonal limit; on a sphere the 1/|x-z| singularity is cancelled by the
    sin(theta) Jacobian of a rule whose pole sits at z; on a smooth curve
    the kernel extends continuously to the diagonal with value
    curvature / (4 pi) and the coincident node (if any) uses that limit.
    """
    moment = _moment_callable(h)
    if isinstance(domain, Ball):
        rule = domain.boundary_rule(order, pole=(z - domain.center))
        vals = moment(rule.nodes)
        if domain.dim == 2:
            kernel = np.full(len(vals), 1.0 / (2.0 * sphere_area(2) * domain.radius))
        else:
            r = np.linalg.norm(rule.nodes - z, axis=1)
            kernel = r ** (2 - domain.dim) / (2.0 * domain.radius * sphere_area(domain.dim))
        return float(rule.weights @ (vals * kernel))
    rule = domain.boundary_rule(order)
    d = rule.nodes - z
    r = np.linalg.norm(d, axis=1)
    kernel = np.empty(len(r))
    coincident = r <= 1e-10 * domain.diameter
    kernel[~coincident] = np.einsum("ij,ij->i", d[~coincident], rule.normals[~coincident]) / (
        sphere_area(2) * r[~coincident] ** 2
    )
    if np.any(coincident):
        kernel[coincident] = domain.kernel_diagonal(z)
    return float(rule.weights @ (moment(rule.nodes) * kernel))


def double_layer(h, domain: Domain, y, order: int = 64) -> LayerEvaluation:
    """Double-layer potential with moment h evaluated at y.

    h may be a ScalarField, a vectorized callable on points, or a number
    (constant moment).  Near-boundary targets escalate the rule order and
    attach a warning to the returned metadata rather than failing.
    """
    y = as_point(y, domain.dim)
    cls = domain.classify(y)
    if cls == BOUNDARY:
        value = _boundary_value(h, domain, y, order)
        return LayerEvaluation(value=value, location_class=cls, quadrature_order=order)
    eff, warn = escalated_order(domain, order, y)
    pole = None
    if domain.dim == 3:
        axis = y - domain.center
        pole = axis if np.linalg.norm(axis) > 1e-14 else None
    rule = domain.boundary_rule(eff, pole=pole)
    vals = _moment_callable(h)(rule.nodes)
    value = float(rule.weights @ (vals * dl_kernel(rule.nodes, rule.normals, y)))
    return LayerEvaluation(value=value, location_class=cls, quadrature_order=eff, warning=warn)


def double_layer_batch(h, domain: Domain, targets, order: int = 64) -> np.ndarray:
    """Double-layer values at many targets sharing one (escalated) rule.

    Off-boundary targets are grouped by required order so the kernel matrix
    is evaluated in a few vectorized passes; no state is shared, so batches
    may also be fanned out across threads.
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    moment = _moment_callable(h)
    out = np.empty(len(targets))
    orders = np.empty(len(targets), dtype=int)
    for i, y in enumerate(targets):
        cls = domain.classify(y)
        if cls == BOUNDARY:
            orders[i] = -1
        else:
            orders[i], _ = escalated_order(domain, order, y)
    for eff in np.unique(orders):
        idx = np.nonzero(orders == eff)[0]
        if eff < 0:
            for i in idx:
                out[i] = _boundary_value(h, domain, targets[i], order)
            continue
        if domain.dim == 3:
            for i in idx:
                out[i] = double_layer(h, domain, targets[i], order).value
            continue
        rule = domain.boundary_rule(int(eff))
        vals = moment(rule.nodes)
        diff = rule.nodes[None, :, :] - targets[idx][:, None, :]
        r2 = np.sum(diff**2, axis=2)
        num = np.einsum("kij,ij->ki", diff, rule.normals)
        kern = num / (sphere_area(2) * r2)
        out[idx] = kern @ (rule.weights * vals)
    return out


@dataclass(frozen=True)
class JumpRelationResult:
    """One-sided limits of the double layer at a boundary point."""

    interior_limit_estimate: float
    exterior_limit_estimate: float
    boundary_value: float
    distances: tuple
    interior_values: tuple
    exterior_values: tuple


def _richardson(values, distances):
    """First-order Richardson extrapolation from the two smallest offsets."""
    d1, d2 = distances[-2], distances[-1]
    v1, v2 = values[-2], values[-1]
    return v2 + (v2 - v1) * d2 / (d1 - d2)


def _require_monotone(values, scale: float) -> None:
    """Reject one-sided sequences whose successive differences grow.

    Differences below a 1e-6 noise floor (relative to the value scale) are
    converged-to-roundoff, not a resolution failure; genuine
    under-resolution shows up at the scale of the jump itself.
    """
    if len(values) < 3:
        return
    steps = np.abs(np.diff(values))
    grew = (np.diff(steps) > 1e-6 * scale) & (steps[1:] > 1e-6 * scale)
    if np.any(grew):
        raise ResolutionError(
            "one-sided values do not converge monotonically; raise the quadrature order"
        )


def jump_relation_check(h, domain: Domain, y0, distances, order: int = 64) -> JumpRelationResult:
    """Estimate the one-sided limits of the double layer across the boundary.

    Evaluates along y0 -/+ d nu(y0) for the given decreasing offsets,
    extrapolates each side linearly from the two smallest offsets, and
    returns both limits with the direct boundary value.  A non-monotone
    difference sequence (beyond rounding noise) signals under-resolution
    and raises ResolutionError.
    """
    y0 = as_point(y0, domain.dim)
    if domain.classify(y0) != BOUNDARY:
        raise PlacementError(f"{y0.tolist()} is not a boundary point")
    ds = np.sort(np.atleast_1d(np.asarray(distances, dtype=float)))[::-1]
    if len(ds) < 2:
        raise ParameterError("need at least two approach distances")
    nu = domain.outward_normal(y0)
    ins, outs = [], []
    for d in ds:
        ins.append(double_layer(h, domain, y0 - d * nu, order).value)
        outs.append(double_layer(h, domain, y0 + d * nu, order).value)
    scale = max(1.0, max(abs(v) for v in ins + outs))
    _require_monotone(ins, scale)
    _require_monotone(outs, scale)
    return JumpRelationResult(
        interior_limit_estimate=_richardson(ins, ds),
        exterior_limit_estimate=_richardson(outs, ds),
        boundary_value=double_layer(h, domain, y0, order).value,
        distances=tuple(ds),
        interior_values=tuple(ins),
        exterior_values=tuple(outs),
    )


# ---------------------------------------------------------------------------
# Gradient volume integral
# ---------------------------------------------------------------------------


def _hole_radius(a, y, others, domain: Domain) -> float:
    cands = [domain.boundary_distance(a)]
    if y is not None:
        cands.append(float(np.linalg.norm(a - y)))
    for b in others:
        d = float(np.linalg.norm(a - np.asarray(b)))
        if d > 0:
            cands.append(d)
    return 0.5 * min(cands)


def _volume_order_for_target(domain: Domain, order: int, y) -> int:
    """Escalate the polar-rule order for targets close to the boundary.

    The kernel singularity itself is absorbed radially, but the angular
    profile of the per-ray extents develops a sqrt(distance)-scale boundary
    layer (and, on concave shapes, tangency kinks), so the angular count
    grows like 1/sqrt(distance), capped at 512.
    """
    d = domain.boundary_distance(y)
    if d <= 0:
        return order
    needed = int(math.ceil(8.0 * math.sqrt(domain.inradius / d)))
    eff = order
    while eff < min(needed, 512):
        eff *= 2
    return eff


def _rule_for_gradient_integral(f: ScalarField, domain: Domain, y, order: int):
    """Composite volume rule adapted to <grad E(. - y), grad f>."""
    n = domain.dim
    singulars = [a for a in f.singular_arrays() if domain.classify(a) == INTERIOR]
    cls = domain.classify(y)
    if cls == INTERIOR:
        center = y
        order = _volume_order_for_target(domain, order, y)
        kappa = float(1 - n)
        rest = []
        for a in singulars:
            if np.linalg.norm(a - y) <= 1e-12 * domain.diameter:
                kappa += f.gradient_power
            else:
                rest.append(a)
    else:
        center = domain.center
        kappa = 0.0
        rest = []
        for a in singulars:
            if np.linalg.norm(a - center) <= 1e-12 * domain.diameter:
                kappa += f.gradient_power
            else:
                rest.append(a)
    holes = [
        (a, _hole_radius(a, center, [b for b in rest if b is not a], domain), f.gradient_power)
        for a in rest
    ]
    return composite_volume_rule(domain, order, center, kernel_power=kappa, holes=holes)


def gradient_volume_integral(f: ScalarField, domain: Domain, y, order: int = 64) -> float:
    """int_Omega <grad E(x - y), grad f(x)> dx for y off the boundary.

    Interior targets get a polar-centered rule at y (the radial Jacobian
    cancels the kernel's |x - y|^(1-N) growth) with ball-shaped excisions
    around the field's other singular points; exterior targets use a
    regular rule (the kernel is smooth on the closure).  A singular point
    of f coinciding with y is folded into the radial weight, not an error.
    """
    y = as_point(y, domain.dim)
    if domain.classify(y) == BOUNDARY:
        raise PlacementError("target on the boundary; use boundary_limit_zeta instead")
    rule = _rule_for_gradient_integral(f, domain, y, order)
    d = rule.nodes - y
    r = np.linalg.norm(d, axis=1)
    kern = d / (sphere_area(domain.dim) * r[:, None] ** domain.dim)
    vals = np.einsum("ij,ij->i", kern, f.gradient(rule.nodes))
    return float(rule.weights @ vals)


def boundary_limit_zeta(
    f: ScalarField,
    domain: Domain,
    z,
    order: int = 64,
    mode: str = "algebraic",
    distances=None,
) -> float:
    """Boundary trace of the gradient volume integral.

    ``algebraic`` mode uses the identity trace = (double layer of f at z)
    minus f(z)/2, which is exact up to boundary-quadrature error;
    ``limit`` mode extrapolates the interior values of the volume integral
    along the inward normal (a diagnostic cross-check of the same
    quantity through entirely different machinery).
    """
    z = as_point(z, domain.dim)
    if domain.classify(z) != BOUNDARY:
        raise PlacementError(f"{z.tolist()} is not a boundary point")
    if mode == "algebraic":
        return double_layer(f, domain, z, order).value - 0.5 * f.evaluate(z)
    if mode != "limit":
        raise ParameterError(f"unknown zeta mode {mode!r}")
    if distances is None:
        distances = (2e-2 * domain.inradius, 1e-2 * domain.inradius)
    ds = np.sort(np.atleast_1d(np.asarray(distances, dtype=float)))[::-1]
    nu = domain.outward_normal(z)
    vals = [gradient_volume_integral(f, domain, z - d * nu, order) for d in ds]
    return _richardson(vals, ds)


# ---------------------------------------------------------------------------
# Kernel-weighted Newtonian integrals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NewtonianIntegrals:
    boundary_term: float
    volume_term: float


def newtonian_integrals(f: ScalarField, domain: Domain, y, order: int = 64) -> NewtonianIntegrals:
    """The two Green-identity companions of the gradient volume integral:
    int_boundary (df/dnu) E(x - y) dsigma and int_Omega (Lap f) E(x - y) dx.

    Requires a field with a Laplacian and y off the boundary.  For interior
    y the volume rule's radial substitution keeps the logarithmic (2-D) or
    power (N >= 3) singularity of the kernel in the rule's accuracy class.
    """
    if not f.has_laplacian:
        raise CapabilityError(f"field {f.name} carries no Laplacian")
    y = as_point(y, domain.dim)
    cls = domain.classify(y)
    if cls == BOUNDARY:
        raise PlacementError("Newtonian integrals are evaluated off the boundary")
    eff, _ = escalated_order(domain, order, y)
    pole = (y - domain.center) if domain.dim == 3 and np.linalg.norm(y - domain.center) > 1e-14 else None
    brule = domain.boundary_rule(eff, pole=pole)
    dfdnu = np.einsum("ij,ij->i", f.gradient(brule.nodes), brule.normals)
    from .kernel import fundamental_solution

    boundary_term = float(brule.weights @ (dfdnu * fundamental_solution(brule.nodes - y)))
    if cls == INTERIOR:
        vrule = composite_volume_rule(domain, order, y, log_kernel=True)
    else:
        vrule = composite_volume_rule(domain, order, domain.center)
    volume_term = float(vrule.weights @ (f.laplacian(vrule.nodes) * fundamental_solution(vrule.nodes - y)))
    return NewtonianIntegrals(boundary_term=boundary_term, volume_term=volume_term)
