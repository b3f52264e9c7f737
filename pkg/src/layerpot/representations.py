"""Evaluates both sides of every representation identity and reports residuals.

Each check returns an IdentityReport carrying the two sides, their absolute
difference, the tolerance the check was held to, and the quadrature
metadata.  Default tolerances follow the field class: 1e-6 for smooth
fields, 1e-4 for fields with singular points, and 1e-3 for the
double-integral identities, which are dominated by the outer rule.

Identity identifiers
--------------------
F1      point value = double layer - gradient volume integral (interior y)
FIG     volume integral of f via the boundary/volume pairing with x - y
MAT     F1 specialized to a ball
COM     MAT rewritten through the harmonic extension of the boundary trace
RP0/RP1 mean-plus-corrections representation (free z / z = y)
CERC    four-term ball representation; REP3/REP2 its volume/surface means
F2      volume integral of the double layer
F3      boundary integral of the double layer via the jump identity
C2_EXTERIOR   exterior double layer equals the gradient volume integral
GRR     gradient volume integral via boundary flux and kernel-weighted Laplacian
GREEN_RIEMANN_{INTERIOR,EXTERIOR,BOUNDARY}  the classical consequences
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetError, ExponentError, ParameterError, PlacementError
from .fields import LebesgueExponent, ScalarField, _gradient_adapted_rule
from .geometry import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    Ball,
    Domain,
    as_point,
    max_nodes_budget,
    volume_rule,
)
from .kernel import sphere_area
from .poisson import dirichlet_chi
from .potentials import (
    boundary_limit_zeta,
    double_layer,
    double_layer_batch,
    gradient_volume_integral,
    newtonian_integrals,
)
from dataclasses import dataclass, field as dataclass_field

IDENTITIES = (
    "F1",
    "FIG",
    "MAT",
    "COM",
    "RP0",
    "RP1",
    "CERC",
    "REP2",
    "REP3",
    "F2",
    "F3",
    "C2_EXTERIOR",
    "GRR",
    "GREEN_RIEMANN_INTERIOR",
    "GREEN_RIEMANN_EXTERIOR",
    "GREEN_RIEMANN_BOUNDARY",
)

SMOOTH_TOL = 1e-6
SINGULAR_TOL = 1e-4
DOUBLE_INTEGRAL_TOL = 1e-3


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    order: int
    points: tuple
    passed: bool
    metadata: dict = dataclass_field(default_factory=dict)

    def __bool__(self):
        return self.passed


def default_tolerance(f: ScalarField, identity: str) -> float:
    if identity in ("F2", "F3"):
        return DOUBLE_INTEGRAL_TOL
    if identity == "GREEN_RIEMANN_BOUNDARY":
        # Limited by the one-sided extrapolation of the boundary limit.
        return DOUBLE_INTEGRAL_TOL
    if not f.is_smooth:
        return SINGULAR_TOL
    return SMOOTH_TOL


def _report(identity, lhs, rhs, tolerance, order, points, **metadata) -> IdentityReport:
    lhs, rhs = float(lhs), float(rhs)
    residual = abs(lhs - rhs)
    return IdentityReport(
        identity=identity,
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        tolerance=float(tolerance),
        order=int(order),
        points=tuple(tuple(np.atleast_1d(p).tolist()) for p in points),
        passed=residual <= tolerance,
        metadata=metadata,
    )


def _require_sobolev(f: ScalarField, domain: Domain, p) -> LebesgueExponent:
    p = LebesgueExponent.of(p)
    p.require_above_dimension(domain.dim)
    return p


# ---------------------------------------------------------------------------
# Core identities
# ---------------------------------------------------------------------------


def check_f1(f: ScalarField, domain: Domain, y, order: int = 128, tolerance=None, p=np.inf) -> IdentityReport:
    """Point value versus double layer minus gradient volume integral."""
    y = as_point(y, domain.dim)
    if domain.classify(y) != INTERIOR:
        raise PlacementError("this identity represents interior values")
    _require_sobolev(f, domain, p)
    lhs = f.evaluate(y)
    dl = double_layer(f, domain, y, order)
    vol = gradient_volume_integral(f, domain, y, order)
    tol = default_tolerance(f, "F1") if tolerance is None else tolerance
    return _report("F1", lhs, dl.value - vol, tol, order, [y], double_layer=dl.value, volume=vol)


def _fig_terms(f: ScalarField, domain: Domain, z, order: int) -> tuple[float, float]:
    """The boundary and volume pairings with x - z used by FIG and RP0."""
    z = as_point(z, domain.dim)
    brule = domain.boundary_rule(order)
    moments = f.evaluate(brule.nodes) * np.einsum("ij,ij->i", brule.nodes - z, brule.normals)
    boundary_term = float(brule.weights @ moments)
    vrule = _gradient_adapted_rule(f, domain, order)
    vol_vals = np.einsum("ij,ij->i", f.gradient(vrule.nodes), vrule.nodes - z)
    volume_term = float(vrule.weights @ vol_vals)
    return boundary_term, volume_term


def check_fig(f: ScalarField, domain: Domain, y, order: int = 64, tolerance=None) -> IdentityReport:
    """Volume integral of f via the divergence pairing with x - y (any y)."""
    y = as_point(y, domain.dim)
    vrule = volume_rule(domain, order)
    lhs = float(vrule.weights @ f.evaluate(vrule.nodes))
    bnd, vol = _fig_terms(f, domain, y, order)
    n = domain.dim
    rhs = (bnd - vol) / n
    tol = default_tolerance(f, "FIG") if tolerance is None else tolerance
    return _report("FIG", lhs, rhs, tol, order, [y], boundary_term=bnd, volume_term=vol)


def check_ball_corollaries(
    f: ScalarField, ball: Ball, y, order: int = 64, which: str = "MAT", tolerance=None
) -> IdentityReport:
    """The ball specializations MAT, COM, CERC, REP2, REP3."""
    if which not in ("MAT", "COM", "CERC", "REP2", "REP3"):
        raise ParameterError(f"unknown ball identity {which!r}")
    a, R, n = ball.center, ball.radius, ball.dim
    omega = sphere_area(n)
    if which in ("REP2", "REP3"):
        y = a
    y = as_point(y, n)
    if which in ("MAT", "COM", "CERC") and ball.classify(y) != INTERIOR:
        raise PlacementError(f"{which} represents interior values of the ball")
    tol = default_tolerance(f, which) if tolerance is None else tolerance

    brule = ball.boundary_rule(order)
    fvals = f.evaluate(brule.nodes)
    surface_mean = float(brule.weights @ fvals) / ball.surface_measure
    lhs = f.evaluate(y)

    if which == "REP2":
        vol = gradient_volume_integral(f, ball, a, order)
        rhs = surface_mean - vol
        return _report("REP2", lhs, rhs, tol, order, [a], surface_mean=surface_mean, volume=vol)

    vrule = volume_rule(ball, order)
    volume_mean = float(vrule.weights @ f.evaluate(vrule.nodes)) / ball.volume_measure

    if which == "REP3":
        sing = gradient_volume_integral(f, ball, a, order)
        grule = _gradient_adapted_rule(f, ball, order)
        smooth = float(
            grule.weights @ np.einsum("ij,ij->i", f.gradient(grule.nodes), grule.nodes - a)
        ) / (omega * R**n)
        rhs = volume_mean - sing + smooth
        return _report(
            "REP3", lhs, rhs, tol, order, [a], volume_mean=volume_mean, singular_part=sing, smooth_part=smooth
        )

    dl = double_layer(f, ball, y, order).value
    vol = gradient_volume_integral(f, ball, y, order)

    if which == "MAT":
        return _report("MAT", lhs, dl - vol, tol, order, [y], double_layer=dl, volume=vol)

    if which == "CERC":
        grule = _gradient_adapted_rule(f, ball, order)
        smooth = float(
            grule.weights @ np.einsum("ij,ij->i", f.gradient(grule.nodes), grule.nodes - a)
        ) / (omega * R**n)
        rhs = volume_mean - surface_mean + dl - vol + smooth
        return _report(
            "CERC",
            lhs,
            rhs,
            tol,
            order,
            [y],
            volume_mean=volume_mean,
            surface_mean=surface_mean,
            double_layer=dl,
        )

    # COM: route the boundary contribution through the harmonic extension.
    chi = dirichlet_chi(ball, f, order).evaluate(y)
    d = y - brule.nodes
    r = np.linalg.norm(d, axis=1)
    kernel = (d @ (y - a)) / (R * omega * r**n)
    correction = float(brule.weights @ (fvals * kernel))
    rhs = chi + correction - vol
    return _report("COM", lhs, rhs, tol, order, [y], chi=chi, correction=correction, volume=vol)


def check_rp(
    f: ScalarField, domain: Domain, y, z=None, order: int = 64, which: str = "RP1", tolerance=None
) -> IdentityReport:
    """Mean-plus-corrections representation; RP0 takes a free pivot z."""
    if which not in ("RP0", "RP1"):
        raise ParameterError(f"unknown identity {which!r}")
    y = as_point(y, domain.dim)
    if domain.classify(y) != INTERIOR:
        raise PlacementError("this identity represents interior values")
    z = y if which == "RP1" or z is None else as_point(z, domain.dim)
    n = domain.dim
    meas = domain.volume_measure
    vrule = volume_rule(domain, order)
    mean = float(vrule.weights @ f.evaluate(vrule.nodes)) / meas
    dl = double_layer(f, domain, y, order).value
    vol = gradient_volume_integral(f, domain, y, order)
    bnd_z, vol_z = _fig_terms(f, domain, z, order)
    rhs = mean + (dl - bnd_z / (n * meas)) - (vol - vol_z / (n * meas))
    tol = default_tolerance(f, which) if tolerance is None else tolerance
    return _report(which, f.evaluate(y), rhs, tol, order, [y, z], mean=mean, double_layer=dl)


def check_c2_exterior(
    f: ScalarField, domain: Domain, y, p=np.inf, order: int = 64, tolerance=None
) -> IdentityReport:
    """Exterior double layer equals the gradient volume integral (any p >= 1)."""
    y = as_point(y, domain.dim)
    if domain.classify(y) != EXTERIOR:
        raise PlacementError("this identity holds strictly outside the closure")
    pval = float(p)
    if not pval >= 1.0:
        raise ExponentError(f"the exterior identity needs p in [1, inf], got {p}")
    dl = double_layer(f, domain, y, order)
    vol = gradient_volume_integral(f, domain, y, order)
    tol = default_tolerance(f, "C2_EXTERIOR") if tolerance is None else tolerance
    return _report("C2_EXTERIOR", dl.value, vol, tol, order, [y], p=pval)


# ---------------------------------------------------------------------------
# Double-integral identities
# ---------------------------------------------------------------------------


def _estimate_f2_nodes(domain: Domain, order_outer: int, order_inner: int) -> int:
    outer = 2 * order_outer**2 if domain.dim == 2 else 2 * order_outer**3
    inner = 2 * order_inner**2 if domain.dim == 2 else 2 * order_inner**3
    return outer * inner


def check_f2_f3(
    f: ScalarField,
    domain: Domain,
    order_outer: int = 32,
    order_inner: int = 64,
    z=None,
    zeta_mode: str = "limit",
    tolerance=None,
) -> tuple[IdentityReport, IdentityReport]:
    """The two integrated identities.

    F2 integrates the double layer over the volume and compares with the
    divergence pairing at a pivot z plus the integrated gradient volume
    integral; F3 integrates the double layer over the boundary against half
    the trace plus the boundary limit of the volume integral.  The default
    ``limit`` zeta mode extrapolates interior values so F3 exercises the
    jump machinery; the algebraic mode would make both sides coincide by
    construction.
    """
    z = domain.center if z is None else as_point(z, domain.dim)
    budget = max_nodes_budget()
    estimated = _estimate_f2_nodes(domain, order_outer, order_inner)
    if estimated > budget:
        raise BudgetError(
            f"F2 would touch ~{estimated:.2e} node pairs, over the budget {budget:.2e}; "
            "lower order_outer/order_inner or raise LAYERPOT_MAX_NODES"
        )
    tol = DOUBLE_INTEGRAL_TOL if tolerance is None else tolerance

    outer = volume_rule(domain, order_outer)
    ubar = double_layer_batch(f, domain, outer.nodes, order_inner)
    lhs_f2 = float(outer.weights @ ubar)
    bnd_z, vol_z = _fig_terms(f, domain, z, order_inner)
    if f.sup_gradient == 0.0:
        inner_total = 0.0
    else:
        inner_vals = np.array(
            [gradient_volume_integral(f, domain, yk, order_inner) for yk in outer.nodes]
        )
        inner_total = float(outer.weights @ inner_vals)
    rhs_f2 = (bnd_z - vol_z) / domain.dim + inner_total
    rep_f2 = _report(
        "F2", lhs_f2, rhs_f2, tol, order_outer, [z], order_inner=order_inner, inner_total=inner_total
    )

    brule = domain.boundary_rule(order_outer)
    ubar_b = np.array([double_layer(f, domain, zk, order_inner).value for zk in brule.nodes])
    lhs_f3 = float(brule.weights @ ubar_b)
    trace = float(brule.weights @ f.evaluate(brule.nodes))
    zetas = np.array(
        [
            boundary_limit_zeta(f, domain, zk, order_inner, mode=zeta_mode)
            for zk in brule.nodes
        ]
    )
    rhs_f3 = 0.5 * trace + float(brule.weights @ zetas)
    rep_f3 = _report(
        "F3", lhs_f3, rhs_f3, tol, order_outer, [], order_inner=order_inner, zeta_mode=zeta_mode
    )
    return rep_f2, rep_f3


# ---------------------------------------------------------------------------
# Green identities
# ---------------------------------------------------------------------------


def check_grr(f: ScalarField, domain: Domain, y, order: int = 64, tolerance=None) -> IdentityReport:
    """Gradient volume integral via boundary flux and kernel-weighted Laplacian."""
    y = as_point(y, domain.dim)
    lhs = gradient_volume_integral(f, domain, y, order)
    parts = newtonian_integrals(f, domain, y, order)
    rhs = parts.boundary_term - parts.volume_term
    tol = default_tolerance(f, "GRR") if tolerance is None else tolerance
    return _report(
        "GRR", lhs, rhs, tol, order, [y], boundary_term=parts.boundary_term, volume_term=parts.volume_term
    )


def check_green_riemann(
    f: ScalarField, domain: Domain, y, order: int = 64, tolerance=None, distances=None
) -> IdentityReport:
    """The classical representation through boundary flux and volume source.

    Interior y reproduces f(y); exterior y yields zero; boundary y uses the
    doubled identity through the extrapolated boundary limit of the volume
    integral.
    """
    y = as_point(y, domain.dim)
    cls = domain.classify(y)
    if cls == BOUNDARY:
        tol = default_tolerance(f, "GREEN_RIEMANN_BOUNDARY") if tolerance is None else tolerance
        dl = double_layer(f, domain, y, order).value
        zeta = boundary_limit_zeta(f, domain, y, order, mode="limit", distances=distances)
        return _report(
            "GREEN_RIEMANN_BOUNDARY", f.evaluate(y), 2.0 * dl - 2.0 * zeta, tol, order, [y], double_layer=dl
        )
    tol = default_tolerance(f, "GRR") if tolerance is None else tolerance
    dl = double_layer(f, domain, y, order).value
    parts = newtonian_integrals(f, domain, y, order)
    rhs = dl - parts.boundary_term + parts.volume_term
    if cls == INTERIOR:
        return _report("GREEN_RIEMANN_INTERIOR", f.evaluate(y), rhs, tol, order, [y])
    return _report("GREEN_RIEMANN_EXTERIOR", 0.0, rhs, tol, order, [y])


def check_grr_and_green_riemann(
    f: ScalarField, domain: Domain, y, order: int = 64, tolerance=None
) -> list[IdentityReport]:
    """Both the flux identity and its classical consequence at the same point."""
    return [
        check_grr(f, domain, y, order, tolerance),
        check_green_riemann(f, domain, y, order, tolerance),
    ]
