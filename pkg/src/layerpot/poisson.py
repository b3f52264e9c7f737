"""Harmonic machinery on balls: the interior reproducing kernel, mean-value
checks, and boundary-data harmonic extensions.

The reproducing kernel of the ball B_R(a) at an interior point y is
(R^2 - |y - a|^2) / (R omega_N |x - y|^N); integrated against continuous
boundary data it produces the harmonic extension, and against the constant 1
it integrates to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PlacementError
from .fields import ScalarField
from .geometry import INTERIOR, Ball, as_point, escalated_order, volume_rule
from .kernel import sphere_area

#: Interior evaluation is restricted to this fraction of the radius; closer
#: to the sphere the kernel peak outruns the escalation cap, and we fail
#: loudly instead of silently losing accuracy.
MAX_RELATIVE_OFFSET = 0.95


def _boundary_callable(phi):
    if isinstance(phi, ScalarField):
        return phi.evaluate
    if callable(phi):
        return lambda x: np.asarray(phi(x), dtype=float)
    value = float(phi)
    return lambda x: np.full(len(x), value)


def poisson_kernel(ball: Ball, nodes: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Reproducing-kernel rows for boundary nodes against an interior target."""
    r2 = float(np.sum((y - ball.center) ** 2))
    dist = np.linalg.norm(nodes - y, axis=1)
    return (ball.radius**2 - r2) / (ball.radius * sphere_area(ball.dim) * dist**ball.dim)


def poisson_evaluate(ball: Ball, phi, y, order: int = 64) -> float:
    """Harmonic extension of boundary data phi evaluated at interior y.

    The rule order escalates with the kernel peak; targets beyond
    MAX_RELATIVE_OFFSET * R are rejected rather than silently degraded.
    """
    y = as_point(y, ball.dim)
    off = float(np.linalg.norm(y - ball.center))
    if ball.classify(y) != INTERIOR:
        raise PlacementError("the reproducing kernel extends boundary data to interior points only")
    if off > MAX_RELATIVE_OFFSET * ball.radius:
        raise PlacementError(
            f"target at {off / ball.radius:.3f} R exceeds the supported interior range "
            f"{MAX_RELATIVE_OFFSET} R"
        )
    eff, _ = escalated_order(ball, order, y)
    pole = (y - ball.center) if ball.dim == 3 and off > 1e-14 else None
    rule = ball.boundary_rule(eff, pole=pole)
    vals = _boundary_callable(phi)(rule.nodes)
    return float(rule.weights @ (vals * poisson_kernel(ball, rule.nodes, y)))


@dataclass(frozen=True)
class MeanValueReport:
    surface_mean: float
    volume_mean: float
    center_value: float


def mean_value_check(u: ScalarField, ball: Ball, order: int = 64) -> MeanValueReport:
    """Surface mean, volume mean, and center value over a ball.

    For a function harmonic on a neighbourhood of the closed ball the three
    numbers agree; the caller asserts that.  Fields singular inside the
    closed ball are rejected.
    """
    for a in u.singular_arrays():
        if np.linalg.norm(a - ball.center) <= ball.radius * (1 + 1e-12):
            raise PlacementError(f"singular point {a.tolist()} lies in the closed ball")
    brule = ball.boundary_rule(order)
    vrule = volume_rule(ball, order)
    return MeanValueReport(
        surface_mean=float(brule.weights @ u.evaluate(brule.nodes)) / ball.surface_measure,
        volume_mean=float(vrule.weights @ u.evaluate(vrule.nodes)) / ball.volume_measure,
        center_value=u.evaluate(ball.center),
    )


@dataclass(frozen=True)
class DirichletSolution:
    """Harmonic extension of boundary data into a ball.

    Boundary data is sampled at the quadrature resolution of each evaluate
    call (the callable is retained, so finer orders resample it); no
    interpolation scheme is committed to.
    """

    ball: Ball
    boundary_data: object
    order: int = 64

    def evaluate(self, y, order: int | None = None) -> float:
        return poisson_evaluate(self.ball, self.boundary_data, y, order or self.order)

    def boundary_samples(self, order: int | None = None) -> np.ndarray:
        rule = self.ball.boundary_rule(order or self.order)
        return _boundary_callable(self.boundary_data)(rule.nodes)


def dirichlet_chi(ball: Ball, f, order: int = 64) -> DirichletSolution:
    """The harmonic function on the ball agreeing with f on the sphere."""
    if order < 4:
        raise ParameterError(f"order must be >= 4, got {order}")
    return DirichletSolution(ball=ball, boundary_data=f, order=order)
