"""Domains with smooth boundary and every quadrature rule used by the library.

Points are plain 1-D float arrays of length N >= 2 (``as_point`` validates
them); domains are immutable objects exposing classification, outward
normals, closed-form or spectrally computed measures, boundary rules, and
singularity-adapted volume rules.

Two domain shapes are supported:

* ``Ball`` in N = 2 or 3 (constants work for any N >= 2, quadrature only for
  N in {2, 3});
* ``StarShaped2D``, a planar region bounded by a smooth positive radial
  graph r(theta) about a center, kept as the one non-ball shape.

Volume rules come in a ``regular`` mode (polar rule about the domain center)
and a ``polar-centered`` mode about an arbitrary interior target whose
radial Jacobian rho^(N-1) cancels kernel singularities rho^kappa at the
target; ``kappa`` defaults to 1-N, the strongest integrable power.  The
composite builder additionally punches disjoint ball-shaped holes around
secondary singular points and covers each hole with its own polar block, so
integrands that are singular both at the target and at field-specific points
stay in the rule's accuracy class.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import roots_jacobi

from .errors import (
    BudgetError,
    DimensionError,
    ParameterError,
    PlacementError,
    RangeError,
)

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

#: Relative tolerance (times the domain diameter) for boundary classification.
BOUNDARY_TOL = 1e-12

#: Hard cap on the escalated resolution parameter of any single rule.
ORDER_CAP = 4096

#: Default cap on the node count of a single constructed rule; the
#: LAYERPOT_MAX_NODES environment variable overrides it.
DEFAULT_MAX_NODES = 20_000_000


def max_nodes_budget() -> int:
    raw = os.environ.get("LAYERPOT_MAX_NODES")
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        budget = int(raw)
    except ValueError as exc:
        raise ParameterError(f"LAYERPOT_MAX_NODES must be an integer, got {raw!r}") from exc
    if budget <= 0:
        raise ParameterError("LAYERPOT_MAX_NODES must be positive")
    return budget


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Validate and return a point as a 1-D float array of length N >= 2."""
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.size < 2:
        raise DimensionError(f"points live in R^N with N >= 2, got {x!r}")
    if dim is not None and p.size != dim:
        raise DimensionError(f"expected a point of dimension {dim}, got dimension {p.size}")
    if not np.all(np.isfinite(p)):
        raise ParameterError(f"point coordinates must be finite, got {x!r}")
    return p


# ---------------------------------------------------------------------------
# 1-D node helpers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def gauss_legendre_01(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=1024)
def _gauss_jacobi_cached(n: int, beta_key: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_jacobi(n, 0.0, beta_key)
    nodes = (x + 1.0) / 2.0
    weights = w / 2.0 ** (beta_key + 1.0)
    return nodes, weights


def gauss_jacobi_01(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights integrating f against the weight rho^beta on [0, 1].

    beta may be any real > -1; beta = 0 reduces to Gauss-Legendre.  The rule
    is exact for f polynomial of degree <= 2n - 1.
    """
    if beta <= -1.0:
        raise ParameterError(f"Jacobi weight exponent must exceed -1, got {beta}")
    if beta == 0.0:
        return gauss_legendre_01(n)
    return _gauss_jacobi_cached(n, round(float(beta), 12))


def _rotation_to(pole: np.ndarray) -> np.ndarray:
    """3x3 rotation taking e_z to the given unit vector."""
    u = pole / np.linalg.norm(pole)
    ez = np.array([0.0, 0.0, 1.0])
    c = float(u @ ez)
    if c > 1.0 - 1e-14:
        return np.eye(3)
    if c < -1.0 + 1e-14:
        return np.diag([1.0, -1.0, -1.0])
    v = np.cross(ez, u)
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


def circle_directions(n: int, phase: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """n equispaced unit vectors on the circle and their angular weights 2 pi / n."""
    theta = phase + 2.0 * math.pi * np.arange(n) / n
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    return dirs, np.full(n, 2.0 * math.pi / n)


def sphere_directions(order: int, pole=None) -> tuple[np.ndarray, np.ndarray]:
    """Product rule on the unit sphere: Gauss-Legendre in the polar angle
    (``order`` nodes, sin(theta) folded into the weights) times 2*order
    equispaced azimuths.  ``pole`` optionally rotates the rule so its axis
    points along the given vector, which keeps integrands with a peak or
    weak singularity along that axis zonal.
    """
    t, wt = gauss_legendre_01(order)
    theta = math.pi * t
    w_theta = math.pi * wt * np.sin(theta)
    n_az = 2 * order
    phi = 2.0 * math.pi * np.arange(n_az) / n_az
    w_phi = 2.0 * math.pi / n_az
    st, ct = np.sin(theta), np.cos(theta)
    dirs = np.empty((order * n_az, 3))
    dirs[:, 0] = np.outer(st, np.cos(phi)).ravel()
    dirs[:, 1] = np.outer(st, np.sin(phi)).ravel()
    dirs[:, 2] = np.repeat(ct, n_az)
    weights = np.repeat(w_theta * w_phi, n_az)
    if pole is not None:
        rot = _rotation_to(np.asarray(pole, dtype=float))
        dirs = dirs @ rot.T
    return dirs, weights


def angular_rule(dim: int, order: int, pole=None) -> tuple[np.ndarray, np.ndarray]:
    if dim == 2:
        return circle_directions(2 * order)
    if dim == 3:
        return sphere_directions(order, pole=pole)
    raise DimensionError(f"quadrature is implemented for N in {{2, 3}}, got N={dim}")


# ---------------------------------------------------------------------------
# Rule containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryQuadrature:
    """Nodes, positive weights, and outward unit normals discretizing the
    surface measure of a domain boundary."""

    nodes: np.ndarray
    weights: np.ndarray
    normals: np.ndarray
    order: int
    metadata: dict = field(default_factory=dict)

    def integrate(self, values) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))


@dataclass(frozen=True)
class VolumeQuadrature:
    """Nodes and weights discretizing the volume measure of a domain.

    ``mode`` is "regular" or "polar-centered"; in the latter case ``target``
    holds the rule center and no node coincides with it.
    """

    nodes: np.ndarray
    weights: np.ndarray
    mode: str
    order: int
    target: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def integrate(self, values) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------


class Domain:
    """Common interface of the supported shapes; see Ball and StarShaped2D."""

    dim: int
    center: np.ndarray

    #: Extra angular resolution factor for polar volume rules; non-circular
    #: boundaries put more harmonic content into the per-ray extents.
    angular_oversampling: int = 1

    # -- classification ----------------------------------------------------

    def boundary_distance(self, y) -> float:
        raise NotImplementedError

    def classify(self, y) -> str:
        y = as_point(y, self.dim)
        d = self.signed_boundary_distance(y)
        if abs(d) <= BOUNDARY_TOL * self.diameter:
            return BOUNDARY
        return INTERIOR if d < 0 else EXTERIOR

    def signed_boundary_distance(self, y) -> float:
        """Negative inside, positive outside, zero on the boundary."""
        raise NotImplementedError

    # -- measures ----------------------------------------------------------

    @property
    def surface_measure(self) -> float:
        raise NotImplementedError

    @property
    def volume_measure(self) -> float:
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    @property
    def inradius(self) -> float:
        raise NotImplementedError

    # -- geometry ----------------------------------------------------------

    def outward_normal(self, x) -> np.ndarray:
        raise NotImplementedError

    def ray_exit(self, origin: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        """Distance from an interior origin to the boundary along unit dirs."""
        raise NotImplementedError

    def ray_segments(self, origin: np.ndarray, dirs: np.ndarray):
        """Full interior coverage of each ray: first-exit lengths plus, for
        non-convex shapes, the re-entered intervals further out.

        Returns ``(t_first, extras)`` where ``t_first[i]`` is the first exit
        along ``dirs[i]`` and ``extras`` maps ray indices to lists of
        (enter, exit) intervals beyond the first segment (empty for balls).
        """
        return self.ray_exit(origin, dirs), {}

    def boundary_rule(self, order: int, pole=None) -> BoundaryQuadrature:
        raise NotImplementedError

    def min_resolving_order(self, distance: float) -> int:
        """Order needed for boundary-integral kernels peaked at this distance."""
        raise NotImplementedError

    def kernel_diagonal(self, z) -> float:
        """Limit of the double-layer kernel as the source approaches z on the
        boundary (2-D only; equals curvature / (4 pi))."""
        raise NotImplementedError


class Ball(Domain):
    """Open ball of given center and radius.

    Closed-form measures hold in any dimension; quadrature requires
    N in {2, 3}.
    """

    def __init__(self, center, radius: float):
        self.center = as_point(center)
        if not (radius > 0):
            raise ParameterError(f"radius must be positive, got {radius}")
        self.radius = float(radius)
        self.dim = self.center.size

    def __repr__(self):
        return f"Ball(center={self.center.tolist()}, radius={self.radius})"

    def signed_boundary_distance(self, y) -> float:
        y = as_point(y, self.dim)
        return float(np.linalg.norm(y - self.center) - self.radius)

    def boundary_distance(self, y) -> float:
        return abs(self.signed_boundary_distance(y))

    @property
    def surface_measure(self) -> float:
        from .kernel import sphere_area

        return sphere_area(self.dim) * self.radius ** (self.dim - 1)

    @property
    def volume_measure(self) -> float:
        from .kernel import sphere_area

        return sphere_area(self.dim) * self.radius**self.dim / self.dim

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    @property
    def inradius(self) -> float:
        return self.radius

    def contains(self, y) -> bool:
        return self.classify(y) == INTERIOR

    def outward_normal(self, x) -> np.ndarray:
        x = as_point(x, self.dim)
        v = x - self.center
        r = np.linalg.norm(v)
        if r < 1e-15:
            raise PlacementError("normal requested at the ball center")
        return v / r

    def ray_exit(self, origin, dirs) -> np.ndarray:
        origin = as_point(origin, self.dim)
        v = origin - self.center
        vv = float(v @ v)
        if vv >= self.radius**2:
            raise PlacementError("ray origin must lie strictly inside the ball")
        proj = dirs @ v
        return -proj + np.sqrt(proj**2 + (self.radius**2 - vv))

    def _check_quadrature_dim(self):
        if self.dim not in (2, 3):
            raise DimensionError(
                f"quadrature rules exist for N in {{2, 3}}; N={self.dim} is constants-only"
            )

    def boundary_rule(self, order: int, pole=None) -> BoundaryQuadrature:
        self._check_quadrature_dim()
        if order < 4:
            raise ParameterError(f"boundary rules need order >= 4, got {order}")
        if self.dim == 2:
            dirs, w_ang = circle_directions(order)
        else:
            dirs, w_ang = sphere_directions(order, pole=pole)
        nodes = self.center + self.radius * dirs
        weights = self.radius ** (self.dim - 1) * w_ang
        return BoundaryQuadrature(nodes=nodes, weights=weights, normals=dirs, order=order)

    def min_resolving_order(self, distance: float) -> int:
        # Trapezoid/product-rule error for a kernel peaked at distance d from
        # a circle/sphere of radius R decays like exp(-n d / R) in 2-D and
        # exp(-c n sqrt(d / R)) for the polar Gauss-Legendre factor in 3-D;
        # these floors push the residual below ~1e-10.
        if distance <= 0:
            return ORDER_CAP
        ratio = self.radius / distance
        if self.dim == 2:
            return int(math.ceil(24.0 * ratio))
        return int(math.ceil(14.0 * math.sqrt(ratio))) + 16

    def kernel_diagonal(self, z) -> float:
        from .kernel import sphere_area

        if self.dim != 2:
            raise DimensionError("kernel diagonal limit is used on curves (N=2) only")
        return 1.0 / (2.0 * sphere_area(2) * self.radius)


class StarShaped2D(Domain):
    """Planar domain bounded by x = center + r(theta) (cos theta, sin theta).

    ``radius_fn`` must be smooth, positive, and 2 pi periodic with two
    continuous derivatives.  Derivative callables are optional; missing ones
    are filled in by fourth-order central differences, accurate to ~1e-12
    for smooth profiles.
    """

    _FD_STEP = 1e-3
    angular_oversampling = 2

    def __init__(self, radius_fn, center=(0.0, 0.0), radius_d1=None, radius_d2=None):
        self.center = as_point(center, 2)
        self.dim = 2
        self.radius_fn = radius_fn
        self._d1 = radius_d1
        self._d2 = radius_d2
        grid = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
        r = self._r(grid)
        if np.any(r <= 0):
            raise ParameterError("radial function must be positive")
        self._r_max = float(np.max(r))
        self._r_min = float(np.min(r))
        # Spectral reference values for the measures (trapezoid on a periodic
        # smooth integrand converges faster than any power of the grid size).
        rp = self._rp(grid)
        self._surface = float(np.mean(np.sqrt(r**2 + rp**2)) * 2.0 * math.pi)
        self._volume = float(np.mean(r**2 / 2.0) * 2.0 * math.pi)
        self._bnd_cache = self.center + r[:, None] * np.column_stack([np.cos(grid), np.sin(grid)])

    def __repr__(self):
        return f"StarShaped2D(center={self.center.tolist()}, r_min={self._r_min:.3g}, r_max={self._r_max:.3g})"

    def _r(self, theta):
        return np.asarray(self.radius_fn(np.asarray(theta, dtype=float)), dtype=float)

    def _rp(self, theta):
        if self._d1 is not None:
            return np.asarray(self._d1(np.asarray(theta, dtype=float)), dtype=float)
        h = self._FD_STEP
        t = np.asarray(theta, dtype=float)
        return (-self._r(t + 2 * h) + 8 * self._r(t + h) - 8 * self._r(t - h) + self._r(t - 2 * h)) / (12 * h)

    def _rpp(self, theta):
        if self._d2 is not None:
            return np.asarray(self._d2(np.asarray(theta, dtype=float)), dtype=float)
        h = self._FD_STEP
        t = np.asarray(theta, dtype=float)
        return (
            -self._r(t + 2 * h) + 16 * self._r(t + h) - 30 * self._r(t) + 16 * self._r(t - h) - self._r(t - 2 * h)
        ) / (12 * h**2)

    def signed_boundary_distance(self, y) -> float:
        y = as_point(y, 2)
        v = y - self.center
        rho = float(np.linalg.norm(v))
        if rho < 1e-15:
            return -self._r_min
        theta = math.atan2(v[1], v[0])
        return rho - float(self._r(theta))

    def boundary_distance(self, y) -> float:
        y = as_point(y, 2)
        return float(np.min(np.linalg.norm(self._bnd_cache - y, axis=1)))

    @property
    def surface_measure(self) -> float:
        return self._surface

    @property
    def volume_measure(self) -> float:
        return self._volume

    @property
    def diameter(self) -> float:
        return 2.0 * self._r_max

    @property
    def inradius(self) -> float:
        return self._r_min

    def contains(self, y) -> bool:
        return self.classify(y) == INTERIOR

    def boundary_point(self, theta: float) -> np.ndarray:
        r = float(self._r(theta))
        return self.center + r * np.array([math.cos(theta), math.sin(theta)])

    def outward_normal(self, x) -> np.ndarray:
        x = as_point(x, 2)
        v = x - self.center
        theta = math.atan2(v[1], v[0])
        r = float(self._r(theta))
        rp = float(self._rp(theta))
        ct, st = math.cos(theta), math.sin(theta)
        nu = np.array([r * ct + rp * st, r * st - rp * ct])
        return nu / np.linalg.norm(nu)

    def curvature(self, theta: float) -> float:
        r = float(self._r(theta))
        rp = float(self._rp(theta))
        rpp = float(self._rpp(theta))
        return (r**2 + 2 * rp**2 - r * rpp) / (r**2 + rp**2) ** 1.5

    def kernel_diagonal(self, z) -> float:
        from .kernel import sphere_area

        z = as_point(z, 2)
        v = z - self.center
        theta = math.atan2(v[1], v[0])
        return self.curvature(theta) / (2.0 * sphere_area(2))

    def boundary_rule(self, order: int, pole=None) -> BoundaryQuadrature:
        if order < 4:
            raise ParameterError(f"boundary rules need order >= 4, got {order}")
        theta = 2.0 * math.pi * np.arange(order) / order
        r = self._r(theta)
        rp = self._rp(theta)
        ct, st = np.cos(theta), np.sin(theta)
        nodes = self.center + r[:, None] * np.column_stack([ct, st])
        weights = (2.0 * math.pi / order) * np.sqrt(r**2 + rp**2)
        normals = np.column_stack([r * ct + rp * st, r * st - rp * ct])
        normals /= np.linalg.norm(normals, axis=1)[:, None]
        return BoundaryQuadrature(nodes=nodes, weights=weights, normals=normals, order=order, metadata={"theta": theta})

    def ray_exit(self, origin, dirs) -> np.ndarray:
        origin = as_point(origin, 2)
        if self.classify(origin) != INTERIOR:
            raise PlacementError("ray origin must lie strictly inside the domain")
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        out = np.empty(len(dirs))
        step = max(self._r_min / 4.0, 1e-3 * self._r_max)

        def g(t, d):
            p = origin + t * d
            return self.signed_boundary_distance(p)

        for i, d in enumerate(dirs):
            t_lo, t_hi = 0.0, step
            while g(t_hi, d) < 0.0:
                t_lo = t_hi
                t_hi += step
                if t_hi > 4.0 * self._r_max:
                    raise RangeError("ray failed to exit the domain; is it star-shaped about the origin?")
            out[i] = brentq(g, t_lo, t_hi, args=(d,), xtol=1e-14, rtol=1e-15)
        return out

    def min_resolving_order(self, distance: float) -> int:
        if distance <= 0:
            return ORDER_CAP
        return int(math.ceil(30.0 * self._r_max / distance))

    def ray_segments(self, origin, dirs):
        """All interior intervals along each ray, found on a marching grid
        with vectorized bisection refinement.

        Handles concave boundary sections (rays that exit and re-enter).
        Re-entered slivers shorter than the marching step can be missed;
        the step is a small fraction of the inner radius.
        """
        origin = as_point(origin, 2)
        if self.classify(origin) != INTERIOR:
            raise PlacementError("ray origin must lie strictly inside the domain")
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        n_rays = len(dirs)
        t_max = float(np.linalg.norm(origin - self.center)) + 2.05 * self._r_max
        m = 512
        grid = np.linspace(0.0, t_max, m)
        pts = origin[None, None, :] + grid[None, :, None] * dirs[:, None, :]
        rel = pts - self.center
        rho = np.linalg.norm(rel, axis=2)
        theta = np.arctan2(rel[..., 1], rel[..., 0])
        g = rho - self._r(theta)
        inside = g < 0.0
        inside[:, 0] = True
        flips = inside[:, :-1] != inside[:, 1:]
        ray_idx, grid_idx = np.nonzero(flips)
        # refine every crossing simultaneously by bisection
        lo = grid[grid_idx].copy()
        hi = grid[grid_idx + 1].copy()
        d_sub = dirs[ray_idx]
        g_lo = g[ray_idx, grid_idx]
        for _ in range(48):
            mid = 0.5 * (lo + hi)
            p = origin[None, :] + mid[:, None] * d_sub
            relm = p - self.center
            gm = np.linalg.norm(relm, axis=1) - self._r(np.arctan2(relm[:, 1], relm[:, 0]))
            same = (gm < 0.0) == (g_lo < 0.0)
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        crossings = 0.5 * (lo + hi)
        t_first = np.full(n_rays, np.nan)
        extras: dict[int, list[tuple[float, float]]] = {}
        for i in range(n_rays):
            cs = np.sort(crossings[ray_idx == i])
            if cs.size == 0:
                raise RangeError("ray failed to exit the domain")
            t_first[i] = cs[0]
            if cs.size > 2:
                pairs = cs[1:]
                segs = [
                    (float(pairs[k]), float(pairs[k + 1]))
                    for k in range(0, 2 * ((pairs.size) // 2), 2)
                ]
                if segs:
                    extras[i] = segs
        return t_first, extras


# ---------------------------------------------------------------------------
# Escalation policy
# ---------------------------------------------------------------------------


def escalated_order(domain: Domain, order: int, y) -> tuple[int, str | None]:
    """Double the rule order until the target's boundary distance is resolved.

    Returns the effective order and a warning string when the requested
    order was insufficient (or when the cap/budget truncated escalation).
    The caller decides what to do with the warning; accuracy loss is
    reported, never silent.
    """
    d = domain.boundary_distance(y)
    needed = domain.min_resolving_order(d)
    if needed <= order:
        return order, None
    eff = order
    while eff < needed and eff < ORDER_CAP:
        eff *= 2
    eff = min(eff, ORDER_CAP)
    budget = max_nodes_budget()
    nodes = eff if domain.dim == 2 else 2 * eff * eff
    while nodes > budget and eff > order:
        eff //= 2
        nodes = eff if domain.dim == 2 else 2 * eff * eff
    note = f"near-boundary target (distance {d:.3g}): order escalated {order} -> {eff}"
    if eff < needed:
        note += f"; still below the resolving order {needed} (cap/budget)"
    return eff, note


# ---------------------------------------------------------------------------
# Volume rules
# ---------------------------------------------------------------------------


def _radial_block(t: np.ndarray, n_r: int, dim: int, kappa: float, log_kernel: bool):
    """Per-ray radial nodes/weights on [0, t] against the measure rho^(N-1).

    The returned weights absorb the volume Jacobian, so summing
    ``w * F(rho)`` approximates the radial integral of F rho^(N-1) for
    integrands F behaving like rho^kappa (or log rho when ``log_kernel``)
    times a smooth factor near 0.
    """
    if log_kernel:
        u, w = gauss_legendre_01(n_r)
        rho = t[:, None] * u[None, :] ** 2
        weights = 2.0 * t[:, None] ** dim * u[None, :] ** (2 * dim - 1) * w[None, :]
        return rho, weights
    beta = dim - 1 + kappa
    if beta <= -1.0:
        raise ParameterError(f"kernel power {kappa} is not integrable in dimension {dim}")
    u, w = gauss_jacobi_01(n_r, beta)
    rho = t[:, None] * u[None, :]
    weights = t[:, None] ** (beta + 1.0) * np.broadcast_to(w, rho.shape).copy()
    if kappa != 0.0:
        weights *= rho ** (-kappa)
    return rho, weights


def _panel_block(a: float, b: float, n_r: int, dim: int):
    """Radial Gauss-Legendre panel on [a, b] with the rho^(N-1) Jacobian folded in."""
    u, w = gauss_legendre_01(n_r)
    rho = a + (b - a) * u
    weights = (b - a) * w * rho ** (dim - 1)
    return rho, weights


def _subtract_intervals(segments, cuts):
    """Set difference of interval lists: segments minus the (merged) cuts."""
    if not cuts:
        return list(segments)
    cuts = sorted(cuts)
    merged = [list(cuts[0])]
    for lo, hi in cuts[1:]:
        if lo <= merged[-1][1] + 1e-15:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    out = []
    for a, b in segments:
        pieces = [(a, b)]
        for lo, hi in merged:
            nxt = []
            for pa, pb in pieces:
                if hi <= pa or lo >= pb:
                    nxt.append((pa, pb))
                    continue
                if lo > pa:
                    nxt.append((pa, lo))
                if hi < pb:
                    nxt.append((hi, pb))
            pieces = nxt
        out.extend(pieces)
    return [(a, b) for a, b in out if b - a > 1e-15]


def _polar_blocks(center, dirs, w_ang, t, extras, n_r, dim, kappa, log_kernel, holes):
    """Assemble node/weight arrays for a polar rule about ``center``.

    ``t`` holds the first-exit length per direction and ``extras`` the
    re-entered intervals of non-convex shapes; ``holes`` (center, radius)
    are excised from every covered interval.  The interval touching the
    rule center gets the singularity-adapted radial block, every other
    interval a plain Gauss panel with the volume Jacobian folded in.
    """
    nodes_list, weights_list = [], []
    hole_ivs = [[] for _ in range(len(dirs))]
    for hc, hr in holes:
        v = hc - center
        proj = dirs @ v
        disc = proj**2 - float(v @ v) + hr**2
        mask = disc > 0.0
        if not np.any(mask):
            continue
        sq = np.sqrt(disc[mask])
        lo = np.maximum(proj[mask] - sq, 0.0)
        hi = proj[mask] + sq
        for k, i in enumerate(np.nonzero(mask)[0]):
            if hi[k] > lo[k] + 1e-15:
                hole_ivs[i].append((float(lo[k]), float(hi[k])))

    slow = np.zeros(len(dirs), dtype=bool)
    for i in range(len(dirs)):
        if hole_ivs[i] or i in extras:
            slow[i] = True

    fast = ~slow
    if np.any(fast):
        rho, wr = _radial_block(t[fast], n_r, dim, kappa, log_kernel)
        nodes = center + rho[..., None] * dirs[fast][:, None, :]
        weights = wr * w_ang[fast][:, None]
        nodes_list.append(nodes.reshape(-1, dim))
        weights_list.append(weights.reshape(-1))

    for i in np.nonzero(slow)[0]:
        covered = [(0.0, float(t[i]))] + [tuple(seg) for seg in extras.get(i, [])]
        for a, b in _subtract_intervals(covered, hole_ivs[i]):
            if a == 0.0:
                rho, wr = _radial_block(np.array([b]), n_r, dim, kappa, log_kernel)
                rho, wr = rho[0], wr[0]
            else:
                rho, wr = _panel_block(a, b, n_r, dim)
            nodes_list.append(center + rho[:, None] * dirs[i][None, :])
            weights_list.append(wr * w_ang[i])

    return nodes_list, weights_list


def composite_volume_rule(
    domain: Domain,
    order: int,
    center,
    kernel_power: float | None = None,
    log_kernel: bool = False,
    holes=(),
) -> VolumeQuadrature:
    """Polar rule about ``center`` covering the whole domain, with optional
    hole excision and per-hole polar blocks.

    ``holes`` is a sequence of (point, radius, power) triples: each ball is
    removed from the main rule's rays and re-integrated by a polar block of
    its own, whose radial rule is matched to integrands behaving like
    rho^power about the hole center.
    """
    if domain.dim not in (2, 3):
        raise DimensionError(f"quadrature rules exist for N in {{2, 3}}, got N={domain.dim}")
    if order < 4:
        raise ParameterError(f"volume rules need order >= 4, got {order}")
    center = as_point(center, domain.dim)
    kappa = 0.0 if kernel_power is None else float(kernel_power)
    dirs, w_ang = angular_rule(domain.dim, order * domain.angular_oversampling)
    t, extras = domain.ray_segments(center, dirs)
    hole_geoms = [(as_point(hc, domain.dim), float(hr)) for hc, hr, _ in holes]
    nodes_list, weights_list = _polar_blocks(
        center, dirs, w_ang, t, extras, order, domain.dim, kappa, log_kernel, hole_geoms
    )
    for (hc, hr, hp) in holes:
        hc = as_point(hc, domain.dim)
        hdirs, hw_ang = angular_rule(domain.dim, order)
        ht = np.full(len(hdirs), float(hr))
        rho, wr = _radial_block(ht, order, domain.dim, float(hp), False)
        nodes = hc + rho[..., None] * hdirs[:, None, :]
        weights = wr * hw_ang[:, None]
        nodes_list.append(nodes.reshape(-1, domain.dim))
        weights_list.append(weights.reshape(-1))
    nodes = np.concatenate(nodes_list, axis=0)
    weights = np.concatenate(weights_list, axis=0)
    if nodes.shape[0] > max_nodes_budget():
        raise BudgetError(
            f"volume rule would use {nodes.shape[0]} nodes, over the budget "
            f"{max_nodes_budget()}; lower the order or raise LAYERPOT_MAX_NODES"
        )
    return VolumeQuadrature(
        nodes=nodes,
        weights=weights,
        mode="polar-centered",
        order=order,
        target=center,
        metadata={"kernel_power": kappa, "log_kernel": log_kernel, "holes": len(holes)},
    )


def volume_rule(domain: Domain, order: int, mode: str = "regular", target=None, kernel_power: float | None = None) -> VolumeQuadrature:
    """Volume rule over the domain.

    ``regular`` integrates smooth functions with a polar rule about the
    domain center.  ``polar-centered`` centers the rule at ``target`` (which
    must be strictly interior) and adapts the radial nodes so integrands
    behaving like |x - target|^kernel_power (default 1-N) are integrated at
    the rule's full accuracy; no node is placed at the target.
    """
    if mode == "regular":
        rule = composite_volume_rule(domain, order, domain.center, kernel_power=0.0)
        return VolumeQuadrature(
            nodes=rule.nodes, weights=rule.weights, mode="regular", order=order, target=None
        )
    if mode != "polar-centered":
        raise ParameterError(f"unknown volume rule mode {mode!r}")
    if target is None:
        raise ParameterError("polar-centered mode requires a target point")
    target = as_point(target, domain.dim)
    cls = domain.classify(target)
    if cls == BOUNDARY:
        raise PlacementError("polar-centered target lies on the boundary")
    if cls == EXTERIOR:
        raise PlacementError("polar-centered target lies outside the domain")
    kappa = float(1 - domain.dim) if kernel_power is None else float(kernel_power)
    return composite_volume_rule(domain, order, target, kernel_power=kappa)


def boundary_rule(domain: Domain, order: int, pole=None) -> BoundaryQuadrature:
    """Boundary rule of the domain (equispaced on curves, Gauss-Legendre in
    the polar angle times equispaced azimuth on spheres)."""
    return domain.boundary_rule(order, pole=pole)


def closest_boundary_approach(domain: Domain, y0, distances) -> list[np.ndarray]:
    """Interior points y0 - d * nu(y0) for each offset d.

    Each offset must keep the point strictly inside the domain; offsets are
    additionally capped at the inradius as a safeguard.
    """
    y0 = as_point(y0, domain.dim)
    if domain.classify(y0) != BOUNDARY:
        raise PlacementError(f"{y0.tolist()} is not on the boundary")
    nu = domain.outward_normal(y0)
    points = []
    for d in np.atleast_1d(np.asarray(distances, dtype=float)):
        if not (0.0 < d < domain.inradius):
            raise RangeError(f"offset {d} outside (0, inradius={domain.inradius:.6g})")
        p = y0 - d * nu
        if domain.classify(p) != INTERIOR:
            raise RangeError(f"offset {d} leaves the domain at {p.tolist()}")
        points.append(p)
    return points
