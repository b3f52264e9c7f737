"""Suite execution: deterministic probe generation, concurrent dispatch of
independent checks, and report-row assembly.

Rows are produced concurrently (every check is pure) and then sorted by
(identity, field, point, order), so identical configurations and seeds
yield byte-identical reports.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..bounds import (
    moment_integral,
    moment_integral_closed_form,
    ostrowski_bound_ball,
    ostrowski_bound_general,
    sharp_ball_constant,
)
from ..errors import ConfigError
from ..fields import LebesgueExponent, extremal_field
from ..geometry import Ball
from ..kernel import sphere_area
from ..potentials import double_layer, jump_relation_check
from ..representations import (
    check_ball_corollaries,
    check_c2_exterior,
    check_f1,
    check_f2_f3,
    check_fig,
    check_green_riemann,
    check_grr,
    check_rp,
    default_tolerance,
)
from .config import SuiteConfig
from .report import Row, format_point

GAUSS_TOL = 1e-8
JUMP_TOL = 1e-4

_NEEDS_LAPLACIAN = ("GRR", "GREEN_RIEMANN_INTERIOR", "GREEN_RIEMANN_EXTERIOR", "GREEN_RIEMANN_BOUNDARY")


def generate_probes(cfg: SuiteConfig):
    """Seeded interior/boundary/exterior probe points for the suite domain."""
    rng = np.random.default_rng(cfg.seed)
    domain = cfg.domain
    n = domain.dim
    interior, boundary, exterior = [], [], []
    for _ in range(cfg.probe_count):
        d = rng.normal(size=n)
        d /= np.linalg.norm(d)
        u = rng.uniform() ** (1.0 / n)
        if isinstance(domain, Ball):
            interior.append(domain.center + (1.0 - cfg.margin) * domain.radius * u * d)
        else:
            theta = math.atan2(d[1], d[0])
            interior.append(domain.center + (1.0 - cfg.margin) * float(domain._r(theta)) * u * d)
    for _ in range(max(cfg.probe_count, 1)):
        if isinstance(domain, Ball):
            d = rng.normal(size=n)
            d /= np.linalg.norm(d)
            boundary.append(domain.center + domain.radius * d)
        else:
            boundary.append(domain.boundary_point(rng.uniform(0.0, 2.0 * math.pi)))
    for _ in range(max(cfg.exterior_count, 1)):
        d = rng.normal(size=n)
        d /= np.linalg.norm(d)
        scale = rng.uniform(1.0 + cfg.margin, 2.0 + cfg.margin)
        if isinstance(domain, Ball):
            exterior.append(domain.center + scale * domain.radius * d)
        else:
            theta = math.atan2(d[1], d[0])
            exterior.append(domain.center + scale * float(domain._r(theta)) * d)
    return interior, boundary, exterior


def _tolerance(cfg: SuiteConfig, identity: str, field) -> float:
    if identity in cfg.tolerances:
        return cfg.tolerances[identity]
    if identity == "GAUSS":
        return GAUSS_TOL
    if identity == "JUMP":
        return JUMP_TOL
    return default_tolerance(field, identity)


def _row(cfg, report, field_name) -> Row:
    return Row(
        suite=cfg.suite,
        identity=report.identity,
        field=field_name,
        dim=cfg.domain.dim,
        point=format_point(report.points[0] if report.points else None),
        order=report.order,
        lhs=report.lhs,
        rhs=report.rhs,
        residual=report.residual,
        tolerance=report.tolerance,
        passed=report.passed,
    )


def _verify_tasks(cfg: SuiteConfig):
    """Yield zero-argument callables, each returning a list of Rows."""
    domain = cfg.domain
    interior, boundary, exterior = generate_probes(cfg)
    is_ball = isinstance(domain, Ball)

    for identity in cfg.identities:
        if identity in _NEEDS_LAPLACIAN:
            missing = [f.name for f in cfg.fields if not f.has_laplacian]
            if missing:
                raise ConfigError(f"identity {identity} needs a Laplacian; missing for: {missing}")
        if identity in ("MAT", "COM", "CERC", "REP2", "REP3") and not is_ball:
            raise ConfigError(f"identity {identity} is defined on balls; the domain is a star shape")

    def gauss_task(order):
        def run():
            rows = []
            tol = _tolerance(cfg, "GAUSS", cfg.fields[0])
            for point, expect in ((interior[0], 1.0), (boundary[0], 0.5), (exterior[0], 0.0)):
                val = double_layer(1.0, domain, point, order).value
                rows.append(
                    Row(cfg.suite, "GAUSS", "constant(1)", domain.dim, format_point(point), order,
                        val, expect, abs(val - expect), tol, abs(val - expect) <= tol)
                )
            return rows

        return run

    def jump_task(field, y0, order):
        def run():
            tol = _tolerance(cfg, "JUMP", field)
            res = jump_relation_check(field, domain, y0, cfg.jump_distances, order)
            lhs = res.interior_limit_estimate - res.exterior_limit_estimate
            rhs = field.evaluate(y0)
            return [
                Row(cfg.suite, "JUMP", field.name, domain.dim, format_point(y0), order,
                    lhs, rhs, abs(lhs - rhs), tol, abs(lhs - rhs) <= tol)
            ]

        return run

    def report_task(identity, field, fn):
        def run():
            rep = fn()
            reps = rep if isinstance(rep, (list, tuple)) else [rep]
            return [_row(cfg, r, field.name) for r in reps]

        return run

    for order in cfg.orders:
        for identity in cfg.identities:
            if identity == "GAUSS":
                yield gauss_task(order)
                continue
            for field in cfg.fields:
                tol = _tolerance(cfg, identity, field)
                if identity == "JUMP":
                    for y0 in boundary:
                        yield jump_task(field, y0, order)
                elif identity == "F1":
                    for y in interior:
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol: check_f1(f, domain, y, o, t))
                elif identity == "FIG":
                    for y in list(interior) + list(exterior):
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol: check_fig(f, domain, y, o, t))
                elif identity in ("MAT", "COM", "CERC"):
                    for y in interior:
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol, w=identity: check_ball_corollaries(f, domain, y, o, w, t))
                elif identity in ("REP2", "REP3"):
                    yield report_task(identity, field, lambda f=field, o=order, t=tol, w=identity: check_ball_corollaries(f, domain, None, o, w, t))
                elif identity in ("RP0", "RP1"):
                    z = exterior[0] if identity == "RP0" else None
                    for y in interior:
                        yield report_task(identity, field, lambda f=field, y=y, z=z, o=order, t=tol, w=identity: check_rp(f, domain, y, z, o, w, t))
                elif identity == "C2_EXTERIOR":
                    for y in exterior:
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol: check_c2_exterior(f, domain, y, math.inf, o, t))
                elif identity in ("F2", "F3"):
                    # one evaluation yields both integrated identities; run it
                    # once (first requested name, first order) and keep only
                    # the rows that were asked for
                    wanted = tuple(i for i in ("F2", "F3") if i in cfg.identities)
                    if identity == wanted[0] and order == cfg.orders[0]:

                        def pair_task(f=field, t=tol, keep=wanted):
                            reps = check_f2_f3(
                                f, domain, cfg.order_outer, cfg.order_inner,
                                zeta_mode=cfg.zeta_mode, tolerance=t,
                            )
                            return [_row(cfg, r, f.name) for r in reps if r.identity in keep]

                        yield pair_task
                elif identity == "GRR":
                    for y in list(interior) + list(exterior):
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol: check_grr(f, domain, y, o, t))
                elif identity == "GREEN_RIEMANN_INTERIOR":
                    for y in interior:
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol: check_green_riemann(f, domain, y, o, t))
                elif identity == "GREEN_RIEMANN_EXTERIOR":
                    for y in exterior:
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol: check_green_riemann(f, domain, y, o, t))
                elif identity == "GREEN_RIEMANN_BOUNDARY":
                    for y in boundary:
                        yield report_task(identity, field, lambda f=field, y=y, o=order, t=tol: check_green_riemann(f, domain, y, o, t))
                else:
                    raise ConfigError(f"identity {identity} is not runnable by verify")


def _run_tasks(tasks, max_workers: int = 8):
    rows = []
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        for result in pool.map(lambda t: t(), tasks):
            rows.extend(result)
    return sorted(rows, key=Row.sort_key)


def run_verify(cfg: SuiteConfig):
    """Run the selected identity checks; exit code 0 iff every row passes."""
    rows = _run_tasks(list(_verify_tasks(cfg)))
    exit_code = 0 if all(r.passed for r in rows) else 1
    return rows, exit_code


def run_converge(cfg: SuiteConfig):
    """Residual-versus-order table plus a fitted log-log rate per identity."""
    if len(cfg.orders) < 3:
        raise ConfigError("convergence studies need at least 3 orders")
    rows = _run_tasks(list(_verify_tasks(cfg)))
    out = list(rows)
    for identity in cfg.identities:
        for field in cfg.fields:
            pts = sorted({r.point for r in rows if r.identity == identity and r.field == field.name})
            for pt in pts:
                series = sorted(
                    [(r.order, r.residual) for r in rows if r.identity == identity and r.field == field.name and r.point == pt]
                )
                if len(series) < 3:
                    continue
                orders = np.array([s[0] for s in series], dtype=float)
                resid = np.maximum(np.array([s[1] for s in series]), 1e-16)
                slope = float(np.polyfit(np.log(orders), np.log(resid), 1)[0])
                out.append(
                    Row(cfg.suite, identity, field.name, cfg.domain.dim, f"rate[{pt}]", 0,
                        slope, 0.0, abs(slope), 0.0, True)
                )
    return sorted(out, key=Row.sort_key), 0


def run_table(cfg: SuiteConfig):
    """Constants table: sphere areas, kernel moments, sharp ball constants."""
    rows = []
    for n in cfg.table_dims:
        lhs = sphere_area(n)
        rhs = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
        rows.append(
            Row(cfg.suite, "OMEGA_N", "-", n, "-", 0, lhs, rhs, abs(lhs - rhs), 1e-13 * lhs, abs(lhs - rhs) <= 1e-13 * lhs)
        )
        for p in cfg.table_exponents:
            exponent = LebesgueExponent.of(p)
            if not exponent.value > n:
                continue
            for radius in cfg.table_radii:
                q = exponent.conjugate
                closed = moment_integral_closed_form(n, radius, q)
                if n in (2, 3):
                    quad = moment_integral(Ball([0.0] * n, radius), [0.0] * n, q, order=64)
                else:
                    quad = closed
                tol = 1e-8 * max(1.0, closed)
                rows.append(
                    Row(cfg.suite, "MOMENT", f"p={p:g}", n, f"R={radius:g}", 64,
                        closed, quad, abs(closed - quad), tol, abs(closed - quad) <= tol)
                )
                const = sharp_ball_constant(n, radius, p)
                alt = closed ** (1.0 / q) / sphere_area(n)
                tol = 1e-12 * max(1.0, const)
                rows.append(
                    Row(cfg.suite, "SHARP_CONSTANT", f"p={p:g}", n, f"R={radius:g}", 0,
                        const, alt, abs(const - alt), tol, abs(const - alt) <= tol)
                )
    exit_code = 0 if all(r.passed for r in rows) else 1
    return sorted(rows, key=Row.sort_key), exit_code


def run_bound(cfg: SuiteConfig):
    """Deviation-bound rows per (field, point, exponent), plus sharpness rows."""
    domain = cfg.domain
    interior, _, _ = generate_probes(cfg)
    is_ball = isinstance(domain, Ball)
    rows = []
    order = max(cfg.orders)
    for p in cfg.bound_exponents:
        exponent = LebesgueExponent.of(p)
        if not exponent.value > domain.dim:
            raise ConfigError(f"bound exponents need p > N = {domain.dim}, got {p}")
        for field in cfg.fields:
            if field.sup_gradient is None and exponent.is_infinite and not field.is_smooth:
                raise ConfigError(
                    f"field {field.name} has an unbounded gradient; use a finite exponent"
                )
            label = f"{field.name} p={p:g}"
            for y in interior:
                rep = ostrowski_bound_general(field, domain, y, p, order)
                slack = 1e-6 * max(1.0, rep.bound)
                rows.append(
                    Row(cfg.suite, "BOUND_GENERAL", label, domain.dim, format_point(y), order,
                        rep.deviation, rep.bound, max(0.0, rep.deviation - rep.bound), slack,
                        rep.deviation <= rep.bound + slack)
                )
            if is_ball:
                rep = ostrowski_bound_ball(field, domain, p, order)
                slack = 1e-6 * max(1.0, rep.bound)
                rows.append(
                    Row(cfg.suite, "BOUND_BALL", label, domain.dim, format_point(domain.center), order,
                        rep.deviation, rep.bound, max(0.0, rep.deviation - rep.bound), slack,
                        rep.deviation <= rep.bound + slack)
                )
        if cfg.bound_include_extremal and is_ball:
            witness = extremal_field(p, domain.center)
            for kind, rep in (
                ("SHARPNESS_GENERAL", ostrowski_bound_general(witness, domain, domain.center, p, order)),
                ("SHARPNESS_BALL", ostrowski_bound_ball(witness, domain, p, order)),
            ):
                rows.append(
                    Row(cfg.suite, kind, f"{witness.name} p={p:g}", domain.dim, format_point(domain.center), order,
                        rep.deviation, rep.bound, abs(rep.ratio - 1.0), 1e-3, abs(rep.ratio - 1.0) <= 1e-3)
                )
    exit_code = 0 if all(r.passed for r in rows) else 1
    return sorted(rows, key=Row.sort_key), exit_code
