"""High-rate asymptotics: the Zador-type constant, convergence tables,
interval diagnostics and the equal-moment counterexample fixture."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .config import SolverConfig
from .distribution import DensityModel, Order, mass, pdf_at
from .errors import (EmptyCell, GershoqError, InfiniteZadorConstant,
                     InvalidInterval, InvalidParameter, QuadratureFailure)
from .gersho import Quantizer, build_gersho
from .lloyd import run_lloyd
from .moments import partial_moment

_DEFAULT = SolverConfig()
INF = math.inf


def q_factor(r: float) -> float:
    """Q(r) = 2^(-r) / (1+r), the high-rate constant of a unit uniform cell."""
    return 2.0 ** (-r) / (1.0 + r)


def zador_constant(model: DensityModel, order: Order,
                   cfg: SolverConfig = _DEFAULT) -> float:
    """C0 = Q(r) * (integral of h^(1/(1+r)))^(1+r), the limit of n^r D_n.

    Raises InfiniteZadorConstant when the density integral diverges
    (possible for power tails with exponent <= 1+r).
    """
    r = order.r
    p = 1.0 / (1.0 + r)
    if model.family == "power_tail" and model.params[0] * p <= 1.0:
        raise InfiniteZadorConstant(
            f"integral of h^{p:.4g} diverges for tail exponent {model.params[0]}")
    code, params = model.kspec
    val, err = _kernels.hpow(code, params, -INF, INF, p, cfg.quad_rel_tol,
                             cfg.quad_abs_tol, cfg.max_quad_depth)
    if not math.isfinite(val):
        raise InfiniteZadorConstant("density integral diverged")
    if err > 50.0 * (cfg.quad_abs_tol + cfg.quad_rel_tol * abs(val)):
        raise QuadratureFailure("zador integral did not reach tolerance",
                                achieved=err)
    return q_factor(r) * val ** (1.0 + r)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    distortion: float
    scaled: float  # n^r * distortion
    ratio: float   # scaled / C0 (nan when C0 is infinite or the level failed)
    rate: float = math.nan  # |C0 - scaled| * n / log(n), optional column
    error: str = ""

    @property
    def failed(self) -> bool:
        return bool(self.error)


def convergence_table(model: DensityModel, order: Order, levels,
                      method: str = "gersho", cfg: SolverConfig = _DEFAULT,
                      include_rate: bool = False):
    """One ConvergenceRow per level; failed levels are marked, not fatal.

    Returns (c0, rows); c0 is +inf when the Zador integral diverges (rows
    then carry only the scaled column).
    """
    levels = [int(n) for n in levels]
    if not levels or any(n < 1 for n in levels):
        raise InvalidParameter("levels must be a nonempty list of ints >= 1")
    key = method.strip().lower()
    if key not in ("gersho", "lloyd"):
        raise InvalidParameter(f"method must be 'gersho' or 'lloyd', got {method!r}")
    try:
        c0 = zador_constant(model, order, cfg)
    except InfiniteZadorConstant:
        c0 = INF
    rows = []
    for n in levels:
        try:
            if key == "gersho":
                _q, report = build_gersho(model, n, order, cfg)
                d = report.distortion
            else:
                q, _iters = run_lloyd(model, n, order, "quantile_grid", cfg)
                d = sum(q.cell_moments)
        except GershoqError as exc:
            rows.append(ConvergenceRow(n, math.nan, math.nan, math.nan,
                                       math.nan, error=str(exc)))
            continue
        scaled = n ** order.r * d
        ratio = scaled / c0 if math.isfinite(c0) else math.nan
        rate = math.nan
        if include_rate and n >= 2 and math.isfinite(c0):
            rate = abs(c0 - scaled) * n / math.log(n)
        rows.append(ConvergenceRow(n, d, scaled, ratio, rate))
    return c0, rows


# -------------------------------------------------------------- diagnostics

@dataclass(frozen=True)
class DiagnosticsRow:
    n: int
    point_density: float   # n1/n, fraction of cells inside I
    error_density: float   # distortion share of I
    mass_deviation: float  # sup over inside cells of |n mu(cell) - h^(r/(1+r))(a) * Ih|
    g4_deviation: float    # sup over inside cells of |n^(1+r) m_i - C0|
    c0_finite: bool = True


def cell_census(q: Quantizer, interval, model: DensityModel = None):
    """(n1, n2): cells inside the compact interval I and cells disjoint from
    its interior. Cells are clipped to the support when a model is given
    (the unbounded edge cells then count by their support trace)."""
    u, v = float(interval[0]), float(interval[1])
    if u > v:
        raise InvalidInterval(f"census interval reversed: [{u}, {v}]")
    if not (math.isfinite(u) and math.isfinite(v)):
        raise InvalidParameter("census interval must be compact")
    slo = model.support_lo if model is not None else -INF
    shi = model.support_hi if model is not None else INF
    edges = (-INF,) + tuple(q.boundaries) + (INF,)
    n1 = n2 = 0
    for a, b in zip(edges, edges[1:]):
        lo, hi = max(a, slo), min(b, shi)
        if lo >= u and hi <= v:
            n1 += 1
        elif hi <= u or lo >= v:
            n2 += 1
    return n1, n2


def diagnostics(model: DensityModel, q: Quantizer, order: Order, interval,
                cfg: SolverConfig = _DEFAULT, c0: float = None) -> DiagnosticsRow:
    """Point/error/mass densities and the equal-moment deviation on a compact
    interval strictly inside the support. Supremum-style quantities over an
    empty inside-cell set are reported as 0."""
    u, v = float(interval[0]), float(interval[1])
    if u > v:
        raise InvalidInterval(f"diagnostics interval reversed: [{u}, {v}]")
    if not (math.isfinite(u) and math.isfinite(v)):
        raise InvalidParameter("diagnostics interval must be compact")
    if mass(model, u, v) <= 0.0:
        raise EmptyCell(f"interval [{u}, {v}] has no mass")
    r = order.r
    n = q.n
    if c0 is None:
        try:
            c0 = zador_constant(model, order, cfg)
        except InfiniteZadorConstant:
            c0 = INF
    c0_finite = math.isfinite(c0)

    n1, _n2 = cell_census(q, (u, v), model)
    slo, shi = model.support_lo, model.support_hi
    edges = (-INF,) + tuple(q.boundaries) + (INF,)

    total = 0.0
    inside_err = 0.0
    mass_dev = 0.0
    g4_dev = 0.0
    p = 1.0 / (1.0 + r)
    code, params = model.kspec
    ih, _err = _kernels.hpow(code, params, -INF, INF, p, cfg.quad_rel_tol,
                             cfg.quad_abs_tol, cfg.max_quad_depth)
    scaled_ref = c0 if c0_finite else n ** r * sum(q.cell_moments)
    for (a, b), cp, m in zip(zip(edges, edges[1:]), q.codepoints, q.cell_moments):
        cell_d = partial_moment(model, a, b, cp, order, cfg)
        total += cell_d
        lo, hi = max(a, slo), min(b, shi)
        if max(a, u) < min(b, v):
            inside_err += partial_moment(model, max(a, u), min(b, v), cp, order, cfg)
        if lo >= u and hi <= v:  # cell inside I
            mass_dev = max(mass_dev,
                           abs(n * mass(model, lo, hi)
                               - pdf_at(model, cp) ** (r * p) * ih))
            g4_dev = max(g4_dev, abs(n ** (1.0 + r) * m - scaled_ref))
    return DiagnosticsRow(n, n1 / n, inside_err / total, mass_dev, g4_dev,
                          c0_finite)


def counterexample_quantizer(n: int, eps: float, order: Order = None) -> Quantizer:
    """Uniform(0,1) fixture: first cell [0, eps/n), then n-1 equal cells.

    Asymptotically optimal (n^r D -> Q(r)) but the first cell's moment stays
    a fixed multiple away from the others, so the equal-moment property
    fails at every level. Codepoints sit at the cell centroids.
    """
    if int(n) != n or n < 2:
        raise InvalidParameter(f"fixture needs integer n >= 2, got {n}")
    if not 0.0 < eps < 1.0:
        raise InvalidParameter(f"fixture needs eps in (0, 1), got {eps}")
    n = int(n)
    order = order if order is not None else Order(2.0)
    r = order.r
    w1 = eps / n
    w2 = (1.0 - w1) / (n - 1)
    boundaries = tuple(w1 + i * w2 for i in range(n - 1))
    codepoints = (0.5 * w1,) + tuple(w1 + (i + 0.5) * w2 for i in range(n - 1))
    qr = q_factor(r)
    moments = (qr * w1 ** (1.0 + r),) + (qr * w2 ** (1.0 + r),) * (n - 1)
    return Quantizer(order, n, boundaries, codepoints, moments)


# --------------------------------------------------------------------- CSV

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_convergence_csv(rows, path, include_rate: bool = False,
                          include_ratio: bool = True):
    """`n,distortion,scaled,ratio[,rate]` with 17-digit reals, LF endings."""
    cols = ["n", "distortion", "scaled"]
    if include_ratio:
        cols.append("ratio")
    if include_rate:
        cols.append("rate")
    lines = [",".join(cols)]
    for row in rows:
        vals = [str(row.n), _fmt(row.distortion), _fmt(row.scaled)]
        if include_ratio:
            vals.append(_fmt(row.ratio))
        if include_rate:
            vals.append(_fmt(row.rate))
        lines.append(",".join(vals))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_diagnostics_csv(rows, path):
    lines = ["n,point_density,error_density,mass_deviation,g4_deviation"]
    for row in rows:
        lines.append(",".join([str(row.n), _fmt(row.point_density),
                               _fmt(row.error_density), _fmt(row.mass_deviation),
                               _fmt(row.g4_deviation)]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
