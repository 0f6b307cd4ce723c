"""Construction, splitting, doubling and verification of equal-distortion
(Gersho) quantizers.

A quantizer at level n is stored as n-1 strictly increasing interior
boundaries plus codepoints; cells are (-inf, b_1), [b_1, b_2), ...,
[b_{n-1}, inf) intersected with the support. The half-open convention is
distortion-irrelevant (the distribution is non-atomic) but fixed for
determinism.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import _kernels
from .config import SolverConfig
from .distribution import DensityModel, Order, mass
from .errors import (ConstructionFailure, EmptyCell, InvalidInterval,
                     InvalidParameter, InvalidTarget, QuadratureFailure,
                     TargetTooLarge)
from .moments import partial_moment

_DEFAULT = SolverConfig()
_EPS = 2.220446049250313e-16
INF = math.inf


@dataclass(frozen=True)
class Quantizer:
    """Level-n scalar quantizer with per-cell optimal moments."""

    order: Order
    n: int
    boundaries: tuple
    codepoints: tuple
    cell_moments: tuple


@dataclass(frozen=True)
class ConstructionReport:
    distortion: float
    per_cell_spread: float
    outer_iterations: int
    residual_history: tuple
    method: str  # "outer_bisection" | "doubling"
    unique: bool


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the four defining properties at a given tolerance.

    g1: exact level count and a strictly increasing codebook.
    g2: structurally valid interval cells, each with positive mass.
    g3: every codepoint within tol of the 1-optimal point of its cell.
    g4: per-cell moment spread within tol of the mean.
    """

    g1: bool
    g2: bool
    g3: bool
    g4: bool
    cell_moments: tuple
    distortion: float
    per_cell_spread: float
    max_codepoint_error: float
    boundaries_are_midpoints: bool
    tol: float

    @property
    def ok(self) -> bool:
        return self.g1 and self.g2 and self.g3 and self.g4


def cells_of(q: Quantizer):
    """Cell intervals on the extended line, in increasing order."""
    edges = (-INF,) + tuple(q.boundaries) + (INF,)
    return list(zip(edges, edges[1:]))


def _strictly_increasing(xs) -> bool:
    return all(b > a for a, b in zip(xs, xs[1:]))


def _cell_stats(model, q_edges, r, cfg):
    """(codepoints, moments, masses) of the cells given by edge list."""
    code, params = model.kspec
    opts = cfg.kernel_opts()
    cps, moms, masses = [], [], []
    for a, b in q_edges:
        j0, c, m, _err = _kernels.cellmom(code, params, a, b, r, opts)
        cps.append(float(c))
        moms.append(float(m))
        masses.append(float(j0))
    return cps, moms, masses


def _spread(moms):
    mean = sum(moms) / len(moms)
    if not mean > 0.0:
        return INF
    return max(abs(m - mean) for m in moms) / mean


def extend_cell(model: DensityModel, order: Order, a: float, target_m: float,
                cfg: SolverConfig = _DEFAULT) -> float:
    """Smallest b with cell_moment(a, b) == target_m (monotone solve).

    The moment map is continuous and increasing in b, so the solve is a
    bracketed root find; for supports with interior gaps a leftmost-root
    bisection keeps the infimum semantics.
    """
    if target_m < 0.0:
        raise InvalidTarget(f"target moment must be nonnegative, got {target_m}")
    if not a < model.support_hi:
        raise InvalidInterval(f"a={a} must lie left of the support end")
    code, params = model.kspec
    b, status = _kernels.extend(code, params, a, float(target_m), order.r, 0.0,
                                1 if model.has_gaps else 0, cfg.kernel_opts())
    if status == _kernels.TOO_LARGE:
        raise TargetTooLarge(
            f"target {target_m} exceeds the remaining tail moment from a={a}")
    if status != _kernels.OK or b != b:
        raise QuadratureFailure("cell extension did not converge")
    return b


def split_cell(model: DensityModel, order: Order, a: float, b: float,
               cfg: SolverConfig = _DEFAULT) -> float:
    """The point s in (a, b) with equal optimal moments on both sides."""
    if not a <= b:
        raise InvalidInterval(f"split_cell: a={a} > b={b}")
    if mass(model, a, b) <= 0.0:
        raise EmptyCell(f"cell [{a}, {b}] has no mass")
    code, params = model.kspec
    s, status = _kernels.split2(code, params, a, b, order.r,
                                1 if model.has_gaps else 0, cfg.kernel_opts())
    if status != _kernels.OK or s != s:
        raise ConstructionFailure("cell split did not converge",
                                  diagnostics=f"cell=({a}, {b})")
    return s


def build_gersho(model: DensityModel, n: int, order: Order,
                 cfg: SolverConfig = _DEFAULT):
    """Construct the level-n equal-distortion quantizer.

    Outer monotone solve on the per-cell moment target m: a greedy
    left-to-right sweep builds n-1 cells of moment m, and the residual
    (tail moment minus m) is strictly decreasing in m, so a bracketed
    solve on [0, D_1] pins the target. Returns (Quantizer, report).
    """
    if n < 1 or int(n) != n:
        raise InvalidParameter(f"level n must be a positive integer, got {n}")
    n = int(n)
    r = order.r
    code, params = model.kspec
    opts = cfg.kernel_opts()
    leftmost = 1 if model.has_gaps else 0

    j0, c1, d1, _err = _kernels.cellmom(code, params, -INF, INF, r, opts)
    if not (j0 > 0.0 and math.isfinite(d1) and d1 > 0.0):
        raise ConstructionFailure(
            "full-support moment is not finite and positive",
            diagnostics=f"mass={j0}, moment={d1}")

    if n == 1:
        q = Quantizer(order, 1, (), (c1,), (d1,))
        report = ConstructionReport(d1, 0.0, 0, (), "outer_bisection",
                                    model.interval_support)
        return q, report

    history = []
    last_bounds = [None]

    def residual(m):
        bounds, res, status = _kernels.sweep(code, params, n, m, r, leftmost, opts)
        if status != _kernels.OK or res != res:
            raise ConstructionFailure("boundary sweep failed",
                                      diagnostics=f"m={m}, status={status}")
        last_bounds[0] = bounds
        history.append(res)
        return res

    # residual(0+) = D_1 > 0 and residual(D_1) = -D_1 < 0 by construction;
    # geometric probing from the high-rate seed D_1 * n^-(1+r) shrinks the
    # bracket, then Illinois-damped regula falsi finishes.
    lo, flo = 0.0, d1
    hi, fhi = d1, -d1
    m_acc = None

    def _accepted(m, res):
        return abs(res) <= cfg.root_tol_m_rel * m

    m = min(max(d1 * float(n) ** (-(1.0 + r)), d1 * 1e-30), 0.5 * d1)
    res = residual(m)
    if _accepted(m, res):
        m_acc = m
    elif res > 0.0:
        lo, flo = m, res
        for _ in range(60):
            if lo * 8.0 >= hi:
                break
            m = lo * 8.0
            res = residual(m)
            if _accepted(m, res):
                m_acc = m
                break
            if res > 0.0:
                lo, flo = m, res
            else:
                hi, fhi = m, res
                break
    else:
        hi, fhi = m, res
        for _ in range(60):
            m = hi / 8.0
            if m <= 0.0:
                break
            res = residual(m)
            if _accepted(m, res):
                m_acc = m
                break
            if res < 0.0:
                hi, fhi = m, res
            else:
                lo, flo = m, res
                break

    # regula falsi in log(m): the root spans decades of m, so the chord in
    # log space tracks the residual far better than in m itself.
    if m_acc is None and lo <= 0.0:
        lo, flo = min(hi * 1e-3, d1 * 1e-30), d1
    ulo = math.log(lo) if m_acc is None else 0.0
    uhi = math.log(hi) if m_acc is None else 0.0
    for it in range(cfg.max_root_iter):
        if m_acc is not None:
            break
        denom = flo - fhi
        # alternate chord and bisection steps: the chord gives the
        # superlinear endgame, the bisection kills one-sided stalls
        if it % 2 == 0 and denom > 0.0:
            u = ulo + flo * (uhi - ulo) / denom
        else:
            u = 0.5 * (ulo + uhi)
        if not ulo < u < uhi:
            u = 0.5 * (ulo + uhi)
        m = math.exp(u)
        res = residual(m)
        if abs(res) <= cfg.root_tol_m_rel * m:
            m_acc = m
            break
        if res > 0.0:
            ulo, flo = u, res
        else:
            uhi, fhi = u, res
        if uhi - ulo <= 4.0 * _EPS:
            m_acc = m  # bracket exhausted at double precision
            break
    if m_acc is None:
        raise ConstructionFailure(
            "outer equal-moment solve did not converge",
            diagnostics=f"n={n}, iterations={len(history)}, "
                        f"last residual={history[-1] if history else None}")

    bounds = [float(x) for x in last_bounds[0]]
    if not (_strictly_increasing(bounds) and all(math.isfinite(x) for x in bounds)):
        raise ConstructionFailure("boundaries are not strictly increasing",
                                  diagnostics=f"n={n}, m={m_acc}")
    edges = [(-INF, bounds[0])] + list(zip(bounds, bounds[1:])) + [(bounds[-1], INF)]
    cps, moms, _masses = _cell_stats(model, edges, r, cfg)
    if not _strictly_increasing(cps):
        raise ConstructionFailure("codepoints are not strictly increasing",
                                  diagnostics=f"n={n}, m={m_acc}")
    total = sum(moms)
    q = Quantizer(order, n, tuple(bounds), tuple(cps), tuple(moms))
    report = ConstructionReport(total, _spread(moms), len(history),
                                tuple(history), "outer_bisection",
                                model.interval_support)
    return q, report


def build_by_doubling(model: DensityModel, k: int, order: Order,
                      cfg: SolverConfig = _DEFAULT):
    """Level 2^k quantizer by splitting every cell into equal-moment halves,
    k times, starting from the 1-cell quantizer.

    Each split equalizes moments only within its parent cell; the global
    equal-moment property is measured, not assumed: the report's
    residual_history holds the global spread after every doubling.
    """
    if k < 0 or int(k) != k:
        raise InvalidParameter(f"doubling count k must be >= 0, got {k}")
    k = int(k)
    r = order.r
    code, params = model.kspec
    opts = cfg.kernel_opts()
    leftmost = 1 if model.has_gaps else 0

    bounds: list[float] = []
    spreads = []
    for _ in range(k):
        edges = [-INF] + bounds + [INF]
        new_bounds = []
        for a, b in zip(edges, edges[1:]):
            s, status = _kernels.split2(code, params, a, b, r, leftmost, opts)
            if status != _kernels.OK or s != s:
                raise ConstructionFailure("cell split did not converge",
                                          diagnostics=f"cell=({a}, {b})")
            new_bounds.append(float(s))
            if b < INF:
                new_bounds.append(b)
        bounds = new_bounds
        edges = [-INF] + bounds + [INF]
        _cps, moms, _masses = _cell_stats(model, list(zip(edges, edges[1:])), r, cfg)
        spreads.append(_spread(moms))

    edges = [-INF] + bounds + [INF]
    cps, moms, _masses = _cell_stats(model, list(zip(edges, edges[1:])), r, cfg)
    total = sum(moms)
    q = Quantizer(order, 2 ** k, tuple(bounds), tuple(cps), tuple(moms))
    report = ConstructionReport(total, _spread(moms) if k else 0.0, k,
                                tuple(spreads), "doubling",
                                model.interval_support)
    return q, report


def verify_quantizer(model: DensityModel, q: Quantizer, order: Order = None,
                     tol: float = 1e-6, cfg: SolverConfig = _DEFAULT
                     ) -> VerificationReport:
    """Check the four defining properties; always returns a report."""
    r = (order if order is not None else q.order).r
    code, params = model.kspec
    opts = cfg.kernel_opts()

    g1 = (len(q.codepoints) == q.n and len(q.cell_moments) == q.n
          and len(q.boundaries) == q.n - 1 and _strictly_increasing(q.codepoints))
    g2 = (_strictly_increasing(q.boundaries)
          and all(math.isfinite(b) for b in q.boundaries))

    edges = (-INF,) + tuple(q.boundaries) + (INF,)
    moms = []
    max_cp_err = 0.0
    for (a, b), cp in zip(zip(edges, edges[1:]), q.codepoints):
        j0, c, m, _err = _kernels.cellmom(code, params, a, b, r, opts)
        if not (j0 > 0.0 and math.isfinite(m)):
            g2 = False
            moms.append(m if math.isfinite(m) else math.nan)
            continue
        moms.append(m)
        max_cp_err = max(max_cp_err, abs(cp - c) / max(1.0, abs(c)))
    g3 = g2 and max_cp_err <= tol

    finite = [m for m in moms if math.isfinite(m)]
    total = sum(finite) if finite else math.nan
    spread = _spread(finite) if (g2 and finite) else INF
    g4 = g2 and spread <= tol

    midpoints = True
    for b, cl, cr in zip(q.boundaries, q.codepoints, q.codepoints[1:]):
        if abs(b - 0.5 * (cl + cr)) > tol * max(1.0, abs(b)):
            midpoints = False
            break

    return VerificationReport(g1, g2, g3, g4, tuple(moms), total, spread,
                              max_cp_err, midpoints, tol)


def distortion(model: DensityModel, q: Quantizer, order: Order = None,
               cfg: SolverConfig = _DEFAULT) -> float:
    """Expected r-th error power: sum over cells of the moment about the
    stored codepoint (not the optimal one)."""
    o = order if order is not None else q.order
    edges = (-INF,) + tuple(q.boundaries) + (INF,)
    total = 0.0
    for (a, b), cp in zip(zip(edges, edges[1:]), q.codepoints):
        total += partial_moment(model, a, b, cp, o, cfg)
    return total


# -------------------------------------------------------------------- JSON

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def quantizer_to_json(q: Quantizer, method: str, unique: bool) -> str:
    """Fixed field order, reals with 17 significant digits."""
    if method not in ("outer_bisection", "doubling", "lloyd"):
        raise InvalidParameter(f"unknown method tag {method!r}")
    return ("{"
            f'"r": {_fmt(q.order.r)}, '
            f'"n": {q.n}, '
            f'"boundaries": [{", ".join(_fmt(b) for b in q.boundaries)}], '
            f'"codepoints": [{", ".join(_fmt(c) for c in q.codepoints)}], '
            f'"cell_moments": [{", ".join(_fmt(m) for m in q.cell_moments)}], '
            f'"distortion": {_fmt(sum(q.cell_moments))}, '
            f'"method": "{method}", '
            f'"unique": {"true" if unique else "false"}'
            "}")


def write_quantizer_json(path, q: Quantizer, method: str, unique: bool):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(quantizer_to_json(q, method, unique))
        fh.write("\n")


def load_quantizer_json(path):
    """Read a quantizer file; returns (Quantizer, method, unique)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    for key in ("r", "n", "boundaries", "codepoints", "cell_moments",
                "distortion", "method", "unique"):
        if key not in data:
            raise ValueError(f"quantizer JSON missing field {key!r}")
    q = Quantizer(Order(float(data["r"])), int(data["n"]),
                  tuple(float(x) for x in data["boundaries"]),
                  tuple(float(x) for x in data["codepoints"]),
                  tuple(float(x) for x in data["cell_moments"]))
    return q, str(data["method"]), bool(data["unique"])
