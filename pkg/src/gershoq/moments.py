"""Partial r-th moments and the unique 1-optimal point of a cell.

Thin validation layer over the numerical kernel; every operation is pure.
"""

from __future__ import annotations

import math

from . import _kernels
from .config import SolverConfig
from .distribution import DensityModel, Order, mass, quantile
from .errors import EmptyCell, InvalidInterval, QuadratureFailure

_DEFAULT = SolverConfig()


def _check_interval(a: float, b: float):
    if not a <= b:
        raise InvalidInterval(f"interval endpoints out of order: a={a}, b={b}")


def _check_quad(value: float, err: float, cfg: SolverConfig, what: str) -> float:
    if not math.isfinite(value):
        raise QuadratureFailure(f"{what} diverged (infinite moment)", achieved=err)
    if err > 50.0 * (cfg.quad_abs_tol + cfg.quad_rel_tol * abs(value)):
        raise QuadratureFailure(
            f"{what} did not reach tolerance (achieved {err:.3e})", achieved=err)
    return value


def partial_moment(model: DensityModel, a: float, b: float, c: float,
                   order: Order, cfg: SolverConfig = _DEFAULT) -> float:
    """integral of |x-c|^r h(x) over [a, b]; the domain is split at x = c."""
    _check_interval(a, b)
    code, params = model.kspec
    val, err = _kernels.pm(code, params, a, b, float(c), order.r,
                           cfg.quad_rel_tol, cfg.quad_abs_tol, cfg.max_quad_depth)
    return _check_quad(val, err, cfg, "partial_moment")


def one_point_optimal(model: DensityModel, a: float, b: float,
                      order: Order, cfg: SolverConfig = _DEFAULT) -> float:
    """The unique minimizer c of the cell's r-th moment (conditional mean
    for r = 2). Lies in [a, b]; infinite endpoints are bracketed inside
    extreme quantiles before the monotone solve."""
    _check_interval(a, b)
    if mass(model, a, b) <= 0.0:
        raise EmptyCell(f"cell [{a}, {b}] has no mass")
    code, params = model.kspec
    if order.r == 2.0:
        j0, c, m, err = _kernels.mom2(code, params, a, b, cfg.quad_rel_tol,
                                      cfg.quad_abs_tol, cfg.max_quad_depth)
        if not j0 > 0.0:
            raise EmptyCell(f"cell [{a}, {b}] has no resolvable mass")
        _check_quad(m, err, cfg, "one_point_optimal")
        return c
    clo = a if a > -math.inf else quantile(model, cfg.tail_quantile)
    chi = b if b < math.inf else quantile(model, 1.0 - cfg.tail_quantile)
    j0, c, m, err = _kernels.momr(code, params, a, b, order.r, clo, chi,
                                  cfg.quad_rel_tol, cfg.quad_abs_tol,
                                  cfg.max_quad_depth, cfg.root_tol_x,
                                  cfg.max_root_iter)
    if not j0 > 0.0:
        raise EmptyCell(f"cell [{a}, {b}] has no resolvable mass")
    _check_quad(m, err, cfg, "one_point_optimal")
    return c


def cell_moment(model: DensityModel, a: float, b: float,
                order: Order, cfg: SolverConfig = _DEFAULT) -> float:
    """Optimally-centered r-th moment of the cell [a, b]; 0 for empty cells.

    Continuous and increasing in b while mass is added, which is what makes
    every boundary solve in the construction a monotone bracketed solve.
    """
    _check_interval(a, b)
    code, params = model.kspec
    j0, _c, m, err = _kernels.cellmom(code, params, a, b, order.r,
                                      cfg.kernel_opts())
    if not j0 > 0.0:
        return 0.0
    return _check_quad(m, err, cfg, "cell_moment")
