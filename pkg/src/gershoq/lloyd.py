"""Lloyd-Max fixed-point baseline: nearest-point cells, per-cell optimal
codepoints, iterated until the codebook stops moving."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .config import SolverConfig
from .distribution import DensityModel, Order, quantile
from .errors import DegenerateCell, InvalidParameter
from .gersho import Quantizer, build_gersho
from .moments import partial_moment

_DEFAULT = SolverConfig()
INF = math.inf


@dataclass(frozen=True)
class LloydState:
    codepoints: tuple
    iteration: int
    last_move: float


def _midpoint_edges(cps):
    mids = tuple(0.5 * (a + b) for a, b in zip(cps, cps[1:]))
    return (-INF,) + mids + (INF,)


def lloyd_step(model: DensityModel, state: LloydState, order: Order,
               cfg: SolverConfig = _DEFAULT) -> LloydState:
    """One alternation: midpoint boundaries, then per-cell optimal points.

    Midpoint boundaries are the nearest-point rule for |x - c| under any
    order r; the step never increases the distortion.
    """
    code, params = model.kspec
    opts = cfg.kernel_opts()
    edges = _midpoint_edges(state.codepoints)
    new_cps = []
    for i, (a, b) in enumerate(zip(edges, edges[1:])):
        j0, c, _m, _err = _kernels.cellmom(code, params, a, b, order.r, opts)
        if not j0 > 0.0:
            raise DegenerateCell(f"cell {i} lost all mass", index=i)
        new_cps.append(float(c))
    move = max(abs(a - b) for a, b in zip(new_cps, state.codepoints))
    return LloydState(tuple(new_cps), state.iteration + 1, move)


def run_lloyd(model: DensityModel, n: int, order: Order,
              init="quantile_grid", cfg: SolverConfig = _DEFAULT):
    """Iterate lloyd_step to a fixed point; returns (Quantizer, iterations).

    init: "quantile_grid" (codepoints at mass quantiles (2i-1)/2n),
    "gersho_seed", or an explicit codepoint list. Stops when the largest
    codepoint move drops below root_tol_x or after lloyd_max_iter steps
    (iterations == cfg.lloyd_max_iter then flags non-convergence).
    """
    if n < 1 or int(n) != n:
        raise InvalidParameter(f"level n must be a positive integer, got {n}")
    n = int(n)
    if isinstance(init, str):
        key = init.strip().lower()
        if key == "quantile_grid":
            cps = [quantile(model, (2 * i - 1) / (2 * n)) for i in range(1, n + 1)]
        elif key == "gersho_seed":
            cps = list(build_gersho(model, n, order, cfg)[0].codepoints)
        else:
            raise InvalidParameter(f"unknown Lloyd init {init!r}")
    else:
        cps = [float(c) for c in init]
        if len(cps) != n:
            raise InvalidParameter(f"explicit init needs {n} codepoints")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise InvalidParameter("explicit init must be strictly increasing")

    state = LloydState(tuple(cps), 0, INF)
    while state.iteration < cfg.lloyd_max_iter:
        state = lloyd_step(model, state, order, cfg)
        if state.last_move < cfg.root_tol_x:
            break

    edges = _midpoint_edges(state.codepoints)
    moms = tuple(
        partial_moment(model, a, b, cp, order, cfg)
        for (a, b), cp in zip(zip(edges, edges[1:]), state.codepoints))
    q = Quantizer(order, n, edges[1:-1], state.codepoints, moms)
    return q, state.iteration
