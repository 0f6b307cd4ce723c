"""Solver configuration shared by quadrature, root solves and constructions."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace

from .errors import InvalidParameter


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and iteration caps for all numerical kernels.

    quad_rel_tol / quad_abs_tol
        Relative and absolute tolerance of the adaptive cell quadrature.
    root_tol_x
        Bracket width (in x-units) at which bracketed root solves stop.
    root_tol_m_rel
        Relative tolerance (in moment-units) at which a cell-moment solve is
        accepted; also the relative residual target of the outer equal-moment
        solve.
    max_root_iter / max_quad_depth
        Iteration cap per root solve and panel-splitting depth cap.
    tail_quantile
        Mass clipped at each infinite end when bracketing a centroid search.
    lloyd_max_iter
        Iteration cap of the Lloyd fixed-point driver.
    """

    quad_rel_tol: float = 1e-10
    quad_abs_tol: float = 1e-13
    root_tol_x: float = 1e-12
    root_tol_m_rel: float = 1e-11
    max_root_iter: int = 200
    max_quad_depth: int = 60
    tail_quantile: float = 1e-15
    lloyd_max_iter: int = 10_000

    def __post_init__(self):
        for name in ("quad_rel_tol", "quad_abs_tol", "root_tol_x",
                     "root_tol_m_rel", "tail_quantile"):
            if not getattr(self, name) > 0.0:
                raise InvalidParameter(f"{name} must be positive")
        for name in ("max_root_iter", "max_quad_depth", "lloyd_max_iter"):
            if getattr(self, name) < 1:
                raise InvalidParameter(f"{name} must be at least 1")

    def kernel_opts(self):
        """Flat tuple consumed by the low-level kernels."""
        return (self.quad_rel_tol, self.quad_abs_tol, float(self.max_quad_depth),
                self.root_tol_x, self.root_tol_m_rel, float(self.max_root_iter))


def load_config_overrides(path, base: SolverConfig | None = None) -> SolverConfig:
    """Read a JSON file with SolverConfig keys and apply it over ``base``."""
    base = base if base is not None else SolverConfig()
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    known = {f.name for f in fields(SolverConfig)}
    unknown = set(data) - known
    if unknown:
        raise InvalidParameter(f"unknown SolverConfig keys: {sorted(unknown)}")
    return replace(base, **data)
