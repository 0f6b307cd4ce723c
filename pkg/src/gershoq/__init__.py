"""Equal-distortion (Gersho) scalar quantizers for non-atomic distributions.

Construction by monotone moment solves, verification of the defining
properties, a Lloyd-Max baseline and high-rate (Zador) asymptotics.
"""

from ._kernels import BACKEND as kernel_backend
from .asymptotics import (ConvergenceRow, DiagnosticsRow, cell_census,
                          convergence_table, counterexample_quantizer,
                          diagnostics, q_factor, write_convergence_csv,
                          write_diagnostics_csv, zador_constant)
from .config import SolverConfig, load_config_overrides
from .distribution import (DensityModel, Order, UnimodalityReport, cdf,
                           exponential, gaussian, is_weakly_unimodal, laplace,
                           mass, pdf_at, power_tail, quantile, sf, tabulated,
                           tabulated_from_csv, uniform)
from .errors import (ConstructionFailure, DegenerateCell, EmptyCell,
                     GershoqError, InfiniteZadorConstant, InvalidInterval,
                     InvalidParameter, InvalidTarget, QuadratureFailure,
                     TargetTooLarge)
from .gersho import (ConstructionReport, Quantizer, VerificationReport,
                     build_by_doubling, build_gersho, cells_of, distortion,
                     extend_cell, load_quantizer_json, quantizer_to_json,
                     split_cell, verify_quantizer, write_quantizer_json)
from .lloyd import LloydState, lloyd_step, run_lloyd
from .moments import cell_moment, one_point_optimal, partial_moment

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "kernel_backend", "__version__",
    "SolverConfig", "load_config_overrides",
    "DensityModel", "Order", "UnimodalityReport",
    "uniform", "gaussian", "laplace", "exponential", "power_tail",
    "tabulated", "tabulated_from_csv",
    "pdf_at", "mass", "cdf", "sf", "quantile", "is_weakly_unimodal",
    "partial_moment", "one_point_optimal", "cell_moment",
    "Quantizer", "ConstructionReport", "VerificationReport",
    "build_gersho", "build_by_doubling", "extend_cell", "split_cell",
    "verify_quantizer", "distortion", "cells_of",
    "quantizer_to_json", "write_quantizer_json", "load_quantizer_json",
    "LloydState", "lloyd_step", "run_lloyd",
    "ConvergenceRow", "DiagnosticsRow", "zador_constant", "q_factor",
    "convergence_table", "cell_census", "diagnostics",
    "counterexample_quantizer", "write_convergence_csv",
    "write_diagnostics_csv",
    "GershoqError", "InvalidInterval", "InvalidParameter",
    "QuadratureFailure", "EmptyCell", "InvalidTarget", "TargetTooLarge",
    "ConstructionFailure", "DegenerateCell", "InfiniteZadorConstant",
]
