"""Non-atomic scalar distributions with evaluable density and tail-safe mass.

Every model is a density (no singular parts), so the distribution is
non-atomic by construction. Built-in families carry analytic CDF/quantile
formulas; tabulated densities are piecewise linear between knots and are
renormalized to unit mass on load.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from . import _kernels
from .errors import InvalidInterval, InvalidParameter

INF = math.inf

_CODE = {"uniform": 0, "gaussian": 1, "laplace": 2, "exponential": 3,
         "power_tail": 4, "tabulated": 5}


@dataclass(frozen=True)
class Order:
    """Norm exponent of the distortion; r > 1 keeps the cell objective
    strictly convex (unique 1-optimal point)."""

    r: float = 2.0

    def __post_init__(self):
        if not self.r > 1.0:
            raise InvalidParameter(f"order r must exceed 1, got {self.r}")
        if self.r < 1.1:
            warnings.warn(
                f"r={self.r} is close to 1; the centroid derivative kernel is "
                "poorly conditioned below r=1.1", stacklevel=2)


@dataclass(frozen=True)
class DensityModel:
    """A scalar density: family tag, parameters and support.

    ``kernel_code``/``kernel_params`` is the flat encoding consumed by the
    numerical kernels; ``has_gaps`` records an interior zero-density stretch
    (only possible for tabulated models), which voids the uniqueness
    guarantee of the equal-moment construction.
    """

    family: str
    params: tuple
    support_lo: float
    support_hi: float
    kernel_code: int = field(repr=False, compare=False, default=0)
    kernel_params: np.ndarray = field(repr=False, compare=False,
                                      default_factory=lambda: np.zeros(1))
    has_gaps: bool = False

    @property
    def kspec(self):
        return self.kernel_code, self.kernel_params

    @property
    def interval_support(self) -> bool:
        return not self.has_gaps


def uniform(lo: float, hi: float) -> DensityModel:
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InvalidParameter("uniform needs finite lo < hi")
    return DensityModel("uniform", (lo, hi), lo, hi, _CODE["uniform"],
                        np.array([lo, hi], dtype=float))


def gaussian(mean: float, stddev: float) -> DensityModel:
    if not (math.isfinite(mean) and stddev > 0.0):
        raise InvalidParameter("gaussian needs finite mean and stddev > 0")
    return DensityModel("gaussian", (mean, stddev), -INF, INF, _CODE["gaussian"],
                        np.array([mean, stddev], dtype=float))


def laplace(loc: float, scale: float) -> DensityModel:
    if not (math.isfinite(loc) and scale > 0.0):
        raise InvalidParameter("laplace needs finite loc and scale > 0")
    return DensityModel("laplace", (loc, scale), -INF, INF, _CODE["laplace"],
                        np.array([loc, scale], dtype=float))


def exponential(rate: float) -> DensityModel:
    if not rate > 0.0:
        raise InvalidParameter("exponential needs rate > 0")
    return DensityModel("exponential", (rate,), 0.0, INF, _CODE["exponential"],
                        np.array([rate], dtype=float))


def power_tail(exponent: float, cutoff: float) -> DensityModel:
    """h(x) = (exponent-1) * cutoff^(exponent-1) * x^(-exponent) on [cutoff, inf)."""
    if not (exponent > 1.0 and cutoff > 0.0 and math.isfinite(exponent)
            and math.isfinite(cutoff)):
        raise InvalidParameter("power_tail needs exponent > 1 and cutoff > 0")
    return DensityModel("power_tail", (exponent, cutoff), cutoff, INF,
                        _CODE["power_tail"], np.array([exponent, cutoff], dtype=float))


def tabulated(knots) -> DensityModel:
    """Piecewise-linear density through (x, h) knots, renormalized to mass 1."""
    xs = np.asarray([k[0] for k in knots], dtype=float)
    hs = np.asarray([k[1] for k in knots], dtype=float)
    if xs.size < 2:
        raise InvalidParameter("tabulated needs at least 2 knots")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(hs))):
        raise InvalidParameter("tabulated knots must be finite")
    if np.any(np.diff(xs) <= 0.0):
        raise InvalidParameter("tabulated x knots must be strictly increasing")
    if np.any(hs < 0.0):
        raise InvalidParameter("tabulated density values must be nonnegative")
    total = float(np.trapezoid(hs, xs))
    if not total > 0.0:
        raise InvalidParameter("tabulated density has zero total mass")
    hs = hs / total
    pos = np.flatnonzero(hs > 0.0)
    first, last = int(pos[0]), int(pos[-1])
    gaps = any(hs[i] == 0.0 and hs[i + 1] == 0.0 for i in range(first, last))
    params = np.concatenate(([xs.size], xs, hs))
    return DensityModel("tabulated", (tuple(xs), tuple(hs)), float(xs[0]),
                        float(xs[-1]), _CODE["tabulated"], params, gaps)


def tabulated_from_csv(path) -> DensityModel:
    """Load a density table: header ``x,h``, >= 4 rows sorted ascending in x.

    Rejects NaN and negative h; the density is renormalized to mass 1.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if [c.strip().lower() for c in header] != ["x", "h"]:
            raise ValueError(f"{path}: expected header 'x,h', got {header!r}")
        knots = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            x, h = float(row[0]), float(row[1])
            if math.isnan(x) or math.isnan(h):
                raise ValueError(f"{path}:{lineno}: NaN entry")
            if h < 0.0:
                raise ValueError(f"{path}:{lineno}: negative density")
            knots.append((x, h))
    if len(knots) < 4:
        raise ValueError(f"{path}: need at least 4 rows, got {len(knots)}")
    xs = [k[0] for k in knots]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError(f"{path}: x column must be strictly increasing")
    return tabulated(knots)


# ------------------------------------------------------------------ queries

def pdf_at(model: DensityModel, x: float) -> float:
    """Density value h(x); exactly 0 outside the support."""
    return _kernels.pdf_one(model.kernel_code, model.kernel_params, float(x))


def _tab_cum(model):
    xs = np.asarray(model.params[0])
    hs = np.asarray(model.params[1]) / float(np.trapezoid(model.params[1], xs))
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (hs[1:] + hs[:-1]) * np.diff(xs))))
    return xs, hs, cum


def cdf(model: DensityModel, x: float) -> float:
    fam = model.family
    if x <= model.support_lo:
        return 0.0
    if x >= model.support_hi:
        return 1.0
    if fam == "uniform":
        lo, hi = model.params
        return (x - lo) / (hi - lo)
    if fam == "gaussian":
        mean, sd = model.params
        return 0.5 * math.erfc((mean - x) / (sd * math.sqrt(2.0)))
    if fam == "laplace":
        loc, b = model.params
        if x < loc:
            return 0.5 * math.exp((x - loc) / b)
        return 1.0 - 0.5 * math.exp(-(x - loc) / b)
    if fam == "exponential":
        return -math.expm1(-model.params[0] * x)
    if fam == "power_tail":
        alpha, cut = model.params
        return 1.0 - (cut / x) ** (alpha - 1.0)
    xs, hs, cum = _tab_cum(model)
    i = int(np.searchsorted(xs, x, side="right")) - 1
    i = min(max(i, 0), xs.size - 2)
    d = x - xs[i]
    slope = (hs[i + 1] - hs[i]) / (xs[i + 1] - xs[i])
    return float(cum[i] + hs[i] * d + 0.5 * slope * d * d)


def sf(model: DensityModel, x: float) -> float:
    fam = model.family
    if x <= model.support_lo:
        return 1.0
    if x >= model.support_hi:
        return 0.0
    if fam == "gaussian":
        mean, sd = model.params
        return 0.5 * math.erfc((x - mean) / (sd * math.sqrt(2.0)))
    if fam == "laplace":
        loc, b = model.params
        if x >= loc:
            return 0.5 * math.exp(-(x - loc) / b)
        return 1.0 - 0.5 * math.exp((x - loc) / b)
    if fam == "exponential":
        return math.exp(-model.params[0] * x)
    if fam == "power_tail":
        alpha, cut = model.params
        return (cut / x) ** (alpha - 1.0)
    return 1.0 - cdf(model, x)


def mass(model: DensityModel, a: float, b: float) -> float:
    """mu([a, b]); infinite endpoints allowed. Uses whichever of CDF/SF
    differences is better conditioned."""
    if a > b:
        raise InvalidInterval(f"mass: a={a} > b={b}")
    if a == b:
        return 0.0
    fb = cdf(model, b)
    if fb <= 0.5:
        return max(fb - cdf(model, a), 0.0)
    sa = sf(model, a)
    if sa <= 0.5:
        return max(sa - sf(model, b), 0.0)
    return max(1.0 - cdf(model, a) - sf(model, b), 0.0)


def quantile(model: DensityModel, q: float) -> float:
    """Inverse CDF; q=0 / q=1 return the support endpoints."""
    if not 0.0 <= q <= 1.0:
        raise InvalidParameter(f"quantile needs q in [0, 1], got {q}")
    if q == 0.0:
        return model.support_lo
    if q == 1.0:
        return model.support_hi
    fam = model.family
    if fam == "uniform":
        lo, hi = model.params
        return lo + q * (hi - lo)
    if fam == "gaussian":
        mean, sd = model.params
        return mean + sd * float(ndtri(q))
    if fam == "laplace":
        loc, b = model.params
        if q < 0.5:
            return loc + b * math.log(2.0 * q)
        return loc - b * math.log(2.0 * (1.0 - q))
    if fam == "exponential":
        return -math.log1p(-q) / model.params[0]
    if fam == "power_tail":
        alpha, cut = model.params
        return cut * (1.0 - q) ** (-1.0 / (alpha - 1.0))
    xs, hs, cum = _tab_cum(model)
    i = int(np.searchsorted(cum, q, side="right")) - 1
    i = min(max(i, 0), xs.size - 2)
    rem = q - cum[i]
    slope = (hs[i + 1] - hs[i]) / (xs[i + 1] - xs[i])
    if abs(slope) < 1e-300:
        if hs[i] <= 0.0:
            return float(xs[i])
        return float(xs[i] + rem / hs[i])
    disc = hs[i] * hs[i] + 2.0 * slope * rem
    d = (-hs[i] + math.sqrt(max(disc, 0.0))) / slope
    return float(min(max(xs[i] + d, xs[i]), xs[i + 1]))


# ------------------------------------------------------------- diagnostics

@dataclass(frozen=True)
class UnimodalityReport:
    """Grid heuristic for weak unimodality (diagnostic, never a hard gate)."""

    passed: bool
    first_split_level: float | None
    grid_size: int
    levels_checked: tuple


def is_weakly_unimodal(model: DensityModel, grid_size: int = 512) -> UnimodalityReport:
    """Check on a grid that small superlevel sets {h >= l} are single intervals."""
    if grid_size < 16:
        raise InvalidParameter("grid_size must be at least 16")
    lo = max(model.support_lo, quantile(model, 1e-9))
    hi = min(model.support_hi, quantile(model, 1.0 - 1e-9))
    xs = np.linspace(lo, hi, grid_size)
    hs = np.asarray([pdf_at(model, float(x)) for x in xs])
    hmax = float(hs.max())
    if hmax <= 0.0:
        return UnimodalityReport(False, 0.0, grid_size, ())
    levels = tuple(hmax * 10.0 ** (-k) for k in range(6, 0, -1))
    first_split = None
    for level in levels:
        idx = np.flatnonzero(hs >= level)
        if idx.size == 0:
            continue
        if idx[-1] - idx[0] + 1 != idx.size:
            first_split = level
            break
    return UnimodalityReport(first_split is None, first_split, grid_size, levels)
