"""Pure-Python (numpy) kernel for cell moments and boundary solves.

Same contract as the compiled backend ``_speed``:

* a density family is a ``(code, params)`` pair (flat float64 array),
* every integral is an adaptive Gauss-Legendre 7/15 quadrature over panels
  split at density kinks and at the kink of ``|x - c|^r``,
* infinite tails are mapped to (0, 1) with ``x = anchor +/- t/(1-t)``, or an
  exponent-matched power map for algebraically decaying tails,
* moments are always accumulated about a local reference point so narrow
  cells never difference large antiderivatives.

Family codes: 0 uniform [lo, hi]; 1 gaussian [mean, sigma];
2 laplace [loc, scale]; 3 exponential [rate]; 4 power tail [alpha, cutoff];
5 tabulated [m, x_0..x_{m-1}, h_0..h_{m-1}] (piecewise linear density).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.legendre import leggauss

BACKEND = "pure"

INF = math.inf
NEG_INF = -math.inf
_EPS = 2.220446049250313e-16
_SQRT2PI = math.sqrt(2.0 * math.pi)

_N7, _W7 = leggauss(7)
_N15, _W15 = leggauss(15)

# extend/sweep/split status codes
OK = 0
TOO_LARGE = 1
NO_CONV = 2


# ----------------------------------------------------------------- families

def _support(code, p):
    if code == 0:
        return p[0], p[1]
    if code == 3:
        return 0.0, INF
    if code == 4:
        return p[1], INF
    if code == 5:
        m = int(p[0])
        return p[1], p[m]
    return NEG_INF, INF


def _loc_scale(code, p):
    """A point with mass on both sides and a step size for bracket walks."""
    if code == 0:
        return 0.5 * (p[0] + p[1]), p[1] - p[0]
    if code == 1:
        return p[0], p[1]
    if code == 2:
        return p[0], p[1]
    if code == 3:
        return 1.0 / p[0], 1.0 / p[0]
    if code == 4:
        med = p[1] * 2.0 ** (1.0 / (p[0] - 1.0))
        return med, max(med - p[1], 0.01 * p[1])
    m = int(p[0])
    return 0.5 * (p[1] + p[m]), 0.5 * (p[m] - p[1])


def _kinks(code, p):
    if code == 2:
        return [p[0]]
    if code == 5:
        m = int(p[0])
        return list(p[2:m])
    return []


def pdf_vec(code, p, x):
    if code == 0:
        return np.where((x >= p[0]) & (x <= p[1]), 1.0 / (p[1] - p[0]), 0.0)
    if code == 1:
        z = (x - p[0]) / p[1]
        return np.exp(-0.5 * z * z) / (p[1] * _SQRT2PI)
    if code == 2:
        return np.exp(-np.abs(x - p[0]) / p[1]) / (2.0 * p[1])
    if code == 3:
        lam = p[0]
        out = np.zeros_like(x)
        mask = x >= 0.0
        out[mask] = lam * np.exp(-lam * x[mask])
        return out
    if code == 4:
        alpha, cut = p[0], p[1]
        out = np.zeros_like(x)
        mask = x >= cut
        out[mask] = (alpha - 1.0) * cut ** (alpha - 1.0) * x[mask] ** (-alpha)
        return out
    m = int(p[0])
    xs = p[1:1 + m]
    hs = p[1 + m:1 + 2 * m]
    out = np.interp(x, xs, hs)
    out = np.where((x < xs[0]) | (x > xs[-1]), 0.0, out)
    return out


def pdf_one(code, p, x):
    return float(pdf_vec(code, p, np.array([x]))[0])


# ------------------------------------------------------- adaptive quadrature
#
# Segment tuple: (kind, lo, hi, anchor, kappa)
#   kind 0: plain x-panel [lo, hi]
#   kind 1: left tail, x = anchor - t/(1-t), t in [lo, hi] (0..1)
#   kind 2: right tail, x = anchor + t/(1-t)
#   kind 3: right tail, x = anchor*(1-t)^(-1/kappa)  (power-law decay)

def _segments(code, p, a, b, extra, pow_kappa):
    slo, shi = _support(code, p)
    a = max(a, slo)
    b = min(b, shi)
    if not a < b:
        return []
    loc, _ = _loc_scale(code, p)
    cuts = sorted(set(_kinks(code, p)) | set(extra))
    segs = []

    if a == NEG_INF:
        anchor_l = b if b < INF else loc
        tcuts = [0.0]
        for k in reversed(cuts):
            if k < anchor_l:
                tcuts.append((anchor_l - k) / (1.0 + anchor_l - k))
        tcuts.append(1.0)
        for t0, t1 in zip(tcuts, tcuts[1:]):
            segs.append((1, t0, t1, anchor_l, 0.0))
    else:
        anchor_l = a

    if b == INF:
        anchor_r = a if a > NEG_INF else loc
        if code == 4:
            kind, kap = 3, pow_kappa
        else:
            kind, kap = 2, 0.0
        tcuts = [0.0]
        for k in cuts:
            if k > anchor_r:
                if kind == 3:
                    tcuts.append(1.0 - (anchor_r / k) ** kap)
                else:
                    tcuts.append((k - anchor_r) / (1.0 + k - anchor_r))
        tcuts.append(1.0)
        tail = [(kind, t0, t1, anchor_r, kap) for t0, t1 in zip(tcuts, tcuts[1:])]
    else:
        anchor_r = b
        tail = []

    if anchor_l < anchor_r:
        xcuts = [anchor_l] + [k for k in cuts if anchor_l < k < anchor_r] + [anchor_r]
        for x0, x1 in zip(xcuts, xcuts[1:]):
            segs.append((0, x0, x1, 0.0, 0.0))
    segs.extend(tail)
    return segs


def _panel(seg, lo, hi, fvec, nodes, weights):
    half = 0.5 * (hi - lo)
    ts = 0.5 * (lo + hi) + half * nodes
    kind = seg[0]
    # overflow/0*inf at extreme tail nodes is benign: the density underflows
    # first and those nodes carry no mass, so non-finite products become 0
    with np.errstate(all="ignore"):
        if kind == 0:
            ys = fvec(ts)
        elif kind == 1:
            om = 1.0 - ts
            ys = fvec(seg[3] - ts / om) / (om * om)
        elif kind == 2:
            om = 1.0 - ts
            ys = fvec(seg[3] + ts / om) / (om * om)
        else:
            om = 1.0 - ts
            anchor, kap = seg[3], seg[4]
            ys = fvec(anchor * om ** (-1.0 / kap)) * (
                (anchor / kap) * om ** (-1.0 / kap - 1.0))
    if not np.all(np.isfinite(ys)):
        ys = np.where(np.isfinite(ys), ys, 0.0)
    return half * (ys @ weights)


def _adaptive(segs, fvec, ncomp, ctrl, rtol, atol, maxdepth):
    total = np.zeros(ncomp)
    err = 0.0
    if not segs:
        return total, err
    seg_budget = atol / len(segs)
    for seg in segs:
        stack = [(seg[1], seg[2], seg_budget, 0)]
        while stack:
            lo, hi, budget, depth = stack.pop()
            v7 = _panel(seg, lo, hi, fvec, _N7, _W7)
            v15 = _panel(seg, lo, hi, fvec, _N15, _W15)
            d = np.abs(v15 - v7)
            ok = True
            for j in ctrl:
                if d[j] > budget + rtol * abs(v15[j]):
                    ok = False
                    break
            if (ok or depth >= maxdepth
                    or hi - lo <= 8.0 * _EPS * max(abs(lo), abs(hi), 1e-290)):
                total += v15
                err += float(max(d[j] for j in ctrl))
            else:
                mid = 0.5 * (lo + hi)
                stack.append((mid, hi, 0.5 * budget, depth + 1))
                stack.append((lo, mid, 0.5 * budget, depth + 1))
    return total, err


def _fused_f(code, p, ref):
    def f(x):
        h = pdf_vec(code, p, x)
        d = x - ref
        return np.vstack((h, d * h, d * d * h))
    return f


def _power_f(code, p, c, e):
    if e == 0.0:
        def f(x):
            return pdf_vec(code, p, x)[None, :]
    else:
        def f(x):
            return (np.abs(x - c) ** e * pdf_vec(code, p, x))[None, :]
    return f


# ------------------------------------------------------------- root helpers

def _brent(f, a, b, fa, fb, xtol, ftol, maxiter):
    """Bracketed root of f on [a, b] with fa*fb <= 0 (classic Brent)."""
    if fa == 0.0:
        return a, fa
    if fb == 0.0:
        return b, fb
    c, fc = a, fa
    d = e = b - a
    for _ in range(int(maxiter)):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * abs(b) + 0.5 * xtol
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0 or abs(fb) <= ftol:
            return b, fb
        if abs(e) < tol or abs(fa) <= abs(fb):
            d = e = m
        else:
            s = fb / fa
            if a == c:
                pp = 2.0 * m * s
                qq = 1.0 - s
            else:
                qq = fa / fc
                rr = fb / fc
                pp = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0))
                qq = (qq - 1.0) * (rr - 1.0) * (s - 1.0)
            if pp > 0.0:
                qq = -qq
            else:
                pp = -pp
            if 2.0 * pp < min(3.0 * m * qq - abs(tol * qq), abs(e * qq)):
                e = d
                d = pp / qq
            else:
                d = e = m
        a, fa = b, fb
        if abs(d) > tol:
            b += d
        elif m > 0.0:
            b += tol
        else:
            b -= tol
        fb = f(b)
    return b, fb


def _bisect_leftmost(f, lo, hi, xtol, maxiter):
    """Smallest x with f(x) >= 0, given f(lo) < 0 <= f(hi) and f monotone
    up to flat stretches (used for supports with interior gaps)."""
    for _ in range(int(maxiter)):
        if hi - lo <= max(xtol, 4.0 * _EPS * max(abs(lo), abs(hi), 1.0)):
            break
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


# ------------------------------------------------------------- kernel entry

def pm(code, p, a, b, c, r, rtol, atol, maxdepth):
    """(value, err) of the partial moment  integral |x-c|^r h(x) dx over [a,b]."""
    slo, shi = _support(code, p)
    A = max(a, slo)
    B = min(b, shi)
    if not A < B:
        return 0.0, 0.0
    if B == INF and code == 4 and p[0] - r <= 1.0:
        return INF, INF
    extra = (c,) if (A < c < B and r != 0.0) else ()
    segs = _segments(code, p, A, B, extra, p[0] - r - 1.0 if code == 4 else 0.0)
    v, err = _adaptive(segs, _power_f(code, p, c, r), 1, (0,), rtol, atol, int(maxdepth))
    return float(v[0]), err


def hpow(code, p, a, b, pexp, rtol, atol, maxdepth):
    """(value, err) of  integral h(x)^pexp dx over [a,b]."""
    slo, shi = _support(code, p)
    A = max(a, slo)
    B = min(b, shi)
    if not A < B:
        return 0.0, 0.0
    if B == INF and code == 4 and p[0] * pexp <= 1.0:
        return INF, INF

    def f(x):
        return (pdf_vec(code, p, x) ** pexp)[None, :]

    segs = _segments(code, p, A, B, (), p[0] * pexp - 1.0 if code == 4 else 0.0)
    v, err = _adaptive(segs, f, 1, (0,), rtol, atol, int(maxdepth))
    return float(v[0]), err


def mom2(code, p, a, b, rtol, atol, maxdepth):
    """(mass, centroid, moment, err) for r = 2: one fused quadrature pass.

    centroid is the conditional mean, moment the optimally-centered second
    moment; both come from local moments about a cancellation-safe reference.
    """
    slo, shi = _support(code, p)
    A = max(a, slo)
    B = min(b, shi)
    if not A < B:
        return 0.0, math.nan, 0.0, 0.0
    if B == INF and code == 4 and p[0] <= 3.0:
        return math.nan, math.nan, INF, INF
    if A == NEG_INF:
        ref = B if B < INF else _loc_scale(code, p)[0]
    elif B == INF:
        ref = A
    else:
        ref = 0.5 * (A + B)
    segs = _segments(code, p, A, B, (), p[0] - 3.0 if code == 4 else 0.0)
    (j0, j1, j2), err = _adaptive(segs, _fused_f(code, p, ref), 3, (0, 2),
                                  rtol, atol, int(maxdepth))
    if not j0 > 0.0:
        return max(j0, 0.0), math.nan, 0.0, err
    c = ref + j1 / j0
    c = min(max(c, A), B)
    m = j2 - j1 * (j1 / j0)
    return j0, c, max(m, 0.0), err


def momr(code, p, a, b, r, clo, chi, rtol, atol, maxdepth, xtol, maxiter):
    """(mass, centroid, moment, err) for general r > 1.

    The centroid solves  integral sign(c-x)|x-c|^(r-1) h dx = 0  by a
    bracketed monotone solve; clo/chi are optional finite bracket hints.
    """
    slo, shi = _support(code, p)
    A = max(a, slo)
    B = min(b, shi)
    if not A < B:
        return 0.0, math.nan, 0.0, 0.0
    if B == INF and code == 4 and p[0] - r <= 1.0:
        return math.nan, math.nan, INF, INF
    j0, _ = pm(code, p, A, B, 0.0, 0.0, rtol, atol, maxdepth)
    if not j0 > 0.0:
        return 0.0, math.nan, 0.0, 0.0
    loc, scale = _loc_scale(code, p)

    def g(cc):
        left, _ = pm(code, p, A, cc, cc, r - 1.0, rtol, atol, maxdepth)
        right, _ = pm(code, p, cc, B, cc, r - 1.0, rtol, atol, maxdepth)
        return left - right

    if A > NEG_INF:
        lo, flo = A, None
    else:
        lo = clo if math.isfinite(clo) else (B if B < INF else loc) - scale
        flo = g(lo)
        step = scale
        for _ in range(200):
            if flo <= 0.0:
                break
            lo -= step
            step *= 2.0
            flo = g(lo)
    if B < INF:
        hi, fhi = B, None
    else:
        hi = chi if math.isfinite(chi) else (A if A > NEG_INF else loc) + scale
        if not hi > lo:
            hi = lo + scale
        fhi = g(hi)
        step = scale
        for _ in range(200):
            if fhi >= 0.0:
                break
            hi += step
            step *= 2.0
            fhi = g(hi)
    if flo is None:
        flo = g(lo)
    if fhi is None:
        fhi = g(hi)
    c, _ = _brent(g, lo, hi, flo, fhi,
                  max(xtol, 4.0 * _EPS * (abs(lo) + abs(hi) + 1.0)), 0.0, maxiter)
    c = min(max(c, A), B)
    m, err = pm(code, p, A, B, c, r, rtol, atol, maxdepth)
    return j0, c, m, err


def cellmom(code, p, a, b, r, opts):
    """Dispatch to the fused r=2 path or the general-r path."""
    rtol, atol, maxdepth, xtol, mrel, maxiter = opts
    if r == 2.0:
        return mom2(code, p, a, b, rtol, atol, int(maxdepth))
    return momr(code, p, a, b, r, NEG_INF, INF,
                rtol, atol, int(maxdepth), xtol, int(maxiter))


def extend(code, p, a, target, r, hint, leftmost, opts):
    """Smallest b with optimally-centered cell moment of [a, b] == target.

    Returns (b, status); status TOO_LARGE when target exceeds the remaining
    tail moment, NO_CONV on a non-finite moment. ``hint`` seeds the bracket
    width (previous cell width during a sweep)."""
    rtol, atol, maxdepth, xtol, mrel, maxiter = opts
    slo, shi = _support(code, p)
    if target == 0.0:
        return a, OK
    mfull = cellmom(code, p, a, INF, r, opts)[2]
    if not math.isfinite(mfull):
        return math.nan, NO_CONV
    if target > mfull * (1.0 + 10.0 * mrel):
        return math.nan, TOO_LARGE
    if target >= mfull * (1.0 - mrel):
        return shi, OK
    loc, scale = _loc_scale(code, p)

    def f(x):
        return cellmom(code, p, a, x, r, opts)[2] - target

    if max(a, slo) == NEG_INF:
        x0, fx0 = loc, f(loc)
        if fx0 >= 0.0:
            hi, fhi = x0, fx0
            lo, step = x0, scale
            for _ in range(300):
                lo -= step
                step *= 2.0
                flo = f(lo)
                if flo < 0.0:
                    break
                hi, fhi = lo, flo
            else:
                return math.nan, NO_CONV
        else:
            lo, flo = x0, fx0
            hi, step = x0, scale
            for _ in range(300):
                hi += step
                step *= 2.0
                fhi = f(hi)
                if fhi >= 0.0:
                    break
                lo, flo = hi, fhi
            else:
                return math.nan, NO_CONV
    else:
        lo, flo = max(a, slo), -target
        w = hint if hint > 0.0 else scale
        hi = lo + max(w, 4.0 * _EPS * max(abs(lo), 1.0))
        fhi = f(hi)
        for _ in range(300):
            if fhi >= 0.0:
                break
            lo, flo = hi, fhi
            w *= 2.0
            hi = hi + w
            if shi < INF and hi >= shi:
                hi, fhi = shi, mfull - target
                break
            fhi = f(hi)
        else:
            return math.nan, NO_CONV
    xtol_eff = max(xtol, 4.0 * _EPS * max(abs(lo), abs(hi), 1.0))
    if leftmost:
        return _bisect_leftmost(f, lo, hi, xtol_eff, maxiter), OK
    b, _ = _brent(f, lo, hi, flo, fhi, xtol_eff, mrel * target, maxiter)
    return b, OK


def sweep(code, p, n, target, r, leftmost, opts):
    """Greedy left-to-right pass: n-1 equal-moment cells, then the residual
    (tail moment minus target). Returns (boundaries, residual, status)."""
    bounds = np.empty(n - 1)
    a = NEG_INF
    hint = 0.0
    for i in range(n - 1):
        b, st = extend(code, p, a, target, r, hint, leftmost, opts)
        if st == TOO_LARGE:
            bounds[i:] = bounds[i - 1] if i > 0 else 0.0
            return bounds, -target, OK
        if st != OK or b != b:
            return bounds, math.nan, NO_CONV
        hint = (b - a) if a > NEG_INF else 0.0
        bounds[i] = b
        a = b
    mt = cellmom(code, p, a, INF, r, opts)[2]
    return bounds, mt - target, OK


def split2(code, p, a, b, r, leftmost, opts):
    """Point s with equal optimally-centered moments on [a,s] and [s,b]."""
    rtol, atol, maxdepth, xtol, mrel, maxiter = opts
    slo, shi = _support(code, p)
    A = max(a, slo)
    B = min(b, shi)
    if not A < B:
        return math.nan, NO_CONV
    mtot = cellmom(code, p, a, b, r, opts)[2]
    if not (mtot > 0.0 and math.isfinite(mtot)):
        return math.nan, NO_CONV
    loc, scale = _loc_scale(code, p)

    def V(s):
        ml = cellmom(code, p, a, s, r, opts)[2]
        mr = cellmom(code, p, s, b, r, opts)[2]
        return ml - mr

    if A > NEG_INF:
        lo, flo = A, -mtot
    else:
        lo = B if B < INF else loc
        flo = V(lo)
        step = scale
        for _ in range(300):
            if flo <= 0.0:
                break
            lo -= step
            step *= 2.0
            flo = V(lo)
    if B < INF:
        hi, fhi = B, mtot
    else:
        hi = A if A > NEG_INF else loc
        fhi = V(hi) if hi != lo else (flo if flo is not None else V(hi))
        step = scale
        for _ in range(300):
            if fhi >= 0.0:
                break
            hi += step
            step *= 2.0
            fhi = V(hi)
    if flo == 0.0:
        return lo, OK
    xtol_eff = max(xtol, 4.0 * _EPS * max(abs(lo), abs(hi), 1.0))
    if leftmost:
        return _bisect_leftmost(V, lo, hi, xtol_eff, maxiter), OK
    s, _ = _brent(V, lo, hi, flo, fhi, xtol_eff, 0.25 * mrel * mtot, maxiter)
    return s, OK
