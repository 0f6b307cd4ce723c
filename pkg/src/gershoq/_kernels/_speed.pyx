# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: same contract as the pure backend (see _pure.py).

Hot path: adaptive Gauss-Legendre 7/15 cell moments inside bracketed root
solves, all in C. Family encoding, segment/tail handling and solver logic
mirror the pure backend; results agree to quadrature tolerance (not bitwise).
"""

import numpy as np
from numpy.polynomial.legendre import leggauss

cimport cython
from libc.math cimport (HUGE_VAL, NAN, exp as c_exp, fabs, isfinite, log as c_log,
                        pow as c_pow, sqrt as c_sqrt)

BACKEND = "compiled"

OK = 0
TOO_LARGE = 1
NO_CONV = 2

cdef int _OK = 0
cdef int _TOO_LARGE = 1
cdef int _NO_CONV = 2

cdef double INF = HUGE_VAL
cdef double _EPS = 2.220446049250313e-16
cdef double _SQRT2PI = 2.5066282746310002

cdef double _N7[7]
cdef double _W7[7]
cdef double _N15[15]
cdef double _W15[15]

_n7, _w7 = leggauss(7)
_n15, _w15 = leggauss(15)
for _i in range(7):
    _N7[_i] = _n7[_i]
    _W7[_i] = _w7[_i]
for _i in range(15):
    _N15[_i] = _n15[_i]
    _W15[_i] = _w15[_i]
del _n7, _w7, _n15, _w15, _i


# ----------------------------------------------------------------- families

cdef inline double pdf_c(int code, double[::1] p, double x) noexcept nogil:
    cdef double z, lam, alpha, cut
    cdef int m, lo, hi, mid
    if code == 0:
        if x >= p[0] and x <= p[1]:
            return 1.0 / (p[1] - p[0])
        return 0.0
    if code == 1:
        z = (x - p[0]) / p[1]
        return c_exp(-0.5 * z * z) / (p[1] * _SQRT2PI)
    if code == 2:
        return c_exp(-fabs(x - p[0]) / p[1]) / (2.0 * p[1])
    if code == 3:
        lam = p[0]
        if x >= 0.0:
            return lam * c_exp(-lam * x)
        return 0.0
    if code == 4:
        alpha = p[0]
        cut = p[1]
        if x >= cut:
            return (alpha - 1.0) * c_pow(cut, alpha - 1.0) * c_pow(x, -alpha)
        return 0.0
    # tabulated: binary search for the segment
    m = <int> p[0]
    if x < p[1] or x > p[m]:
        return 0.0
    lo = 0
    hi = m - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if p[1 + mid] <= x:
            lo = mid
        else:
            hi = mid
    z = (x - p[1 + lo]) / (p[1 + hi] - p[1 + lo])
    return p[1 + m + lo] * (1.0 - z) + p[1 + m + hi] * z


cdef inline void _support_c(int code, double[::1] p, double* slo, double* shi) noexcept nogil:
    if code == 0:
        slo[0] = p[0]
        shi[0] = p[1]
    elif code == 3:
        slo[0] = 0.0
        shi[0] = INF
    elif code == 4:
        slo[0] = p[1]
        shi[0] = INF
    elif code == 5:
        slo[0] = p[1]
        shi[0] = p[<int> p[0]]
    else:
        slo[0] = -INF
        shi[0] = INF


cdef inline void _loc_scale_c(int code, double[::1] p, double* loc, double* scale) noexcept nogil:
    cdef double med
    cdef int m
    if code == 0:
        loc[0] = 0.5 * (p[0] + p[1])
        scale[0] = p[1] - p[0]
    elif code == 1 or code == 2:
        loc[0] = p[0]
        scale[0] = p[1]
    elif code == 3:
        loc[0] = 1.0 / p[0]
        scale[0] = 1.0 / p[0]
    elif code == 4:
        med = p[1] * c_pow(2.0, 1.0 / (p[0] - 1.0))
        loc[0] = med
        scale[0] = med - p[1] if med - p[1] > 0.01 * p[1] else 0.01 * p[1]
    else:
        m = <int> p[0]
        loc[0] = 0.5 * (p[1] + p[m])
        scale[0] = 0.5 * (p[m] - p[1])


# ------------------------------------------------------- adaptive quadrature
#
# Integrand kinds: 0 fused (h, (x-ref)h, (x-ref)^2 h); 1 |x-cc|^ee * h;
# 2 h^ee. Transform kinds as in _pure: 0 plain, 1 left rational tail,
# 2 right rational tail, 3 right power-matched tail.

cdef void _panel(int code, double[::1] p, int tkind, double anchor, double kappa,
                 int ikind, double ref, double cc, double ee,
                 double lo, double hi, int order, double* out) noexcept nogil:
    cdef double half = 0.5 * (hi - lo)
    cdef double mid = 0.5 * (lo + hi)
    cdef double t, x, w, h, d, v0, v1, v2, om
    cdef int i, n
    cdef double* nodes
    cdef double* weights
    if order == 7:
        n = 7
        nodes = _N7
        weights = _W7
    else:
        n = 15
        nodes = _N15
        weights = _W15
    v0 = 0.0
    v1 = 0.0
    v2 = 0.0
    for i in range(n):
        t = mid + half * nodes[i]
        if tkind == 0:
            x = t
            w = weights[i]
        elif tkind == 1:
            om = 1.0 - t
            x = anchor - t / om
            w = weights[i] / (om * om)
        elif tkind == 2:
            om = 1.0 - t
            x = anchor + t / om
            w = weights[i] / (om * om)
        else:
            om = 1.0 - t
            x = anchor * c_pow(om, -1.0 / kappa)
            w = weights[i] * (anchor / kappa) * c_pow(om, -1.0 / kappa - 1.0)
        h = pdf_c(code, p, x)
        if h <= 0.0 or not isfinite(w * h):
            continue
        if ikind == 0:
            d = x - ref
            v0 += w * h
            v1 += w * d * h
            v2 += w * d * d * h
        elif ikind == 1:
            if ee == 0.0:
                v0 += w * h
            else:
                v0 += w * c_pow(fabs(x - cc), ee) * h
        else:
            v0 += w * c_pow(h, ee)
    out[0] = half * v0
    out[1] = half * v1
    out[2] = half * v2


cdef void _adapt_seg(int code, double[::1] p, int tkind, double anchor, double kappa,
                     int ikind, double ref, double cc, double ee,
                     double lo0, double hi0, double rtol, double atol, int maxdepth,
                     double* acc, double* errac) noexcept nogil:
    cdef double stack[1024]
    cdef int top = 0
    cdef double lo, hi, budget, mid, e0, e2, scale
    cdef int depth, ctrl2
    cdef double v7[3]
    cdef double v15[3]
    ctrl2 = 1 if ikind == 0 else 0
    stack[0] = lo0
    stack[1] = hi0
    stack[2] = atol
    stack[3] = 0.0
    top = 1
    while top > 0:
        top -= 1
        lo = stack[4 * top]
        hi = stack[4 * top + 1]
        budget = stack[4 * top + 2]
        depth = <int> stack[4 * top + 3]
        _panel(code, p, tkind, anchor, kappa, ikind, ref, cc, ee, lo, hi, 7, v7)
        _panel(code, p, tkind, anchor, kappa, ikind, ref, cc, ee, lo, hi, 15, v15)
        e0 = fabs(v15[0] - v7[0])
        e2 = fabs(v15[2] - v7[2]) if ctrl2 else 0.0
        scale = fabs(lo)
        if fabs(hi) > scale:
            scale = fabs(hi)
        if scale < 1e-290:
            scale = 1e-290
        if ((e0 <= budget + rtol * fabs(v15[0])
             and (not ctrl2 or e2 <= budget + rtol * fabs(v15[2])))
                or depth >= maxdepth
                or hi - lo <= 8.0 * _EPS * scale
                or top >= 254):
            acc[0] += v15[0]
            acc[1] += v15[1]
            acc[2] += v15[2]
            errac[0] += e0 if e0 > e2 else e2
        else:
            mid = 0.5 * (lo + hi)
            stack[4 * top] = mid
            stack[4 * top + 1] = hi
            stack[4 * top + 2] = 0.5 * budget
            stack[4 * top + 3] = depth + 1
            top += 1
            stack[4 * top] = lo
            stack[4 * top + 1] = mid
            stack[4 * top + 2] = 0.5 * budget
            stack[4 * top + 3] = depth + 1
            top += 1


cdef int _integrate(int code, double[::1] p, double a, double b,
                    int ikind, double ref, double cc, double ee, double pow_kappa,
                    double rtol, double atol, int maxdepth,
                    double* out, double* errout) noexcept nogil:
    """Clip [a,b] to the support, split at kinks/tails, integrate.

    Returns 0 on success, 1 when the requested tail integral diverges.
    """
    cdef double slo, shi, loc, scale, anchor_l, anchor_r, t0, t1, prev, nxt
    cdef double kink = NAN
    cdef double kap
    cdef int tkind, m, i, ilo, ihi, has_kink
    _support_c(code, p, &slo, &shi)
    if a < slo:
        a = slo
    if b > shi:
        b = shi
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    errout[0] = 0.0
    if not a < b:
        return 0
    _loc_scale_c(code, p, &loc, &scale)
    has_kink = 1 if code == 2 else 0
    if has_kink:
        kink = p[0]

    # left tail
    if a == -INF:
        anchor_l = b if b < INF else loc
        if has_kink and kink < anchor_l:
            t0 = (anchor_l - kink) / (1.0 + anchor_l - kink)
            _adapt_seg(code, p, 1, anchor_l, 0.0, ikind, ref, cc, ee,
                       0.0, t0, rtol, atol, maxdepth, out, errout)
            _adapt_seg(code, p, 1, anchor_l, 0.0, ikind, ref, cc, ee,
                       t0, 1.0, rtol, atol, maxdepth, out, errout)
        else:
            _adapt_seg(code, p, 1, anchor_l, 0.0, ikind, ref, cc, ee,
                       0.0, 1.0, rtol, atol, maxdepth, out, errout)
    else:
        anchor_l = a

    # right tail
    if b == INF:
        anchor_r = a if a > -INF else loc
        if code == 4:
            tkind = 3
            kap = pow_kappa
            if kap <= 0.0:
                out[0] = INF
                out[2] = INF
                errout[0] = INF
                return 1
        else:
            tkind = 2
            kap = 0.0
        if has_kink and kink > anchor_r:
            t0 = (kink - anchor_r) / (1.0 + kink - anchor_r)
            _adapt_seg(code, p, tkind, anchor_r, kap, ikind, ref, cc, ee,
                       0.0, t0, rtol, atol, maxdepth, out, errout)
            _adapt_seg(code, p, tkind, anchor_r, kap, ikind, ref, cc, ee,
                       t0, 1.0, rtol, atol, maxdepth, out, errout)
        else:
            _adapt_seg(code, p, tkind, anchor_r, kap, ikind, ref, cc, ee,
                       0.0, 1.0, rtol, atol, maxdepth, out, errout)
    else:
        anchor_r = b

    # finite span, split at density kinks and at the |x-cc| kink
    if anchor_l < anchor_r:
        prev = anchor_l
        if code == 5:
            m = <int> p[0]
            ilo = 0
            while ilo < m and p[1 + ilo] <= anchor_l:
                ilo += 1
            # walk knots inside (anchor_l, anchor_r), weaving in cc
            for i in range(ilo, m):
                nxt = p[1 + i]
                if nxt >= anchor_r:
                    break
                if ikind == 1 and ee != 0.0 and prev < cc < nxt:
                    _adapt_seg(code, p, 0, 0.0, 0.0, ikind, ref, cc, ee,
                               prev, cc, rtol, atol, maxdepth, out, errout)
                    prev = cc
                _adapt_seg(code, p, 0, 0.0, 0.0, ikind, ref, cc, ee,
                           prev, nxt, rtol, atol, maxdepth, out, errout)
                prev = nxt
        elif has_kink and anchor_l < kink < anchor_r:
            if ikind == 1 and ee != 0.0 and prev < cc < kink:
                _adapt_seg(code, p, 0, 0.0, 0.0, ikind, ref, cc, ee,
                           prev, cc, rtol, atol, maxdepth, out, errout)
                prev = cc
            _adapt_seg(code, p, 0, 0.0, 0.0, ikind, ref, cc, ee,
                       prev, kink, rtol, atol, maxdepth, out, errout)
            prev = kink
        if ikind == 1 and ee != 0.0 and prev < cc < anchor_r:
            _adapt_seg(code, p, 0, 0.0, 0.0, ikind, ref, cc, ee,
                       prev, cc, rtol, atol, maxdepth, out, errout)
            prev = cc
        _adapt_seg(code, p, 0, 0.0, 0.0, ikind, ref, cc, ee,
                   prev, anchor_r, rtol, atol, maxdepth, out, errout)
    return 0


# ------------------------------------------------------------- C-level ops

cdef int pm_c(int code, double[::1] p, double a, double b, double c, double r,
              double rtol, double atol, int maxdepth,
              double* val, double* err) noexcept nogil:
    cdef double out[3]
    cdef double e = 0.0
    cdef double slo, shi
    _support_c(code, p, &slo, &shi)
    if b == INF and code == 4 and p[0] - r <= 1.0:
        val[0] = INF
        err[0] = INF
        return 1
    if _integrate(code, p, a, b, 1, 0.0, c, r, p[0] - r - 1.0 if code == 4 else 0.0,
                  rtol, atol, maxdepth, out, &e):
        val[0] = INF
        err[0] = INF
        return 1
    val[0] = out[0]
    err[0] = e
    return 0


cdef int mom2_c(int code, double[::1] p, double a, double b,
                double rtol, double atol, int maxdepth,
                double* j0, double* cen, double* mom, double* err) noexcept nogil:
    cdef double slo, shi, ref, loc, scale, m
    cdef double out[3]
    cdef double e = 0.0
    _support_c(code, p, &slo, &shi)
    if a < slo:
        a = slo
    if b > shi:
        b = shi
    if not a < b:
        j0[0] = 0.0
        cen[0] = NAN
        mom[0] = 0.0
        err[0] = 0.0
        return 0
    if b == INF and code == 4 and p[0] <= 3.0:
        j0[0] = NAN
        cen[0] = NAN
        mom[0] = INF
        err[0] = INF
        return 1
    if a == -INF:
        if b < INF:
            ref = b
        else:
            _loc_scale_c(code, p, &loc, &scale)
            ref = loc
    elif b == INF:
        ref = a
    else:
        ref = 0.5 * (a + b)
    _integrate(code, p, a, b, 0, ref, 0.0, 0.0, p[0] - 3.0 if code == 4 else 0.0,
               rtol, atol, maxdepth, out, &e)
    if not out[0] > 0.0:
        j0[0] = out[0] if out[0] > 0.0 else 0.0
        cen[0] = NAN
        mom[0] = 0.0
        err[0] = e
        return 0
    j0[0] = out[0]
    cen[0] = ref + out[1] / out[0]
    if cen[0] < a:
        cen[0] = a
    if cen[0] > b:
        cen[0] = b
    m = out[2] - out[1] * (out[1] / out[0])
    mom[0] = m if m > 0.0 else 0.0
    err[0] = e
    return 0


cdef double _gderiv(int code, double[::1] p, double A, double B, double cc, double r,
                    double rtol, double atol, int maxdepth) noexcept nogil:
    cdef double left, right, e1, e2
    pm_c(code, p, A, cc, cc, r - 1.0, rtol, atol, maxdepth, &left, &e1)
    pm_c(code, p, cc, B, cc, r - 1.0, rtol, atol, maxdepth, &right, &e2)
    return left - right


cdef int momr_c(int code, double[::1] p, double a, double b, double r,
                double clo, double chi, double rtol, double atol, int maxdepth,
                double xtol, int maxiter,
                double* j0, double* cen, double* mom, double* err) noexcept nogil:
    cdef double slo, shi, loc, scale, lo, hi, flo, fhi, step, e0
    cdef double A, B, c, fc, d, e, s, pp, qq, rr, tol, mm
    cdef double brak_a, brak_b, brak_c, fa, fb
    cdef int i
    _support_c(code, p, &slo, &shi)
    A = a if a > slo else slo
    B = b if b < shi else shi
    if not A < B:
        j0[0] = 0.0
        cen[0] = NAN
        mom[0] = 0.0
        err[0] = 0.0
        return 0
    if B == INF and code == 4 and p[0] - r <= 1.0:
        j0[0] = NAN
        cen[0] = NAN
        mom[0] = INF
        err[0] = INF
        return 1
    pm_c(code, p, A, B, 0.0, 0.0, rtol, atol, maxdepth, j0, &e0)
    if not j0[0] > 0.0:
        j0[0] = 0.0
        cen[0] = NAN
        mom[0] = 0.0
        err[0] = 0.0
        return 0
    _loc_scale_c(code, p, &loc, &scale)
    if A > -INF:
        lo = A
        flo = NAN
    else:
        lo = clo if isfinite(clo) else (B if B < INF else loc) - scale
        flo = _gderiv(code, p, A, B, lo, r, rtol, atol, maxdepth)
        step = scale
        for i in range(200):
            if flo <= 0.0:
                break
            lo -= step
            step *= 2.0
            flo = _gderiv(code, p, A, B, lo, r, rtol, atol, maxdepth)
    if B < INF:
        hi = B
        fhi = NAN
    else:
        hi = chi if isfinite(chi) else (A if A > -INF else loc) + scale
        if not hi > lo:
            hi = lo + scale
        fhi = _gderiv(code, p, A, B, hi, r, rtol, atol, maxdepth)
        step = scale
        for i in range(200):
            if fhi >= 0.0:
                break
            hi += step
            step *= 2.0
            fhi = _gderiv(code, p, A, B, hi, r, rtol, atol, maxdepth)
    if flo != flo:
        flo = _gderiv(code, p, A, B, lo, r, rtol, atol, maxdepth)
    if fhi != fhi:
        fhi = _gderiv(code, p, A, B, hi, r, rtol, atol, maxdepth)

    # Brent on the derivative sign (see _brent in the pure backend)
    xtol = xtol if xtol > 4.0 * _EPS * (fabs(lo) + fabs(hi) + 1.0) \
        else 4.0 * _EPS * (fabs(lo) + fabs(hi) + 1.0)
    brak_a = lo
    fa = flo
    brak_b = hi
    fb = fhi
    if fa == 0.0:
        brak_b = brak_a
        fb = 0.0
    brak_c = brak_a
    fc = fa
    d = brak_b - brak_a
    e = d
    for i in range(maxiter):
        if fb == 0.0:
            break
        if fb * fc > 0.0:
            brak_c = brak_a
            fc = fa
            d = brak_b - brak_a
            e = d
        if fabs(fc) < fabs(fb):
            brak_a = brak_b
            brak_b = brak_c
            brak_c = brak_a
            fa = fb
            fb = fc
            fc = fa
        tol = 2.0 * _EPS * fabs(brak_b) + 0.5 * xtol
        mm = 0.5 * (brak_c - brak_b)
        if fabs(mm) <= tol or fb == 0.0:
            break
        if fabs(e) < tol or fabs(fa) <= fabs(fb):
            d = mm
            e = mm
        else:
            s = fb / fa
            if brak_a == brak_c:
                pp = 2.0 * mm * s
                qq = 1.0 - s
            else:
                qq = fa / fc
                rr = fb / fc
                pp = s * (2.0 * mm * qq * (qq - rr) - (brak_b - brak_a) * (rr - 1.0))
                qq = (qq - 1.0) * (rr - 1.0) * (s - 1.0)
            if pp > 0.0:
                qq = -qq
            else:
                pp = -pp
            if 2.0 * pp < (3.0 * mm * qq - fabs(tol * qq) if
                           3.0 * mm * qq - fabs(tol * qq) < fabs(e * qq) else fabs(e * qq)):
                e = d
                d = pp / qq
            else:
                d = mm
                e = mm
        brak_a = brak_b
        fa = fb
        if fabs(d) > tol:
            brak_b += d
        elif mm > 0.0:
            brak_b += tol
        else:
            brak_b -= tol
        fb = _gderiv(code, p, A, B, brak_b, r, rtol, atol, maxdepth)
    c = brak_b
    if c < A:
        c = A
    if c > B:
        c = B
    cen[0] = c
    pm_c(code, p, A, B, c, r, rtol, atol, maxdepth, mom, err)
    return 0


cdef int cellmom_c(int code, double[::1] p, double a, double b, double r,
                   double rtol, double atol, int maxdepth, double xtol, int maxiter,
                   double* j0, double* cen, double* mom, double* err) noexcept nogil:
    if r == 2.0:
        return mom2_c(code, p, a, b, rtol, atol, maxdepth, j0, cen, mom, err)
    return momr_c(code, p, a, b, r, -INF, INF, rtol, atol, maxdepth, xtol, maxiter,
                  j0, cen, mom, err)


cdef double _cellmoment(int code, double[::1] p, double a, double b, double r,
                        double rtol, double atol, int maxdepth, double xtol,
                        int maxiter) noexcept nogil:
    cdef double j0, cen, mom, err
    cellmom_c(code, p, a, b, r, rtol, atol, maxdepth, xtol, maxiter,
              &j0, &cen, &mom, &err)
    if not j0 > 0.0:
        return 0.0
    return mom


cdef double _brent_moment(int code, double[::1] p, double a, double target, double r,
                          double lo, double flo, double hi, double fhi,
                          double xtol, double ftol, int maxiter,
                          double rtol, double atol, int maxdepth) noexcept nogil:
    """Brent solve of cellmoment(a, x) - target = 0 on the bracket."""
    cdef double brak_a = lo, fa = flo, brak_b = hi, fb = fhi
    cdef double brak_c, fc, d, e, s, pp, qq, rr, tol, mm
    cdef int i
    if fa == 0.0:
        return brak_a
    if fb == 0.0:
        return brak_b
    brak_c = brak_a
    fc = fa
    d = brak_b - brak_a
    e = d
    for i in range(maxiter):
        if fb * fc > 0.0:
            brak_c = brak_a
            fc = fa
            d = brak_b - brak_a
            e = d
        if fabs(fc) < fabs(fb):
            brak_a = brak_b
            brak_b = brak_c
            brak_c = brak_a
            fa = fb
            fb = fc
            fc = fa
        tol = 2.0 * _EPS * fabs(brak_b) + 0.5 * xtol
        mm = 0.5 * (brak_c - brak_b)
        if fabs(mm) <= tol or fb == 0.0 or fabs(fb) <= ftol:
            return brak_b
        if fabs(e) < tol or fabs(fa) <= fabs(fb):
            d = mm
            e = mm
        else:
            s = fb / fa
            if brak_a == brak_c:
                pp = 2.0 * mm * s
                qq = 1.0 - s
            else:
                qq = fa / fc
                rr = fb / fc
                pp = s * (2.0 * mm * qq * (qq - rr) - (brak_b - brak_a) * (rr - 1.0))
                qq = (qq - 1.0) * (rr - 1.0) * (s - 1.0)
            if pp > 0.0:
                qq = -qq
            else:
                pp = -pp
            if 2.0 * pp < (3.0 * mm * qq - fabs(tol * qq) if
                           3.0 * mm * qq - fabs(tol * qq) < fabs(e * qq) else fabs(e * qq)):
                e = d
                d = pp / qq
            else:
                d = mm
                e = mm
        brak_a = brak_b
        fa = fb
        if fabs(d) > tol:
            brak_b += d
        elif mm > 0.0:
            brak_b += tol
        else:
            brak_b -= tol
        fb = _cellmoment(code, p, a, brak_b, r, rtol, atol, maxdepth, xtol, maxiter) - target
    return brak_b


cdef double _bisect_leftmost_moment(int code, double[::1] p, double a, double target,
                                    double r, double lo, double hi, double xtol,
                                    int maxiter, double rtol, double atol,
                                    int maxdepth) noexcept nogil:
    cdef double mid, tol
    cdef int i
    for i in range(maxiter):
        tol = xtol
        if 4.0 * _EPS * fabs(lo) > tol:
            tol = 4.0 * _EPS * fabs(lo)
        if 4.0 * _EPS * fabs(hi) > tol:
            tol = 4.0 * _EPS * fabs(hi)
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if _cellmoment(code, p, a, mid, r, rtol, atol, maxdepth, xtol, maxiter) - target >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


cdef int extend_c(int code, double[::1] p, double a, double target, double r,
                  double hint, int leftmost,
                  double rtol, double atol, int maxdepth, double xtol,
                  double mrel, int maxiter, double* bout) noexcept nogil:
    cdef double slo, shi, mfull, loc, scale, lo, hi, flo, fhi, w, x0, fx0, step
    cdef double xtol_eff
    cdef int i, found
    _support_c(code, p, &slo, &shi)
    if target == 0.0:
        bout[0] = a
        return _OK
    mfull = _cellmoment(code, p, a, INF, r, rtol, atol, maxdepth, xtol, maxiter)
    if not isfinite(mfull):
        bout[0] = NAN
        return _NO_CONV
    if target > mfull * (1.0 + 10.0 * mrel):
        bout[0] = NAN
        return _TOO_LARGE
    if target >= mfull * (1.0 - mrel):
        bout[0] = shi
        return _OK
    _loc_scale_c(code, p, &loc, &scale)
    if (a if a > slo else slo) == -INF:
        x0 = loc
        fx0 = _cellmoment(code, p, a, x0, r, rtol, atol, maxdepth, xtol, maxiter) - target
        found = 0
        if fx0 >= 0.0:
            hi = x0
            fhi = fx0
            lo = x0
            step = scale
            for i in range(300):
                lo -= step
                step *= 2.0
                flo = _cellmoment(code, p, a, lo, r, rtol, atol, maxdepth, xtol, maxiter) - target
                if flo < 0.0:
                    found = 1
                    break
                hi = lo
                fhi = flo
        else:
            lo = x0
            flo = fx0
            hi = x0
            step = scale
            for i in range(300):
                hi += step
                step *= 2.0
                fhi = _cellmoment(code, p, a, hi, r, rtol, atol, maxdepth, xtol, maxiter) - target
                if fhi >= 0.0:
                    found = 1
                    break
                lo = hi
                flo = fhi
        if not found:
            bout[0] = NAN
            return _NO_CONV
    else:
        lo = a if a > slo else slo
        flo = -target
        w = hint if hint > 0.0 else scale
        if w < 4.0 * _EPS * (fabs(lo) + 1.0):
            w = 4.0 * _EPS * (fabs(lo) + 1.0)
        hi = lo + w
        fhi = _cellmoment(code, p, a, hi, r, rtol, atol, maxdepth, xtol, maxiter) - target
        found = 1 if fhi >= 0.0 else 0
        if not found:
            for i in range(300):
                lo = hi
                flo = fhi
                w *= 2.0
                hi = hi + w
                if shi < INF and hi >= shi:
                    hi = shi
                    fhi = mfull - target
                    found = 1
                    break
                fhi = _cellmoment(code, p, a, hi, r, rtol, atol, maxdepth, xtol, maxiter) - target
                if fhi >= 0.0:
                    found = 1
                    break
        if not found:
            bout[0] = NAN
            return _NO_CONV
    xtol_eff = xtol
    if 4.0 * _EPS * fabs(lo) > xtol_eff:
        xtol_eff = 4.0 * _EPS * fabs(lo)
    if 4.0 * _EPS * fabs(hi) > xtol_eff:
        xtol_eff = 4.0 * _EPS * fabs(hi)
    if leftmost:
        bout[0] = _bisect_leftmost_moment(code, p, a, target, r, lo, hi, xtol_eff,
                                          maxiter, rtol, atol, maxdepth)
        return _OK
    bout[0] = _brent_moment(code, p, a, target, r, lo, flo, hi, fhi, xtol_eff,
                            mrel * target, maxiter, rtol, atol, maxdepth)
    return _OK


# ---------------------------------------------------------- Python wrappers

def pdf_one(int code, double[::1] p, double x):
    return pdf_c(code, p, x)


def pm(int code, double[::1] p, double a, double b, double c, double r,
       double rtol, double atol, maxdepth):
    cdef double val = 0.0
    cdef double err = 0.0
    pm_c(code, p, a, b, c, r, rtol, atol, int(maxdepth), &val, &err)
    return val, err


def hpow(int code, double[::1] p, double a, double b, double pexp,
         double rtol, double atol, maxdepth):
    cdef double out[3]
    cdef double err = 0.0
    if b == INF and code == 4 and p[0] * pexp <= 1.0:
        return INF, INF
    if _integrate(code, p, a, b, 2, 0.0, 0.0, pexp,
                  p[0] * pexp - 1.0 if code == 4 else 0.0,
                  rtol, atol, int(maxdepth), out, &err):
        return INF, INF
    return out[0], err


def mom2(int code, double[::1] p, double a, double b, double rtol, double atol,
         maxdepth):
    cdef double j0 = 0.0
    cdef double cen = 0.0
    cdef double mom = 0.0
    cdef double err = 0.0
    mom2_c(code, p, a, b, rtol, atol, int(maxdepth), &j0, &cen, &mom, &err)
    return j0, cen, mom, err


def momr(int code, double[::1] p, double a, double b, double r, double clo,
         double chi, double rtol, double atol, maxdepth, double xtol, maxiter):
    cdef double j0 = 0.0
    cdef double cen = 0.0
    cdef double mom = 0.0
    cdef double err = 0.0
    momr_c(code, p, a, b, r, clo, chi, rtol, atol, int(maxdepth), xtol,
           int(maxiter), &j0, &cen, &mom, &err)
    return j0, cen, mom, err


def cellmom(int code, double[::1] p, double a, double b, double r, opts):
    cdef double rtol = opts[0]
    cdef double atol = opts[1]
    cdef int maxdepth = int(opts[2])
    cdef double xtol = opts[3]
    cdef int maxiter = int(opts[5])
    cdef double j0 = 0.0
    cdef double cen = 0.0
    cdef double mom = 0.0
    cdef double err = 0.0
    cellmom_c(code, p, a, b, r, rtol, atol, maxdepth, xtol, maxiter,
              &j0, &cen, &mom, &err)
    return j0, cen, mom, err


def extend(int code, double[::1] p, double a, double target, double r,
           double hint, leftmost, opts):
    cdef double rtol = opts[0]
    cdef double atol = opts[1]
    cdef int maxdepth = int(opts[2])
    cdef double xtol = opts[3]
    cdef double mrel = opts[4]
    cdef int maxiter = int(opts[5])
    cdef double b = 0.0
    cdef int st = extend_c(code, p, a, target, r, hint, int(leftmost),
                           rtol, atol, maxdepth, xtol, mrel, maxiter, &b)
    return b, st


def sweep(int code, double[::1] p, n, double target, double r, leftmost, opts):
    cdef double rtol = opts[0]
    cdef double atol = opts[1]
    cdef int maxdepth = int(opts[2])
    cdef double xtol = opts[3]
    cdef double mrel = opts[4]
    cdef int maxiter = int(opts[5])
    cdef int nn = int(n)
    cdef int lx = int(leftmost)
    cdef int i, st
    cdef double a = -INF
    cdef double hint = 0.0
    cdef double b = 0.0
    cdef double mt
    bounds = np.empty(nn - 1)
    cdef double[::1] bv = bounds
    with nogil:
        for i in range(nn - 1):
            st = extend_c(code, p, a, target, r, hint, lx,
                          rtol, atol, maxdepth, xtol, mrel, maxiter, &b)
            if st == _TOO_LARGE:
                while i < nn - 1:
                    bv[i] = bv[i - 1] if i > 0 else 0.0
                    i += 1
                with gil:
                    return bounds, -target, OK
            if st != _OK or b != b:
                with gil:
                    return bounds, float("nan"), NO_CONV
            hint = (b - a) if a > -INF else 0.0
            bv[i] = b
            a = b
        mt = _cellmoment(code, p, a, INF, r, rtol, atol, maxdepth, xtol, maxiter)
    return bounds, mt - target, OK


def split2(int code, double[::1] p, double a, double b, double r, leftmost, opts):
    cdef double rtol = opts[0]
    cdef double atol = opts[1]
    cdef int maxdepth = int(opts[2])
    cdef double xtol = opts[3]
    cdef double mrel = opts[4]
    cdef int maxiter = int(opts[5])
    cdef double slo, shi, A, B, mtot, loc, scale, lo, hi, flo, fhi, step, s
    cdef double xtol_eff
    cdef int i
    _support_c(code, p, &slo, &shi)
    A = a if a > slo else slo
    B = b if b < shi else shi
    if not A < B:
        return float("nan"), NO_CONV
    mtot = _cellmoment(code, p, a, b, r, rtol, atol, maxdepth, xtol, maxiter)
    if not (mtot > 0.0 and isfinite(mtot)):
        return float("nan"), NO_CONV
    _loc_scale_c(code, p, &loc, &scale)

    if A > -INF:
        lo = A
        flo = -mtot
    else:
        lo = B if B < INF else loc
        flo = (_cellmoment(code, p, a, lo, r, rtol, atol, maxdepth, xtol, maxiter)
               - _cellmoment(code, p, lo, b, r, rtol, atol, maxdepth, xtol, maxiter))
        step = scale
        for i in range(300):
            if flo <= 0.0:
                break
            lo -= step
            step *= 2.0
            flo = (_cellmoment(code, p, a, lo, r, rtol, atol, maxdepth, xtol, maxiter)
                   - _cellmoment(code, p, lo, b, r, rtol, atol, maxdepth, xtol, maxiter))
    if B < INF:
        hi = B
        fhi = mtot
    else:
        hi = A if A > -INF else loc
        if hi != lo:
            fhi = (_cellmoment(code, p, a, hi, r, rtol, atol, maxdepth, xtol, maxiter)
                   - _cellmoment(code, p, hi, b, r, rtol, atol, maxdepth, xtol, maxiter))
        else:
            fhi = flo
        step = scale
        for i in range(300):
            if fhi >= 0.0:
                break
            hi += step
            step *= 2.0
            fhi = (_cellmoment(code, p, a, hi, r, rtol, atol, maxdepth, xtol, maxiter)
                   - _cellmoment(code, p, hi, b, r, rtol, atol, maxdepth, xtol, maxiter))
    if flo == 0.0:
        return lo, OK
    xtol_eff = xtol
    if 4.0 * _EPS * fabs(lo) > xtol_eff:
        xtol_eff = 4.0 * _EPS * fabs(lo)
    if 4.0 * _EPS * fabs(hi) > xtol_eff:
        xtol_eff = 4.0 * _EPS * fabs(hi)
    s = _split_solve(code, p, a, b, r, lo, flo, hi, fhi, xtol_eff,
                     0.25 * mrel * mtot, maxiter, rtol, atol, maxdepth,
                     int(leftmost))
    return s, OK


cdef double _split_solve(int code, double[::1] p, double a, double b, double r,
                         double lo, double flo, double hi, double fhi,
                         double xtol, double ftol, int maxiter,
                         double rtol, double atol, int maxdepth,
                         int leftmost) noexcept nogil:
    cdef double brak_a = lo, fa = flo, brak_b = hi, fb = fhi
    cdef double brak_c, fc, d, e, s, pp, qq, rr, tol, mm, mid, fmid
    cdef int i
    if leftmost:
        for i in range(maxiter):
            if hi - lo <= xtol:
                break
            mid = 0.5 * (lo + hi)
            fmid = (_cellmoment(code, p, a, mid, r, rtol, atol, maxdepth, xtol, maxiter)
                    - _cellmoment(code, p, mid, b, r, rtol, atol, maxdepth, xtol, maxiter))
            if fmid >= 0.0:
                hi = mid
            else:
                lo = mid
        return hi
    if fa == 0.0:
        return brak_a
    if fb == 0.0:
        return brak_b
    brak_c = brak_a
    fc = fa
    d = brak_b - brak_a
    e = d
    for i in range(maxiter):
        if fb * fc > 0.0:
            brak_c = brak_a
            fc = fa
            d = brak_b - brak_a
            e = d
        if fabs(fc) < fabs(fb):
            brak_a = brak_b
            brak_b = brak_c
            brak_c = brak_a
            fa = fb
            fb = fc
            fc = fa
        tol = 2.0 * _EPS * fabs(brak_b) + 0.5 * xtol
        mm = 0.5 * (brak_c - brak_b)
        if fabs(mm) <= tol or fb == 0.0 or fabs(fb) <= ftol:
            return brak_b
        if fabs(e) < tol or fabs(fa) <= fabs(fb):
            d = mm
            e = mm
        else:
            s = fb / fa
            if brak_a == brak_c:
                pp = 2.0 * mm * s
                qq = 1.0 - s
            else:
                qq = fa / fc
                rr = fb / fc
                pp = s * (2.0 * mm * qq * (qq - rr) - (brak_b - brak_a) * (rr - 1.0))
                qq = (qq - 1.0) * (rr - 1.0) * (s - 1.0)
            if pp > 0.0:
                qq = -qq
            else:
                pp = -pp
            if 2.0 * pp < (3.0 * mm * qq - fabs(tol * qq) if
                           3.0 * mm * qq - fabs(tol * qq) < fabs(e * qq) else fabs(e * qq)):
                e = d
                d = pp / qq
            else:
                d = mm
                e = mm
        brak_a = brak_b
        fa = fb
        if fabs(d) > tol:
            brak_b += d
        elif mm > 0.0:
            brak_b += tol
        else:
            brak_b -= tol
        fb = (_cellmoment(code, p, a, brak_b, r, rtol, atol, maxdepth, xtol, maxiter)
              - _cellmoment(code, p, brak_b, b, r, rtol, atol, maxdepth, xtol, maxiter))
    return brak_b
