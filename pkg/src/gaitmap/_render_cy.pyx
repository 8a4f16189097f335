# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled render kernel.

Bit-identical twin of _render_np.py: identical bounding-box rule,
accumulation order, and deterministic exp (same constants, same IEEE-754
operation sequence). Built with -ffp-contract=off so the C compiler cannot
fuse a*b+c; see setup.py. Change this file and _render_np.py together.
"""

import numpy as np

from libc.math cimport ceil, floor, ldexp, rint

BACKEND_NAME = "cython"

cdef double ARG_MIN = -746.0
cdef double LOG2E = 1.4426950408889634
cdef double LN2_HI = 0.6931471803691238
cdef double LN2_LO = 1.9082149292705877e-10

cdef double C13 = 1.6059043836821613e-10
cdef double C12 = 2.08767569878681e-09
cdef double C11 = 2.505210838544172e-08
cdef double C10 = 2.755731922398589e-07
cdef double C9 = 2.7557319223985893e-06
cdef double C8 = 2.48015873015873e-05
cdef double C7 = 0.0001984126984126984
cdef double C6 = 0.001388888888888889
cdef double C5 = 0.008333333333333333
cdef double C4 = 0.041666666666666664
cdef double C3 = 0.16666666666666666
cdef double C2 = 0.5
cdef double C1 = 1.0
cdef double C0 = 1.0


cdef inline double detexp(double x) noexcept nogil:
    cdef double k, t, p
    if not (x > ARG_MIN):  # also maps NaN to ARG_MIN
        x = ARG_MIN
    k = rint(x * LOG2E)
    t = (x - k * LN2_HI) - k * LN2_LO
    p = C13
    p = p * t + C12
    p = p * t + C11
    p = p * t + C10
    p = p * t + C9
    p = p * t + C8
    p = p * t + C7
    p = p * t + C6
    p = p * t + C5
    p = p * t + C4
    p = p * t + C3
    p = p * t + C2
    p = p * t + C1
    p = p * t + C0
    return ldexp(p, <int>k)


cdef inline Py_ssize_t clip_lo(double v, Py_ssize_t n) noexcept nogil:
    if v <= 0.0:
        return 0
    if v >= <double>n:
        return n
    return <Py_ssize_t>ceil(v)


cdef inline Py_ssize_t clip_hi(double v, Py_ssize_t n) noexcept nogil:
    if v >= <double>(n - 1):
        return n
    if v < 0.0:
        return 0
    return <Py_ssize_t>floor(v) + 1


def render_joint_channel(double[:, ::1] pts, Py_ssize_t R, double sigma, double radius):
    """Confidence-weighted Gaussian splat of each point, summed into one (R, R) float32 map."""
    canvas64 = np.zeros((R, R), dtype=np.float64)
    cdef double[:, ::1] cv = canvas64
    cdef double neg_inv = -1.0 / (2.0 * sigma * sigma)
    cdef double r = radius * sigma
    cdef Py_ssize_t K = pts.shape[0]
    cdef Py_ssize_t k, i, j, x0, x1, y0, y1
    cdef double x, y, c, dx, dy, d2
    with nogil:
        for k in range(K):
            x = pts[k, 0]
            y = pts[k, 1]
            c = pts[k, 2]
            if c == 0.0:
                continue
            x0 = clip_lo(x - r, R)
            x1 = clip_hi(x + r, R)
            y0 = clip_lo(y - r, R)
            y1 = clip_hi(y + r, R)
            if x0 >= x1 or y0 >= y1:
                continue
            for j in range(y0, y1):
                dy = <double>j - y
                for i in range(x0, x1):
                    dx = <double>i - x
                    d2 = dx * dx + dy * dy
                    cv[j, i] += detexp(d2 * neg_inv) * c
    return canvas64.astype(np.float32)


def render_limb_channel(double[:, ::1] pts, int[:, ::1] limbs, Py_ssize_t R,
                        double sigma, double radius):
    """Gaussian of point-to-segment distance per limb, summed into one (R, R) float32 map."""
    canvas64 = np.zeros((R, R), dtype=np.float64)
    cdef double[:, ::1] cv = canvas64
    cdef double neg_inv = -1.0 / (2.0 * sigma * sigma)
    cdef double r = radius * sigma
    cdef Py_ssize_t N = limbs.shape[0]
    cdef Py_ssize_t n, a, b, i, j, x0, xe, y0, ye
    cdef double x1, y1, c1, x2, y2, c2, w, lx, hx, ly, hy
    cdef double vx, vy, vv, wx, wy, t, dx, dy, d2
    with nogil:
        for n in range(N):
            a = limbs[n, 0]
            b = limbs[n, 1]
            x1 = pts[a, 0]
            y1 = pts[a, 1]
            c1 = pts[a, 2]
            x2 = pts[b, 0]
            y2 = pts[b, 1]
            c2 = pts[b, 2]
            w = c1 if c1 < c2 else c2
            if w == 0.0:
                continue
            lx = x1 if x1 < x2 else x2
            hx = x1 if x1 > x2 else x2
            ly = y1 if y1 < y2 else y2
            hy = y1 if y1 > y2 else y2
            x0 = clip_lo(lx - r, R)
            xe = clip_hi(hx + r, R)
            y0 = clip_lo(ly - r, R)
            ye = clip_hi(hy + r, R)
            if x0 >= xe or y0 >= ye:
                continue
            vx = x2 - x1
            vy = y2 - y1
            vv = vx * vx + vy * vy
            for j in range(y0, ye):
                wy = <double>j - y1
                for i in range(x0, xe):
                    wx = <double>i - x1
                    if vv > 0.0:
                        t = (wx * vx + wy * vy) / vv
                        if t < 0.0:
                            t = 0.0
                        elif t > 1.0:
                            t = 1.0
                        dx = wx - t * vx
                        dy = wy - t * vy
                    else:
                        dx = wx
                        dy = wy
                    d2 = dx * dx + dy * dy
                    cv[j, i] += detexp(d2 * neg_inv) * w
    return canvas64.astype(np.float32)
