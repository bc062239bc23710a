# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: fixed-step RK4 and the pure-state squeezing search.

Behaviour is identical to ``_kernels_py``; see that module for docs.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, sqrt, cos, sin, fabs

cnp.import_array()

INFEASIBLE = 100.0

cdef double _INFEASIBLE = 100.0
cdef double _U_MAX = 30.0
cdef double _S_MAX = 20.0
cdef double _GOLDEN = 0.6180339887498949


def rk4_affine(matrix, drive, y0, double h, long steps, double cap):
    cdef double[:, ::1] m = np.ascontiguousarray(matrix, dtype=np.float64)
    cdef double[::1] d = np.ascontiguousarray(drive, dtype=np.float64)
    out_arr = np.empty((steps + 1, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double y[4]
    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double tmp[4]
    cdef double half = 0.5 * h
    cdef double sixth = h / 6.0
    cdef long i
    cdef int r, c
    cdef double acc
    for r in range(4):
        y[r] = y0[r]
        out[0, r] = y[r]
    for i in range(1, steps + 1):
        for r in range(4):
            acc = d[r]
            for c in range(4):
                acc += m[r, c] * y[c]
            k1[r] = acc
        for r in range(4):
            tmp[r] = y[r] + half * k1[r]
        for r in range(4):
            acc = d[r]
            for c in range(4):
                acc += m[r, c] * tmp[c]
            k2[r] = acc
        for r in range(4):
            tmp[r] = y[r] + half * k2[r]
        for r in range(4):
            acc = d[r]
            for c in range(4):
                acc += m[r, c] * tmp[c]
            k3[r] = acc
        for r in range(4):
            tmp[r] = y[r] + h * k3[r]
        for r in range(4):
            acc = d[r]
            for c in range(4):
                acc += m[r, c] * tmp[c]
            k4[r] = acc
        for r in range(4):
            y[r] = y[r] + sixth * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r])
            out[i, r] = y[r]
        if not y[0] <= cap:
            return out_arr, i
    return out_arr, -1


cdef inline double _eig2_min(double a, double b, double c) nogil:
    return 0.5 * (a + c) - sqrt(0.25 * (a - c) * (a - c) + b * b)


cdef struct Blocks:
    double a[2][2]
    double b[2][2]
    double d[2][2]


cdef void _blocks(double[:, ::1] sigma, double psi, double s_a, double s_b, Blocks* out) nogil:
    cdef double li[4]
    cdef double x[4][4]
    cdef double cm[2][2]
    cdef double x12c[2][2]
    cdef double x22c[2][2]
    cdef double cx22c[2][2]
    cdef int i, j, k
    li[0] = exp(-s_a)
    li[1] = 1.0 / li[0]
    li[2] = exp(-s_b)
    li[3] = 1.0 / li[2]
    for i in range(4):
        for j in range(4):
            x[i][j] = sigma[i, j] * li[i] * li[j]
    cm[0][0] = cos(psi)
    cm[0][1] = sin(psi)
    cm[1][0] = cm[0][1]
    cm[1][1] = -cm[0][0]
    for i in range(2):
        for j in range(2):
            x12c[i][j] = 0.0
            x22c[i][j] = 0.0
            for k in range(2):
                x12c[i][j] += x[i][2 + k] * cm[k][j]
                x22c[i][j] += x[2 + i][2 + k] * cm[k][j]
    for i in range(2):
        for j in range(2):
            cx22c[i][j] = 0.0
            for k in range(2):
                cx22c[i][j] += cm[i][k] * x22c[k][j]
    for i in range(2):
        for j in range(2):
            out.a[i][j] = 0.5 * (x[i][j] + x12c[i][j] + x12c[j][i] + cx22c[i][j])
            out.d[i][j] = 0.5 * (x[i][j] - x12c[i][j] - x12c[j][i] + cx22c[i][j])
            out.b[i][j] = 0.5 * (x[i][j] - x12c[i][j] + x12c[j][i] - cx22c[i][j])


cdef double _schur_min(Blocks* bl, double u) nogil:
    cdef double t = exp(u)
    cdef double p00 = bl.a[0][0] - t
    cdef double p01 = 0.5 * (bl.a[0][1] + bl.a[1][0])
    cdef double p11 = bl.a[1][1] - t
    cdef double det = p00 * p11 - p01 * p01
    cdef double i00 = p11 / det
    cdef double i01 = -p01 / det
    cdef double i11 = p00 / det
    cdef double q00 = i00 * bl.b[0][0] + i01 * bl.b[1][0]
    cdef double q10 = i01 * bl.b[0][0] + i11 * bl.b[1][0]
    cdef double q01 = i00 * bl.b[0][1] + i01 * bl.b[1][1]
    cdef double q11 = i01 * bl.b[0][1] + i11 * bl.b[1][1]
    cdef double r00 = bl.b[0][0] * q00 + bl.b[1][0] * q10
    cdef double r01 = bl.b[0][0] * q01 + bl.b[1][0] * q11
    cdef double r11 = bl.b[0][1] * q01 + bl.b[1][1] * q11
    cdef double it = 1.0 / t
    return _eig2_min(bl.d[0][0] - it - r00,
                     0.5 * (bl.d[0][1] + bl.d[1][0]) - r01,
                     bl.d[1][1] - it - r11)


cdef double _jacobi_min(double a[4][4]) nogil:
    # cyclic Jacobi on a symmetric 4x4; returns the smallest eigenvalue
    cdef int sweep, p, q, r
    cdef double off, norm, theta, t, c, s, apq, arp, arq, app, aqq
    norm = 0.0
    for p in range(4):
        for q in range(4):
            norm += a[p][q] * a[p][q]
    for sweep in range(60):
        off = 0.0
        for p in range(3):
            for q in range(p + 1, 4):
                off += a[p][q] * a[p][q]
        if off <= 1e-32 * norm or off == 0.0:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                app = a[p][p]
                aqq = a[q][q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                a[p][p] = app - t * apq
                a[q][q] = aqq + t * apq
                a[p][q] = 0.0
                a[q][p] = 0.0
                for r in range(4):
                    if r != p and r != q:
                        arp = a[r][p]
                        arq = a[r][q]
                        a[r][p] = c * arp - s * arq
                        a[p][r] = a[r][p]
                        a[r][q] = c * arq + s * arp
                        a[q][r] = a[r][q]
    c = a[0][0]
    for p in range(1, 4):
        if a[p][p] < c:
            c = a[p][p]
    return c


cdef double _full_min(Blocks* bl, double u) nogil:
    cdef double t = exp(u)
    cdef double y[4][4]
    cdef int i, j
    for i in range(2):
        for j in range(2):
            y[i][j] = bl.a[i][j]
            y[i][2 + j] = bl.b[i][j]
            y[2 + i][j] = bl.b[j][i]
            y[2 + i][2 + j] = bl.d[i][j]
        y[i][i] -= t
        y[2 + i][2 + i] -= 1.0 / t
    return _jacobi_min(y)


cdef double _edge(Blocks* bl, double inner, double outer, double tol) nogil:
    cdef int it
    cdef double mid
    for it in range(200):
        mid = 0.5 * (inner + outer)
        if _schur_min(bl, mid) >= -tol:
            inner = mid
        else:
            outer = mid
        if fabs(inner - outer) <= 1e-15 * (fabs(inner) if fabs(inner) > 1.0 else 1.0):
            break
    return 0.5 * fabs(inner)


cdef double _squeezing(double[:, ::1] sigma, double psi, double s_a, double s_b, double tol) nogil:
    cdef Blocks bl
    cdef double amin, dmin, lo, hi, width, outer, x1, x2, f1, f2, ustar, gstar, g, u
    if fabs(s_a) > _S_MAX or fabs(s_b) > _S_MAX:
        return _INFEASIBLE + fabs(s_a) + fabs(s_b)
    _blocks(sigma, psi, s_a, s_b, &bl)
    amin = _eig2_min(bl.a[0][0], 0.5 * (bl.a[0][1] + bl.a[1][0]), bl.a[1][1])
    dmin = _eig2_min(bl.d[0][0], 0.5 * (bl.d[0][1] + bl.d[1][0]), bl.d[1][1])
    if amin <= 0.0 or dmin <= 0.0:
        return _INFEASIBLE + 1.0
    lo = -log(dmin)
    if lo < -_U_MAX:
        lo = -_U_MAX
    hi = log(amin)
    if hi > _U_MAX:
        hi = _U_MAX
    if hi - lo < 1e-7:
        u = 0.5 * (lo + hi)
        g = _full_min(&bl, u)
        if g >= -tol:
            return 0.5 * fabs(u)
        return _INFEASIBLE + (lo - hi if lo > hi else 0.0) - g
    width = hi - lo
    lo += 1e-14 * width
    hi -= 1e-14 * width
    if lo < 0.0 < hi and _schur_min(&bl, 0.0) >= -tol:
        return 0.0
    if lo < 0.0 < hi:
        outer = 0.0
    elif lo >= 0.0:
        outer = lo
    else:
        outer = hi
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = _schur_min(&bl, x1)
    f2 = _schur_min(&bl, x2)
    while hi - lo > 1e-13:
        if f1 < f2:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = _schur_min(&bl, x2)
        else:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = _schur_min(&bl, x1)
    if f1 >= f2:
        ustar = x1
        gstar = f1
    else:
        ustar = x2
        gstar = f2
    if gstar < -tol:
        return _INFEASIBLE - gstar
    return _edge(&bl, ustar, outer, tol)


def pure_state_squeezing(sigma, double psi, double s_a, double s_b, double tol):
    cdef double[:, ::1] sv = np.ascontiguousarray(sigma, dtype=np.float64)
    return _squeezing(sv, psi, s_a, s_b, tol)
